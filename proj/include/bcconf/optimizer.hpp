#pragma once

// Greedy blockchain-mode search, the exhaustive oracle it is measured
// against, and the side-by-side comparison used for convergence plots.
//
// One "iteration" is one utility evaluation throughout.

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "bcconf/metrics.hpp"
#include "bcconf/model.hpp"

namespace bcconf {

inline constexpr std::int64_t kDefaultGridCap = 1'000'000;

enum class SolverKind { greedy, exhaustive };

std::string_view to_string(SolverKind kind);

struct SolverResult {
    BlockchainConfig best_config;
    double best_utility = 0.0;
    OptimizationTrace trace;
    SolverKind solver = SolverKind::greedy;
};

/// Coordinate sweep with early exit: for each m from the lower bound up,
/// theta is swept upward until the utility first increases; the outer loop
/// stops as soon as the per-m best gets worse than the previous m's.
///
/// `box` may narrow the scenario's bounds (for example a pinned verifier
/// count); normalization still refers to the full scenario.
SolverResult solve_greedy(const UtilityModel& model, const QosWeights& weights, const SearchBox& box);
SolverResult solve_greedy(const ScenarioParams& params, const QosWeights& weights);

/// Evaluates every feasible configuration, m outer ascending and theta
/// inner ascending. Ties keep the earlier configuration, i.e. smaller m
/// then smaller theta. Throws RefusalError when the box exceeds `grid_cap`.
SolverResult solve_exhaustive(const UtilityModel& model, const QosWeights& weights,
                              const SearchBox& box, std::int64_t grid_cap = kDefaultGridCap);
SolverResult solve_exhaustive(const ScenarioParams& params, const QosWeights& weights,
                              std::int64_t grid_cap = kDefaultGridCap);

/// True when, along every row and every column of the box, the utility is
/// non-increasing and then non-decreasing.
bool is_coordinatewise_unimodal(const UtilityModel& model, const QosWeights& weights,
                                const SearchBox& box);

/// Running minimum of the trace utilities, one value per evaluation.
std::vector<double> best_so_far(const OptimizationTrace& trace);

struct ComparisonReport {
    SolverResult greedy;
    SolverResult exhaustive;
    double utility_gap = 0.0;  // greedy best minus exhaustive best, never negative
    bool greedy_suboptimal = false;
    bool coordinatewise_unimodal = false;
    std::vector<double> greedy_best_so_far;
    std::vector<double> exhaustive_best_so_far;
};

/// Gaps at or below this are attributed to rounding between distinct
/// configurations with equal utility.
inline constexpr double kGapTolerance = 1e-9;

ComparisonReport compare(const UtilityModel& model, const QosWeights& weights, const SearchBox& box,
                         std::int64_t grid_cap = kDefaultGridCap);
ComparisonReport compare(const ScenarioParams& params, const QosWeights& weights,
                         std::int64_t grid_cap = kDefaultGridCap);

/// CSV with columns iteration,m,theta,utility,best_so_far.
void write_trace_csv(std::ostream& out, const OptimizationTrace& trace);

}  // namespace bcconf
