#include "bcconf/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

#include "bcconf/csv.hpp"
#include "bcconf/errors.hpp"

namespace bcconf {

std::string_view to_string(SolverKind kind) {
    return kind == SolverKind::greedy ? "greedy" : "exhaustive";
}

namespace {

void require_box(const ScenarioParams& p, const SearchBox& box) {
    const SearchBox full = full_box(p);
    const bool ok = box.min_verifiers >= full.min_verifiers && box.max_verifiers <= full.max_verifiers &&
                    box.min_txn_per_block >= full.min_txn_per_block &&
                    box.max_txn_per_block <= full.max_txn_per_block &&
                    box.min_verifiers <= box.max_verifiers &&
                    box.min_txn_per_block <= box.max_txn_per_block;
    if (!ok) throw ConstraintError("search box lies outside the scenario bounds or is empty");
}

class Recorder {
public:
    Recorder(const UtilityModel& model, const QosWeights& weights) : model_(model), weights_(weights) {}

    double operator()(int m, int theta) {
        const BlockchainConfig c{m, theta};
        const double u = model_.utility(weights_, c);
        trace_.entries.push_back({int(trace_.entries.size()) + 1, c, u});
        return u;
    }

    OptimizationTrace finish(const BlockchainConfig& result) && {
        trace_.result = result;
        trace_.evaluations = int(trace_.entries.size());
        return std::move(trace_);
    }

private:
    const UtilityModel& model_;
    const QosWeights& weights_;
    OptimizationTrace trace_;
};

bool unimodal(const std::vector<double>& seq) {
    std::size_t i = 0;
    while (i + 1 < seq.size() && seq[i + 1] <= seq[i]) ++i;
    while (i + 1 < seq.size() && seq[i + 1] >= seq[i]) ++i;
    return i + 1 >= seq.size();
}

}  // namespace

SolverResult solve_greedy(const UtilityModel& model, const QosWeights& weights, const SearchBox& box) {
    require_box(model.params(), box);
    validate(weights);

    Recorder eval(model, weights);
    const int t = box.min_txn_per_block;
    const int n = box.max_txn_per_block;

    BlockchainConfig best{box.max_verifiers, n};
    double best_u = 0.0;
    BlockchainConfig prev{};
    double prev_u = 0.0;
    bool settled = false;

    for (int m = box.min_verifiers; m <= box.max_verifiers; ++m) {
        double last = eval(m, t);
        int theta_star = n;
        for (int theta = t + 1; theta <= n; ++theta) {
            const double u = eval(m, theta);
            if (u > last) {
                theta_star = theta - 1;
                break;
            }
            last = u;
        }
        // `last` now holds U(m, theta_star) whether or not the sweep broke early.
        if (m > box.min_verifiers && last > prev_u) {
            best = prev;
            best_u = prev_u;
            settled = true;
            break;
        }
        prev = {m, theta_star};
        prev_u = last;
    }
    if (!settled) {
        best = prev;
        best_u = prev_u;
    }

    SolverResult r;
    r.best_config = best;
    r.best_utility = best_u;
    r.trace = std::move(eval).finish(best);
    r.solver = SolverKind::greedy;
    return r;
}

SolverResult solve_greedy(const ScenarioParams& params, const QosWeights& weights) {
    return solve_greedy(UtilityModel(params), weights, full_box(params));
}

SolverResult solve_exhaustive(const UtilityModel& model, const QosWeights& weights, const SearchBox& box,
                              std::int64_t grid_cap) {
    require_box(model.params(), box);
    validate(weights);
    if (box.size() > grid_cap) {
        throw RefusalError("grid of " + std::to_string(box.size()) + " configurations exceeds the cap of " +
                           std::to_string(grid_cap));
    }

    Recorder eval(model, weights);
    BlockchainConfig best{box.min_verifiers, box.min_txn_per_block};
    double best_u = std::numeric_limits<double>::infinity();
    for (int m = box.min_verifiers; m <= box.max_verifiers; ++m) {
        for (int theta = box.min_txn_per_block; theta <= box.max_txn_per_block; ++theta) {
            const double u = eval(m, theta);
            if (u < best_u) {
                best_u = u;
                best = {m, theta};
            }
        }
    }

    SolverResult r;
    r.best_config = best;
    r.best_utility = best_u;
    r.trace = std::move(eval).finish(best);
    r.solver = SolverKind::exhaustive;
    return r;
}

SolverResult solve_exhaustive(const ScenarioParams& params, const QosWeights& weights, std::int64_t grid_cap) {
    return solve_exhaustive(UtilityModel(params), weights, full_box(params), grid_cap);
}

bool is_coordinatewise_unimodal(const UtilityModel& model, const QosWeights& weights, const SearchBox& box) {
    require_box(model.params(), box);
    const int rows = box.max_verifiers - box.min_verifiers + 1;
    const int cols = box.max_txn_per_block - box.min_txn_per_block + 1;
    std::vector<std::vector<double>> grid(static_cast<std::size_t>(rows),
                                          std::vector<double>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            grid[std::size_t(i)][std::size_t(j)] =
                model.utility(weights, {box.min_verifiers + i, box.min_txn_per_block + j});
        }
    }
    for (const auto& row : grid) {
        if (!unimodal(row)) return false;
    }
    std::vector<double> column(static_cast<std::size_t>(rows));
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) column[std::size_t(i)] = grid[std::size_t(i)][std::size_t(j)];
        if (!unimodal(column)) return false;
    }
    return true;
}

std::vector<double> best_so_far(const OptimizationTrace& trace) {
    std::vector<double> out;
    out.reserve(trace.entries.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : trace.entries) {
        best = std::min(best, e.utility);
        out.push_back(best);
    }
    return out;
}

ComparisonReport compare(const UtilityModel& model, const QosWeights& weights, const SearchBox& box,
                         std::int64_t grid_cap) {
    ComparisonReport r;
    r.exhaustive = solve_exhaustive(model, weights, box, grid_cap);
    r.greedy = solve_greedy(model, weights, box);
    r.utility_gap = r.greedy.best_utility - r.exhaustive.best_utility;
    r.greedy_suboptimal = r.utility_gap > kGapTolerance;
    r.coordinatewise_unimodal = is_coordinatewise_unimodal(model, weights, box);
    r.greedy_best_so_far = best_so_far(r.greedy.trace);
    r.exhaustive_best_so_far = best_so_far(r.exhaustive.trace);
    return r;
}

ComparisonReport compare(const ScenarioParams& params, const QosWeights& weights, std::int64_t grid_cap) {
    return compare(UtilityModel(params), weights, full_box(params), grid_cap);
}

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace) {
    csv::row(out, "iteration", "m", "theta", "utility", "best_so_far");
    const auto best = best_so_far(trace);
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const auto& e = trace.entries[i];
        csv::row(out, e.iteration, e.config.num_verifiers, e.config.txns_per_block, e.utility, best[i]);
    }
}

}  // namespace bcconf
