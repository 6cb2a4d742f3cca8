#pragma once

// Discrete-event model of DPoS block-verification rounds.
//
// Each round: the BM sends the block (theta*B/r_d), every selected
// verifier verifies it (K/x_i), the results are broadcast and compared
// (psi*theta*B*m, starting when the last verification ends) and feedback
// reaches the BM (O/r_u). The block commits on feedback and the next round
// starts at the commit instant.
//
// Jitter: with `uniform`, every service time is multiplied by
// 1 - s + 2*s*u where u = (w >> 11) * 2^-53 and w is the next output of
// std::mt19937_64 seeded with `rng_seed` (generator "mt64-u53", v1). Draws
// happen in scheduling order: dispatch, then verifiers in selection order,
// then broadcast, then feedback.

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "bcconf/metrics.hpp"
#include "bcconf/model.hpp"
#include "bcconf/optimizer.hpp"

namespace bcconf::sim {

/// Declaration order is the tie-break rank for simultaneous events.
enum class EventKind {
    bm_rotated,
    block_dispatched,
    verification_done,
    broadcast_done,
    feedback_received,
    block_committed,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
    double time_s = 0.0;
    EventKind kind = EventKind::block_dispatched;
    std::uint32_t actor_id = 0;
    int round = 0;

    bool operator==(const SimEvent&) const = default;
};

enum class JitterKind { none, uniform };

struct Jitter {
    JitterKind distribution = JitterKind::none;
    double spread_fraction = 0.0;  // in [0, 1)

    bool operator==(const Jitter&) const = default;
};

/// Parses "none" or "uniform:<spread>". Throws ValidationError.
Jitter parse_jitter(std::string_view text);

struct SimConfig {
    ScenarioParams scenario;
    BlockchainConfig config;
    int rounds = 1;
    Jitter jitter;
    std::uint64_t rng_seed = 0;
    bool rotate_bm = false;
};

struct SimReport {
    std::vector<double> per_round_latency_s;
    double mean_latency_s = 0.0;
    double analytic_latency_s = 0.0;
    std::vector<SimEvent> events;
    int committed_blocks = 0;

    bool operator==(const SimReport&) const = default;
};

SimReport run(const SimConfig& sim);

inline constexpr double kModelTolerance = 1e-9;

struct SweepCell {
    BlockchainConfig config;
    double analytic_latency_s = 0.0;
    double mean_latency_s = 0.0;
    double mean_rel_deviation = 0.0;     // (mean - analytic) / analytic
    double max_abs_rel_deviation = 0.0;  // worst single round
};

struct SweepReport {
    std::vector<SweepCell> cells;  // m outer ascending, theta inner ascending
    double max_abs_rel_deviation = 0.0;
};

/// Simulates every feasible configuration. Without jitter any cell whose
/// worst round deviates from the closed form by more than kModelTolerance
/// (relative) raises ModelMismatchError naming that configuration.
SweepReport sweep_sim(const ScenarioParams& scenario, int rounds, std::uint64_t seed, Jitter jitter = {},
                      std::int64_t grid_cap = kDefaultGridCap);

/// Columns time_s,round,kind,actor_id.
void write_events_csv(std::ostream& out, const std::vector<SimEvent>& events);
/// One JSON object per line with the same fields.
void write_events_ndjson(std::ostream& out, const std::vector<SimEvent>& events);

}  // namespace bcconf::sim
