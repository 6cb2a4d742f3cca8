#include "bcconf/dpos_sim.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include <json.hpp>

#include "bcconf/csv.hpp"
#include "bcconf/errors.hpp"

namespace bcconf::sim {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::bm_rotated: return "bm_rotated";
        case EventKind::block_dispatched: return "block_dispatched";
        case EventKind::verification_done: return "verification_done";
        case EventKind::broadcast_done: return "broadcast_done";
        case EventKind::feedback_received: return "feedback_received";
        case EventKind::block_committed: return "block_committed";
    }
    return "unknown";
}

Jitter parse_jitter(std::string_view text) {
    if (text == "none") return {};
    constexpr std::string_view prefix = "uniform:";
    if (text.substr(0, prefix.size()) != prefix) {
        throw ValidationError("jitter must be 'none' or 'uniform:<spread>', got '" + std::string(text) + "'");
    }
    const auto num = text.substr(prefix.size());
    double spread = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), spread);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
        throw ValidationError("jitter spread '" + std::string(num) + "' is not a number");
    }
    if (!(spread >= 0.0 && spread < 1.0)) throw ValidationError("jitter spread must lie in [0, 1)");
    return {JitterKind::uniform, spread};
}

namespace {

int rank(EventKind k) { return static_cast<int>(k); }

struct Pending {
    SimEvent event;
    std::uint64_t seq = 0;
};

struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
        const auto key = [](const Pending& p) {
            return std::make_tuple(p.event.time_s, p.event.round, rank(p.event.kind), p.event.actor_id, p.seq);
        };
        return key(a) > key(b);
    }
};

class EventQueue {
public:
    void push(const SimEvent& e) { heap_.push({e, next_seq_++}); }
    bool empty() const { return heap_.empty(); }
    SimEvent pop() {
        SimEvent e = heap_.top().event;
        heap_.pop();
        return e;
    }

private:
    std::priority_queue<Pending, std::vector<Pending>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

class Simulation {
public:
    Simulation(const SimConfig& sim, const UtilityModel& model)
        : sim_(sim), selected_(model.select(sim.config.num_verifiers)), rng_(sim.rng_seed) {}

    SimReport run() {
        start_round(0, 0.0);
        while (!queue_.empty()) {
            const SimEvent e = queue_.pop();
            report_.events.push_back(e);
            handle(e);
        }
        double sum = 0.0;
        for (double l : report_.per_round_latency_s) sum += l;
        report_.mean_latency_s = sum / double(report_.per_round_latency_s.size());
        return std::move(report_);
    }

private:
    double factor() {
        if (sim_.jitter.distribution == JitterKind::none) return 1.0;
        const double s = sim_.jitter.spread_fraction;
        const double u = double(rng_() >> 11) * 0x1.0p-53;
        return 1.0 - s + 2.0 * s * u;
    }

    std::uint32_t bm_for(int round) const {
        const std::size_t slot = sim_.rotate_bm ? std::size_t(round) % selected_.size() : 0;
        return selected_[slot].id;
    }

    void schedule(double time, EventKind kind, std::uint32_t actor, int round) {
        queue_.push({time, kind, actor, round});
    }

    void start_round(int round, double now) {
        round_start_ = now;
        pending_verifications_ = selected_.size();
        bm_ = bm_for(round);
        if (sim_.rotate_bm && round > 0) schedule(now, EventKind::bm_rotated, bm_, round);

        const auto& p = sim_.scenario;
        const double theta = sim_.config.txns_per_block;
        schedule(now + theta * p.transaction_size_bits / p.downlink_rate_bps * factor(),
                 EventKind::block_dispatched, bm_, round);
    }

    void handle(const SimEvent& e) {
        const auto& p = sim_.scenario;
        const double theta = sim_.config.txns_per_block;
        const double m = double(selected_.size());
        switch (e.kind) {
            case EventKind::bm_rotated:
                break;
            case EventKind::block_dispatched:
                for (const auto& v : selected_) {
                    schedule(e.time_s + p.verification_workload / v.compute_capacity * factor(),
                             EventKind::verification_done, v.id, e.round);
                }
                break;
            case EventKind::verification_done:
                if (--pending_verifications_ == 0) {
                    schedule(e.time_s + p.broadcast_coeff * theta * p.transaction_size_bits * m * factor(),
                             EventKind::broadcast_done, bm_, e.round);
                }
                break;
            case EventKind::broadcast_done:
                schedule(e.time_s + p.feedback_size_bits / p.uplink_rate_bps * factor(),
                         EventKind::feedback_received, bm_, e.round);
                break;
            case EventKind::feedback_received:
                report_.per_round_latency_s.push_back(e.time_s - round_start_);
                schedule(e.time_s, EventKind::block_committed, bm_, e.round);
                break;
            case EventKind::block_committed:
                ++report_.committed_blocks;
                if (e.round + 1 < sim_.rounds) start_round(e.round + 1, e.time_s);
                break;
        }
    }

    const SimConfig& sim_;
    std::vector<VerifierProfile> selected_;
    std::mt19937_64 rng_;
    EventQueue queue_;
    SimReport report_;

    double round_start_ = 0.0;
    std::size_t pending_verifications_ = 0;
    std::uint32_t bm_ = 0;
};

void check(const SimConfig& sim) {
    if (sim.rounds < 1) throw ValidationError("rounds must be positive");
    if (sim.jitter.distribution == JitterKind::uniform &&
        !(sim.jitter.spread_fraction >= 0.0 && sim.jitter.spread_fraction < 1.0)) {
        throw ValidationError("jitter spread must lie in [0, 1)");
    }
}

SimReport run_with(const SimConfig& sim, const UtilityModel& model) {
    check(sim);
    const double analytic = model.latency(sim.config);  // throws ConstraintError if infeasible
    SimReport r = Simulation(sim, model).run();
    r.analytic_latency_s = analytic;
    return r;
}

}  // namespace

SimReport run(const SimConfig& sim) {
    return run_with(sim, UtilityModel(sim.scenario));
}

SweepReport sweep_sim(const ScenarioParams& scenario, int rounds, std::uint64_t seed, Jitter jitter,
                      std::int64_t grid_cap) {
    const UtilityModel model(scenario);
    const SearchBox box = full_box(scenario);
    if (box.size() > grid_cap) {
        throw RefusalError("grid of " + std::to_string(box.size()) + " configurations exceeds the cap of " +
                           std::to_string(grid_cap));
    }

    SweepReport out;
    for (int m = box.min_verifiers; m <= box.max_verifiers; ++m) {
        for (int theta = box.min_txn_per_block; theta <= box.max_txn_per_block; ++theta) {
            SimConfig sim;
            sim.scenario = scenario;
            sim.config = {m, theta};
            sim.rounds = rounds;
            sim.jitter = jitter;
            sim.rng_seed = seed;
            const SimReport r = run_with(sim, model);

            SweepCell cell;
            cell.config = sim.config;
            cell.analytic_latency_s = r.analytic_latency_s;
            cell.mean_latency_s = r.mean_latency_s;
            cell.mean_rel_deviation = (r.mean_latency_s - r.analytic_latency_s) / r.analytic_latency_s;
            for (double l : r.per_round_latency_s) {
                cell.max_abs_rel_deviation = std::max(
                    cell.max_abs_rel_deviation, std::abs(l - r.analytic_latency_s) / r.analytic_latency_s);
            }
            if (jitter.distribution == JitterKind::none && !(cell.max_abs_rel_deviation <= kModelTolerance)) {
                throw ModelMismatchError("simulated latency deviates from the closed form by " +
                                         csv::number(cell.max_abs_rel_deviation) + " (relative) at m=" +
                                         std::to_string(m) + ", theta=" + std::to_string(theta));
            }
            out.max_abs_rel_deviation = std::max(out.max_abs_rel_deviation, cell.max_abs_rel_deviation);
            out.cells.push_back(cell);
        }
    }
    return out;
}

void write_events_csv(std::ostream& out, const std::vector<SimEvent>& events) {
    csv::row(out, "time_s", "round", "kind", "actor_id");
    for (const auto& e : events) csv::row(out, e.time_s, e.round, to_string(e.kind), e.actor_id);
}

void write_events_ndjson(std::ostream& out, const std::vector<SimEvent>& events) {
    for (const auto& e : events) {
        nlohmann::json j = {{"time_s", e.time_s},
                            {"round", e.round},
                            {"kind", std::string(to_string(e.kind))},
                            {"actor_id", e.actor_id}};
        out << j.dump() << '\n';
    }
}

}  // namespace bcconf::sim
