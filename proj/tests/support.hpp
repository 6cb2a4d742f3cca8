#pragma once

// Test-only helpers: random scenario generators and a brute-force oracle
// for the closed-form model that shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bcconf/model.hpp"

namespace bcconf::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(BCCONF_FIXTURE_DIR) + "/" + name;
}

/// Uniform helpers over a 64-bit Mersenne twister; reproducible per seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct ScenarioShape {
    int max_m = 5;
    int max_n = 6;
    bool positive_prices = false;
};

inline ScenarioParams random_scenario(Gen& g, ScenarioShape shape = {}) {
    ScenarioParams p;
    p.transaction_size_bits = g.real(1e3, 1e5);
    p.verification_workload = g.real(1.0, 50.0);
    p.feedback_size_bits = g.real(1e4, 1e6);
    p.downlink_rate_bps = g.real(1e5, 1e7);
    p.uplink_rate_bps = g.real(1e5, 1e7);
    p.broadcast_coeff = g.coin() ? 0.0 : std::pow(10.0, g.real(-9.0, -4.0));
    p.security_coeff = g.real(0.1, 5.0);
    p.network_scale_exponent = g.real(2.0, 4.0);
    p.max_verifiers = g.integer(1, shape.max_m);
    p.min_verifiers = g.integer(1, p.max_verifiers);
    p.max_txn_per_block = g.integer(1, shape.max_n);
    p.min_txn_per_block = g.integer(1, p.max_txn_per_block);

    const int population = p.max_verifiers + g.integer(0, 2);
    for (int i = 0; i < population; ++i) {
        VerifierProfile v;
        v.id = std::uint32_t(i);
        // A coarse grid of capacities produces ties now and then.
        v.compute_capacity = g.coin() ? double(g.integer(1, 4)) : g.real(0.5, 10.0);
        const double lo = shape.positive_prices ? 0.01 : 0.0;
        v.unit_price = (!shape.positive_prices && g.integer(0, 5) == 0) ? 0.0 : g.real(lo, 2.0);
        p.verifiers.push_back(v);
    }
    std::shuffle(p.verifiers.begin(), p.verifiers.end(), g.engine());
    return p;
}

inline QosWeights random_weights(Gen& g) {
    const double a = g.real(0.0, 1.0);
    const double b = g.real(0.0, 1.0);
    const double c = g.real(0.0, 1.0);
    const double sum = a + b + c;
    return {a / sum, b / sum, c / sum};
}

/// Independent re-statement of the model: verifiers are picked one at a
/// time by linear scan for the smallest K/x (ties to the lower id).
struct Oracle {
    const ScenarioParams& p;

    std::vector<VerifierProfile> pick(int m) const {
        std::vector<VerifierProfile> pool = p.verifiers;
        std::vector<VerifierProfile> out;
        for (int k = 0; k < m; ++k) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < pool.size(); ++i) {
                const double ti = p.verification_workload / pool[i].compute_capacity;
                const double tb = p.verification_workload / pool[best].compute_capacity;
                if (ti < tb || (ti == tb && pool[i].id < pool[best].id)) best = i;
            }
            out.push_back(pool[best]);
            pool.erase(pool.begin() + std::ptrdiff_t(best));
        }
        return out;
    }

    double latency(int m, int theta) const {
        double slowest = 0.0;
        for (const auto& v : pick(m)) slowest = std::max(slowest, p.verification_workload / v.compute_capacity);
        return theta * p.transaction_size_bits / p.downlink_rate_bps + slowest +
               p.broadcast_coeff * theta * p.transaction_size_bits * m + p.feedback_size_bits / p.uplink_rate_bps;
    }
    double security(int m) const { return p.security_coeff * std::pow(double(m), p.network_scale_exponent); }
    double cost(int m, int theta) const {
        double sum = 0.0;
        for (const auto& v : pick(m)) sum += v.unit_price * v.compute_capacity;
        return sum / theta;
    }

    /// Grid maxima found by scanning every feasible configuration.
    double max_latency() const {
        double best = 0.0;
        for (int m = p.min_verifiers; m <= p.max_verifiers; ++m)
            for (int t = p.min_txn_per_block; t <= p.max_txn_per_block; ++t) best = std::max(best, latency(m, t));
        return best;
    }
    double max_security() const {
        double best = 0.0;
        for (int m = p.min_verifiers; m <= p.max_verifiers; ++m) best = std::max(best, security(m));
        return best;
    }
    double max_cost() const {
        double best = 0.0;
        for (int m = p.min_verifiers; m <= p.max_verifiers; ++m)
            for (int t = p.min_txn_per_block; t <= p.max_txn_per_block; ++t) best = std::max(best, cost(m, t));
        return best;
    }

    double utility(const QosWeights& w, int m, int theta) const {
        const double cm = max_cost();
        return w.latency_weight * latency(m, theta) / max_latency() + w.security_weight * max_security() / security(m) +
               w.cost_weight * (cm > 0.0 ? cost(m, theta) / cm : 0.0);
    }
};

/// Non-increasing then non-decreasing.
inline bool is_unimodal(const std::vector<double>& v) {
    std::size_t i = 0;
    while (i + 1 < v.size() && v[i + 1] <= v[i]) ++i;
    while (i + 1 < v.size() && v[i + 1] >= v[i]) ++i;
    return i + 1 >= v.size();
}

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace bcconf::testing
