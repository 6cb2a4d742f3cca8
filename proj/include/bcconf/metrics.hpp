#pragma once

// Closed-form latency, security, cost and the weighted utility over a
// scenario. Everything here is a pure function of immutable inputs.

#include <span>
#include <vector>

#include "bcconf/model.hpp"

namespace bcconf {

struct LatencyTerms {
    double downlink_s = 0.0;   // block transmission BM -> verifiers
    double verify_s = 0.0;     // slowest selected verifier
    double broadcast_s = 0.0;  // result broadcast and comparison
    double feedback_s = 0.0;   // verifiers -> BM

    double total() const noexcept { return downlink_s + verify_s + broadcast_s + feedback_s; }
};

struct NormalizedTerms {
    double latency_ratio = 0.0;   // L / l_m
    double security_ratio = 0.0;  // s_m / S
    double cost_ratio = 0.0;      // C / c_m
};

struct MetricBreakdown {
    BlockchainConfig config;
    double latency_s = 0.0;
    LatencyTerms latency_terms;
    double security = 0.0;
    double cost = 0.0;
    double utility = 0.0;
    NormalizedTerms normalized;
};

/// Caches the latency-ordered verifier list, cumulative verifier costs and
/// the normalization constants for one scenario. Cheap to copy around by
/// const reference; all queries are const and thread-safe.
class UtilityModel {
public:
    explicit UtilityModel(ScenarioParams params);

    const ScenarioParams& params() const noexcept { return params_; }
    const NormalizationConstants& normalization() const noexcept { return norm_; }

    /// All verifiers sorted by ascending verification time K/x, ties by id.
    std::span<const VerifierProfile> ranked_verifiers() const noexcept { return ranked_; }

    std::vector<VerifierProfile> select(int m) const;
    LatencyTerms latency_terms(const BlockchainConfig& config) const;
    double latency(const BlockchainConfig& config) const;
    double security(int m) const;
    double cost(const BlockchainConfig& config) const;

    MetricBreakdown evaluate(const QosWeights& weights, const BlockchainConfig& config) const;
    double utility(const QosWeights& weights, const BlockchainConfig& config) const {
        return evaluate(weights, config).utility;
    }

private:
    void require_feasible(const BlockchainConfig& config) const;
    double unchecked_latency(int m, int theta) const;
    double unchecked_cost(int m, int theta) const;

    ScenarioParams params_;
    std::vector<VerifierProfile> ranked_;
    std::vector<double> cumulative_cost_;  // [k] = sum of rho*x over the first k ranked
    NormalizationConstants norm_;
};

std::vector<VerifierProfile> select_verifiers(const ScenarioParams& params, int m);
double latency(const ScenarioParams& params, const BlockchainConfig& config);
double security(const ScenarioParams& params, int m);
double cost(const ScenarioParams& params, const BlockchainConfig& config);
NormalizationConstants normalization(const ScenarioParams& params);
MetricBreakdown utility(const ScenarioParams& params, const QosWeights& weights,
                        const BlockchainConfig& config);

}  // namespace bcconf
