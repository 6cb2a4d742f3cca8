#include "bcconf/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "bcconf/errors.hpp"

namespace bcconf {

namespace {

std::string describe(const BlockchainConfig& c) {
    return "(m=" + std::to_string(c.num_verifiers) + ", theta=" + std::to_string(c.txns_per_block) + ")";
}

}  // namespace

UtilityModel::UtilityModel(ScenarioParams params) : params_(std::move(params)) {
    validate(params_);

    const double k = params_.verification_workload;
    ranked_ = params_.verifiers;
    std::stable_sort(ranked_.begin(), ranked_.end(), [k](const auto& a, const auto& b) {
        const double ta = k / a.compute_capacity;
        const double tb = k / b.compute_capacity;
        if (ta != tb) return ta < tb;
        return a.id < b.id;
    });

    cumulative_cost_.assign(ranked_.size() + 1, 0.0);
    for (std::size_t i = 0; i < ranked_.size(); ++i) {
        cumulative_cost_[i + 1] = cumulative_cost_[i] + ranked_[i].unit_price * ranked_[i].compute_capacity;
    }

    // Latency and security grow with both coordinates and cost shrinks with
    // theta, so each maximum sits on a corner of the feasible box.
    norm_.max_latency = unchecked_latency(params_.max_verifiers, params_.max_txn_per_block);
    norm_.max_security = security(params_.max_verifiers);
    norm_.max_cost = unchecked_cost(params_.max_verifiers, params_.min_txn_per_block);

#ifndef NDEBUG
    if (full_box(params_).size() <= 10'000) {
        for (int m = params_.min_verifiers; m <= params_.max_verifiers; ++m) {
            for (int theta = params_.min_txn_per_block; theta <= params_.max_txn_per_block; ++theta) {
                assert(unchecked_latency(m, theta) <= norm_.max_latency);
                assert(unchecked_cost(m, theta) <= norm_.max_cost);
            }
        }
    }
#endif
}

void UtilityModel::require_feasible(const BlockchainConfig& config) const {
    if (!validate_config(params_, config)) {
        throw ConstraintError("configuration " + describe(config) + " is outside the feasible box");
    }
}

std::vector<VerifierProfile> UtilityModel::select(int m) const {
    if (m < params_.min_verifiers || m > params_.max_verifiers) {
        throw ConstraintError("cannot select " + std::to_string(m) + " verifiers; allowed range is [" +
                              std::to_string(params_.min_verifiers) + ", " +
                              std::to_string(params_.max_verifiers) + "]");
    }
    return {ranked_.begin(), ranked_.begin() + m};
}

LatencyTerms UtilityModel::latency_terms(const BlockchainConfig& config) const {
    require_feasible(config);
    const int m = config.num_verifiers;
    const double theta = config.txns_per_block;
    const auto& p = params_;

    LatencyTerms t;
    t.downlink_s = theta * p.transaction_size_bits / p.downlink_rate_bps;
    for (int i = 0; i < m; ++i) {
        t.verify_s = std::max(t.verify_s, p.verification_workload / ranked_[std::size_t(i)].compute_capacity);
    }
    t.broadcast_s = p.broadcast_coeff * theta * p.transaction_size_bits * double(m);
    t.feedback_s = p.feedback_size_bits / p.uplink_rate_bps;
    return t;
}

double UtilityModel::unchecked_latency(int m, int theta) const {
    const auto& p = params_;
    const double th = theta;
    return th * p.transaction_size_bits / p.downlink_rate_bps +
           p.verification_workload / ranked_[std::size_t(m - 1)].compute_capacity +
           p.broadcast_coeff * th * p.transaction_size_bits * double(m) +
           p.feedback_size_bits / p.uplink_rate_bps;
}

double UtilityModel::unchecked_cost(int m, int theta) const {
    return cumulative_cost_[std::size_t(m)] / double(theta);
}

double UtilityModel::latency(const BlockchainConfig& config) const {
    return latency_terms(config).total();
}

double UtilityModel::security(int m) const {
    if (m < 1) throw ConstraintError("security requires at least one verifier");
    return params_.security_coeff * std::pow(double(m), params_.network_scale_exponent);
}

double UtilityModel::cost(const BlockchainConfig& config) const {
    require_feasible(config);
    return unchecked_cost(config.num_verifiers, config.txns_per_block);
}

MetricBreakdown UtilityModel::evaluate(const QosWeights& weights, const BlockchainConfig& config) const {
    MetricBreakdown b;
    b.config = config;
    b.latency_terms = latency_terms(config);
    b.latency_s = b.latency_terms.total();
    b.security = security(config.num_verifiers);
    b.cost = cost(config);

    b.normalized.latency_ratio = b.latency_s / norm_.max_latency;
    b.normalized.security_ratio = norm_.max_security / b.security;
    // With every verifier free there is nothing to normalize against.
    b.normalized.cost_ratio = norm_.max_cost > 0.0 ? b.cost / norm_.max_cost : 0.0;

    b.utility = weights.latency_weight * b.normalized.latency_ratio +
                weights.security_weight * b.normalized.security_ratio +
                weights.cost_weight * b.normalized.cost_ratio;
    return b;
}

std::vector<VerifierProfile> select_verifiers(const ScenarioParams& params, int m) {
    return UtilityModel(params).select(m);
}

double latency(const ScenarioParams& params, const BlockchainConfig& config) {
    return UtilityModel(params).latency(config);
}

double security(const ScenarioParams& params, int m) {
    if (m < 1) throw ConstraintError("security requires at least one verifier");
    return params.security_coeff * std::pow(double(m), params.network_scale_exponent);
}

double cost(const ScenarioParams& params, const BlockchainConfig& config) {
    return UtilityModel(params).cost(config);
}

NormalizationConstants normalization(const ScenarioParams& params) {
    return UtilityModel(params).normalization();
}

MetricBreakdown utility(const ScenarioParams& params, const QosWeights& weights,
                        const BlockchainConfig& config) {
    validate(weights);
    return UtilityModel(params).evaluate(weights, config);
}

}  // namespace bcconf
