#pragma once

// Domain types for the blockchain configuration problem and the scenario
// document that carries them.
//
// Units are normalized when a scenario is loaded: sizes in bits, rates in
// bits/second, times in seconds, compute in abstract compute-units.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bcconf {

inline constexpr double kAbsTolerance = 1e-9;

struct VerifierProfile {
    std::uint32_t id = 0;
    double compute_capacity = 0.0;  // compute-units per second
    double unit_price = 0.0;        // currency per compute-unit

    bool operator==(const VerifierProfile&) const = default;
};

struct ScenarioParams {
    double transaction_size_bits = 0.0;
    double verification_workload = 0.0;  // compute-units per block
    double feedback_size_bits = 0.0;
    double downlink_rate_bps = 0.0;
    double uplink_rate_bps = 0.0;
    double broadcast_coeff = 0.0;  // seconds per (bit * verifier)
    double security_coeff = 0.0;
    double network_scale_exponent = 2.0;
    int min_verifiers = 1;
    int max_verifiers = 1;
    int min_txn_per_block = 1;
    int max_txn_per_block = 1;
    std::vector<VerifierProfile> verifiers;

    bool operator==(const ScenarioParams&) const = default;
};

struct QosWeights {
    double latency_weight = 1.0 / 3.0;
    double security_weight = 1.0 / 3.0;
    double cost_weight = 1.0 / 3.0;

    bool operator==(const QosWeights&) const = default;
};

struct BlockchainConfig {
    int num_verifiers = 0;
    int txns_per_block = 0;

    bool operator==(const BlockchainConfig&) const = default;
};

/// Inclusive rectangle of admissible (m, theta) values.
struct SearchBox {
    int min_verifiers = 1;
    int max_verifiers = 1;
    int min_txn_per_block = 1;
    int max_txn_per_block = 1;

    bool contains(const BlockchainConfig& c) const noexcept {
        return c.num_verifiers >= min_verifiers && c.num_verifiers <= max_verifiers &&
               c.txns_per_block >= min_txn_per_block && c.txns_per_block <= max_txn_per_block;
    }
    std::int64_t size() const noexcept {
        return std::int64_t(max_verifiers - min_verifiers + 1) *
               std::int64_t(max_txn_per_block - min_txn_per_block + 1);
    }
    bool operator==(const SearchBox&) const = default;
};

struct NormalizationConstants {
    double max_latency = 0.0;
    double max_security = 0.0;
    double max_cost = 0.0;  // zero only when every selected verifier is free
};

struct TraceEntry {
    int iteration = 0;
    BlockchainConfig config;
    double utility = 0.0;
};

struct OptimizationTrace {
    std::vector<TraceEntry> entries;
    BlockchainConfig result;
    int evaluations = 0;
};

enum class Level { high, low };

struct DataClass {
    Level priority = Level::high;
    Level security_need = Level::high;
    std::string label;

    bool operator==(const DataClass&) const = default;
};

enum class Mode { restricted, fully_restricted, balanced, economy };

struct VerifierBounds {
    int min = 0;
    int max = 0;

    bool operator==(const VerifierBounds&) const = default;
};

/// One row of a user-supplied mode table; absent members fall back to defaults.
struct ModeOverride {
    std::optional<QosWeights> weights;
    std::optional<VerifierBounds> verifier_bounds;

    bool operator==(const ModeOverride&) const = default;
};

using ModeTable = std::map<Mode, ModeOverride>;

/// Everything a scenario file may carry: the model constants plus optional
/// QoS configuration.
struct Scenario {
    ScenarioParams params;
    std::optional<QosWeights> weights;
    std::optional<DataClass> qos_class;
    ModeTable mode_table;

    bool operator==(const Scenario&) const = default;
};

std::string_view to_string(Level level);
std::string_view to_string(Mode mode);
Level parse_level(std::string_view text);  // throws ValidationError
Mode parse_mode(std::string_view text);    // throws ValidationError

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioParams& params);
void validate(const QosWeights& weights);

/// True iff `config` lies inside the scenario's box constraints.
bool validate_config(const ScenarioParams& params, const BlockchainConfig& config) noexcept;

SearchBox full_box(const ScenarioParams& params) noexcept;

/// Parses a scenario document (JSON text). Size and rate fields accept
/// either plain numbers or strings with a decimal unit suffix such as
/// "1 kb", "0.5 Mb" or "1.2 Mb/s".
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

/// Convenience wrapper returning only the validated model constants.
ScenarioParams load_scenario(std::string_view text);

/// Writes the document back out with every quantity in base units.
std::string serialize_scenario(const Scenario& scenario);

/// Parses a quantity with an optional unit suffix. `rate` selects the
/// bits/second family of suffixes instead of the bit-size family.
double parse_quantity(std::string_view text, bool rate, const std::string& field);

}  // namespace bcconf
