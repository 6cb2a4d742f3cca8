#include "bcconf/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bcconf/errors.hpp"

namespace bcconf {

using nlohmann::json;

std::string_view to_string(Level level) {
    return level == Level::high ? "high" : "low";
}

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::restricted: return "restricted";
        case Mode::fully_restricted: return "fully_restricted";
        case Mode::balanced: return "balanced";
        case Mode::economy: return "economy";
    }
    return "unknown";
}

Level parse_level(std::string_view text) {
    if (text == "high") return Level::high;
    if (text == "low") return Level::low;
    throw ValidationError("expected 'high' or 'low', got '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
    for (Mode m : {Mode::restricted, Mode::fully_restricted, Mode::balanced, Mode::economy}) {
        if (to_string(m) == text) return m;
    }
    throw ValidationError("unknown mode '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void validate(const ScenarioParams& p) {
    require(positive(p.transaction_size_bits), "transaction_size_bits must be positive");
    require(positive(p.verification_workload), "verification_workload must be positive");
    require(positive(p.feedback_size_bits), "feedback_size_bits must be positive");
    require(positive(p.downlink_rate_bps), "downlink_rate_bps must be positive");
    require(positive(p.uplink_rate_bps), "uplink_rate_bps must be positive");
    require(non_negative(p.broadcast_coeff), "broadcast_coeff must be non-negative");
    require(positive(p.security_coeff), "security_coeff must be positive");
    require(std::isfinite(p.network_scale_exponent) && p.network_scale_exponent >= 2.0,
            "network_scale_exponent must be at least 2");

    require(p.min_verifiers >= 1, "min_verifiers must be at least 1");
    require(p.min_verifiers <= p.max_verifiers, "min_verifiers exceeds max_verifiers");
    require(std::size_t(p.max_verifiers) <= p.verifiers.size(),
            "max_verifiers exceeds the number of verifiers");
    require(p.min_txn_per_block >= 1, "min_txn_per_block must be at least 1");
    require(p.min_txn_per_block <= p.max_txn_per_block,
            "min_txn_per_block exceeds max_txn_per_block");

    std::set<std::uint32_t> ids;
    for (const auto& v : p.verifiers) {
        const auto tag = "verifier " + std::to_string(v.id);
        require(positive(v.compute_capacity), tag + ": compute_capacity must be positive");
        require(non_negative(v.unit_price), tag + ": unit_price must be non-negative");
        require(ids.insert(v.id).second, tag + ": duplicate verifier id");
    }
}

void validate(const QosWeights& w) {
    for (double x : {w.latency_weight, w.security_weight, w.cost_weight}) {
        require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "each weight must lie in [0, 1]");
    }
    const double sum = w.latency_weight + w.security_weight + w.cost_weight;
    require(std::abs(sum - 1.0) <= kAbsTolerance, "weights must sum to 1");
}

bool validate_config(const ScenarioParams& params, const BlockchainConfig& config) noexcept {
    return full_box(params).contains(config);
}

SearchBox full_box(const ScenarioParams& p) noexcept {
    return {p.min_verifiers, p.max_verifiers, p.min_txn_per_block, p.max_txn_per_block};
}

double parse_quantity(std::string_view text, bool rate, const std::string& field) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
        throw ParseError(field, "expected a number with optional unit, got '" + std::string(text) + "'");
    }
    const auto unit = trim(std::string_view(ptr, std::size_t(last - ptr)));
    if (unit.empty()) return value;

    struct Suffix {
        std::string_view name;
        double scale;
    };
    static constexpr Suffix kSizes[] = {
        {"b", 1.0}, {"bit", 1.0}, {"bits", 1.0}, {"kb", 1e3}, {"Mb", 1e6}, {"Gb", 1e9},
    };
    static constexpr Suffix kRates[] = {
        {"b/s", 1.0},  {"bps", 1.0},  {"kb/s", 1e3}, {"kbps", 1e3},
        {"Mb/s", 1e6}, {"Mbps", 1e6}, {"Gb/s", 1e9}, {"Gbps", 1e9},
    };
    const auto check = [&](const auto& table) -> std::optional<double> {
        for (const auto& s : table) {
            if (s.name == unit) return value * s.scale;
        }
        return std::nullopt;
    };
    if (auto v = rate ? check(kRates) : check(kSizes)) return *v;
    throw ParseError(field, std::string("unit '") + std::string(unit) + "' is not a " +
                                (rate ? "rate" : "size") + " unit");
}

namespace {

const json& member(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + key, "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError(field, "expected a number");
    return j.get<double>();
}

double as_quantity(const json& j, bool rate, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_quantity(j.get<std::string>(), rate, field);
    throw ParseError(field, "expected a number or a string with a unit");
}

int as_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ParseError(field, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < 0 || v > 1'000'000'000) throw ParseError(field, "integer out of range");
    return int(v);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ParseError(path + key, "unknown field");
        }
    }
}

QosWeights parse_weights(const json& j, const std::string& field) {
    QosWeights w;
    if (j.is_array()) {
        if (j.size() != 3) throw ParseError(field, "expected three weights");
        w = {as_number(j[0], field + "[0]"), as_number(j[1], field + "[1]"),
             as_number(j[2], field + "[2]")};
    } else if (j.is_object()) {
        reject_unknown(j, {"latency", "security", "cost"}, field + ".");
        w = {as_number(member(j, "latency", field + "."), field + ".latency"),
             as_number(member(j, "security", field + "."), field + ".security"),
             as_number(member(j, "cost", field + "."), field + ".cost")};
    } else {
        throw ParseError(field, "expected an array or an object");
    }
    validate(w);
    return w;
}

json weights_json(const QosWeights& w) {
    return {{"latency", w.latency_weight}, {"security", w.security_weight}, {"cost", w.cost_weight}};
}

Level parse_level_field(const json& j, const std::string& field) {
    if (!j.is_string()) throw ParseError(field, "expected 'high' or 'low'");
    try {
        return parse_level(j.get<std::string>());
    } catch (const ValidationError& e) {
        throw ParseError(field, e.what());
    }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", e.what());
    }
    if (!doc.is_object()) throw ParseError("<document>", "expected an object at top level");

    reject_unknown(doc,
                   {"transaction_size_bits", "verification_workload", "feedback_size_bits",
                    "downlink_rate_bps", "uplink_rate_bps", "broadcast_coeff", "security_coeff",
                    "network_scale_exponent", "min_verifiers", "max_verifiers",
                    "min_txn_per_block", "max_txn_per_block", "verifiers", "weights",
                    "qos_class", "mode_table"},
                   "");

    Scenario out;
    ScenarioParams& p = out.params;
    const auto num = [&](const char* key) { return as_number(member(doc, key, ""), key); };
    const auto size = [&](const char* key) { return as_quantity(member(doc, key, ""), false, key); };
    const auto rate = [&](const char* key) { return as_quantity(member(doc, key, ""), true, key); };
    const auto integer = [&](const char* key) { return as_int(member(doc, key, ""), key); };

    p.transaction_size_bits = size("transaction_size_bits");
    p.verification_workload = num("verification_workload");
    p.feedback_size_bits = size("feedback_size_bits");
    p.downlink_rate_bps = rate("downlink_rate_bps");
    p.uplink_rate_bps = rate("uplink_rate_bps");
    p.broadcast_coeff = num("broadcast_coeff");
    p.security_coeff = num("security_coeff");
    p.network_scale_exponent = num("network_scale_exponent");
    p.min_verifiers = integer("min_verifiers");
    p.max_verifiers = integer("max_verifiers");
    p.min_txn_per_block = integer("min_txn_per_block");
    p.max_txn_per_block = integer("max_txn_per_block");

    const auto& list = member(doc, "verifiers", "");
    if (!list.is_array()) throw ParseError("verifiers", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto path = "verifiers[" + std::to_string(i) + "].";
        const auto& v = list[i];
        if (!v.is_object()) throw ParseError("verifiers[" + std::to_string(i) + "]", "expected an object");
        reject_unknown(v, {"id", "compute_capacity", "unit_price"}, path);
        p.verifiers.push_back({
            std::uint32_t(as_int(member(v, "id", path), path + "id")),
            as_number(member(v, "compute_capacity", path), path + "compute_capacity"),
            as_number(member(v, "unit_price", path), path + "unit_price"),
        });
    }

    if (auto it = doc.find("weights"); it != doc.end()) {
        try {
            out.weights = parse_weights(*it, "weights");
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("weights: ") + e.what());
        }
    }

    if (auto it = doc.find("qos_class"); it != doc.end()) {
        const auto& q = *it;
        if (!q.is_object()) throw ParseError("qos_class", "expected an object");
        reject_unknown(q, {"priority", "security_need", "label"}, "qos_class.");
        DataClass dc;
        dc.priority = parse_level_field(member(q, "priority", "qos_class."), "qos_class.priority");
        dc.security_need =
            parse_level_field(member(q, "security_need", "qos_class."), "qos_class.security_need");
        if (auto l = q.find("label"); l != q.end()) {
            if (!l->is_string()) throw ParseError("qos_class.label", "expected a string");
            dc.label = l->get<std::string>();
        }
        out.qos_class = dc;
    }

    if (auto it = doc.find("mode_table"); it != doc.end()) {
        if (!it->is_object()) throw ParseError("mode_table", "expected an object");
        for (const auto& [name, row] : it->items()) {
            const auto path = "mode_table." + name;
            Mode mode;
            try {
                mode = parse_mode(name);
            } catch (const ValidationError& e) {
                throw ParseError(path, e.what());
            }
            if (!row.is_object()) throw ParseError(path, "expected an object");
            reject_unknown(row, {"weights", "verifier_bounds"}, path + ".");
            ModeOverride mo;
            if (auto w = row.find("weights"); w != row.end()) {
                try {
                    mo.weights = parse_weights(*w, path + ".weights");
                } catch (const ValidationError& e) {
                    throw ValidationError(path + ".weights: " + e.what());
                }
            }
            if (auto b = row.find("verifier_bounds"); b != row.end()) {
                if (!b->is_array() || b->size() != 2) {
                    throw ParseError(path + ".verifier_bounds", "expected [min, max]");
                }
                mo.verifier_bounds = VerifierBounds{as_int((*b)[0], path + ".verifier_bounds[0]"),
                                                    as_int((*b)[1], path + ".verifier_bounds[1]")};
            }
            out.mode_table[mode] = mo;
        }
    }

    validate(p);
    return out;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

ScenarioParams load_scenario(std::string_view text) {
    return parse_scenario(text).params;
}

std::string serialize_scenario(const Scenario& s) {
    const auto& p = s.params;
    json doc = {
        {"transaction_size_bits", p.transaction_size_bits},
        {"verification_workload", p.verification_workload},
        {"feedback_size_bits", p.feedback_size_bits},
        {"downlink_rate_bps", p.downlink_rate_bps},
        {"uplink_rate_bps", p.uplink_rate_bps},
        {"broadcast_coeff", p.broadcast_coeff},
        {"security_coeff", p.security_coeff},
        {"network_scale_exponent", p.network_scale_exponent},
        {"min_verifiers", p.min_verifiers},
        {"max_verifiers", p.max_verifiers},
        {"min_txn_per_block", p.min_txn_per_block},
        {"max_txn_per_block", p.max_txn_per_block},
    };
    json list = json::array();
    for (const auto& v : p.verifiers) {
        list.push_back({{"id", v.id}, {"compute_capacity", v.compute_capacity}, {"unit_price", v.unit_price}});
    }
    doc["verifiers"] = std::move(list);
    if (s.weights) doc["weights"] = weights_json(*s.weights);
    if (s.qos_class) {
        doc["qos_class"] = {{"priority", std::string(to_string(s.qos_class->priority))},
                            {"security_need", std::string(to_string(s.qos_class->security_need))},
                            {"label", s.qos_class->label}};
    }
    if (!s.mode_table.empty()) {
        json table = json::object();
        for (const auto& [mode, row] : s.mode_table) {
            json r = json::object();
            if (row.weights) r["weights"] = weights_json(*row.weights);
            if (row.verifier_bounds) {
                r["verifier_bounds"] = {row.verifier_bounds->min, row.verifier_bounds->max};
            }
            table[std::string(to_string(mode))] = std::move(r);
        }
        doc["mode_table"] = std::move(table);
    }
    return doc.dump(2) + "\n";
}

}  // namespace bcconf
