#include "bcconf/qos.hpp"

#include <string>

#include "bcconf/errors.hpp"

namespace bcconf {

Mode mode_for(const DataClass& c) noexcept {
    if (c.priority == Level::high) {
        return c.security_need == Level::low ? Mode::restricted : Mode::balanced;
    }
    return c.security_need == Level::high ? Mode::fully_restricted : Mode::economy;
}

ModeDirective default_directive(Mode mode, const ScenarioParams& p) {
    ModeDirective d;
    d.mode_name = mode;
    switch (mode) {
        case Mode::restricted:
            d.weights = {0.6, 0.1, 0.3};
            d.verifier_bound_override = VerifierBounds{p.min_verifiers, p.min_verifiers};
            break;
        case Mode::fully_restricted:
            d.weights = {0.1, 0.6, 0.3};
            d.verifier_bound_override = VerifierBounds{p.max_verifiers, p.max_verifiers};
            break;
        case Mode::balanced:
            d.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
            break;
        case Mode::economy:
            d.weights = {0.1, 0.2, 0.7};
            break;
    }
    return d;
}

ModeDirective map_class(const DataClass& data_class, const Scenario& scenario) {
    const auto& p = scenario.params;
    ModeDirective d = default_directive(mode_for(data_class), p);

    if (auto it = scenario.mode_table.find(d.mode_name); it != scenario.mode_table.end()) {
        if (it->second.weights) d.weights = *it->second.weights;
        if (it->second.verifier_bounds) d.verifier_bound_override = it->second.verifier_bounds;
    }
    if (scenario.weights) d.weights = *scenario.weights;

    if (const auto& b = d.verifier_bound_override) {
        if (b->min < p.min_verifiers || b->max > p.max_verifiers || b->min > b->max) {
            throw ValidationError("verifier bound override [" + std::to_string(b->min) + ", " +
                                  std::to_string(b->max) + "] for mode " + std::string(to_string(d.mode_name)) +
                                  " lies outside [" + std::to_string(p.min_verifiers) + ", " +
                                  std::to_string(p.max_verifiers) + "]");
        }
    }
    validate(d.weights);
    return d;
}

ModeDirective map_class(const DataClass& data_class, const ScenarioParams& params) {
    Scenario s;
    s.params = params;
    return map_class(data_class, s);
}

SearchBox directive_box(const ScenarioParams& params, const ModeDirective& directive) {
    SearchBox box = full_box(params);
    if (const auto& b = directive.verifier_bound_override) {
        box.min_verifiers = b->min;
        box.max_verifiers = b->max;
    }
    return box;
}

}  // namespace bcconf
