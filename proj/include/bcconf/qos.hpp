#pragma once

// Data-class to blockchain-mode mapping.
//
//   priority  security  mode              default weights (L, S, C)  verifier bounds
//   high      low       restricted        (0.6, 0.1, 0.3)            pinned to v
//   low       high      fully_restricted  (0.1, 0.6, 0.3)            pinned to M
//   high      high      balanced          (1/3, 1/3, 1/3)            unchanged
//   low       low       economy           (0.1, 0.2, 0.7)            unchanged
//
// Weights resolve as: scenario-level `weights` > `mode_table` row > table above.

#include <optional>

#include "bcconf/model.hpp"

namespace bcconf {

struct ModeDirective {
    QosWeights weights;
    std::optional<VerifierBounds> verifier_bound_override;
    Mode mode_name = Mode::balanced;
};

Mode mode_for(const DataClass& data_class) noexcept;

/// Default directive for a mode, bound overrides already resolved against `params`.
ModeDirective default_directive(Mode mode, const ScenarioParams& params);

ModeDirective map_class(const DataClass& data_class, const Scenario& scenario);
ModeDirective map_class(const DataClass& data_class, const ScenarioParams& params);

/// The scenario's full box with the directive's verifier bounds applied.
SearchBox directive_box(const ScenarioParams& params, const ModeDirective& directive);

}  // namespace bcconf
