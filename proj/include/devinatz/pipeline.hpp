#pragma once

// Moment table -> GNS space -> operator system -> deficiency data -> U24.

#include <cstdint>
#include <string>

#include "devinatz/extension.hpp"
#include "devinatz/gns.hpp"
#include "devinatz/operators.hpp"

namespace devinatz {

struct Model {
    MomentTable table;
    OperatorSystem system;
    DeficiencyData deficiency;
    Matrix b_on_h2;
    ConjugationPair conjugations;
    Matrix U24;
    ResidualRecord reduction;

    const GnsSpace& gns() const noexcept { return system.gns; }
    int defect() const noexcept { return deficiency.defect; }
};

/// Runs every construction step and its validation. The table must already be
/// known to be PSD at `rank_tol`; failures surface as the step's own error type.
Model build_model(const MomentTable& table, double rank_tol = kDefaultRankTol);

/// Parses `identity` | `seed:<u64>`; `file:` parameters are resolved by the
/// caller. A seeded parameter is the first non-identity commutant draw.
Matrix commutant_parameter(const Model& model, const std::string& choice, ExtensionParameter* described = nullptr);

}  // namespace devinatz
