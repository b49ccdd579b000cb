#pragma once

// Commuting unitary extensions of the Cayley transform of A.
//
// H1 = (A - i)D, H3 = (A + i)D carry the isometry V_A: (A - i)f -> (A + i)f.
// H2 and H4 are their orthogonal complements. Every unitary U extending V_A
// and commuting with B is V_A on H1 plus an isometry H2 -> H4 commuting with
// B; starting from U24 = J K, where B|H2 = K L is a product of two
// conjugations, those isometries are exactly U24 U2 with U2 in the commutant
// of B|H2.

#include <cstdint>
#include <string>
#include <vector>

#include "devinatz/errors.hpp"
#include "devinatz/linalg.hpp"
#include "devinatz/operators.hpp"

namespace devinatz {

struct DeficiencyData {
    Matrix h1, h2, h3, h4;  // orthonormal bases (ambient columns)
    Matrix cayley;          // r x r: V_A on H1, zero on H2
    int defect = 0;
    double cayley_isometry_defect = 0.0;

    Matrix projector(int which) const;  // 1..4
};

/// Throws NumericalRankAmbiguity when the spans of (A -+ i)D do not have the
/// rank of D with a clear singular-value gap.
DeficiencyData cayley_decompose(const OperatorSystem& sys);

/// Reduction of H1..H4 by B, B V_A = V_A B on H1, and J H2 = H4.
ResidualRecord verify_reduction(const OperatorSystem& sys, const DeficiencyData& dd, double tol = 1e-9);

/// B restricted to H2 in the coordinates of dd.h2.
Matrix restrict_to_h2(const OperatorSystem& sys, const DeficiencyData& dd);

/// Antilinear pair with B = K L, both conjugations (coordinates of H2).
struct ConjugationPair {
    AntilinearOperator K;
    AntilinearOperator L;
};

/// L conjugates coordinates in an orthonormal eigenbasis of B, K = B L.
ConjugationPair godic_lucenko_factor(const Matrix& b_on_h2);

/// U24 = J K as an r x d matrix from H2 coordinates into the ambient space.
/// Throws ValidationFailed if it fails to land in H4 isometrically or to
/// commute with B.
Matrix build_U24(const OperatorSystem& sys, const AntilinearOperator& K, const DeficiencyData& dd);

/// How the commutant unitary U2 was chosen.
struct ExtensionParameter {
    enum class Kind { Identity, Seed, Explicit };
    Kind kind = Kind::Identity;
    std::uint64_t seed = 0;
    int index = 0;  // position in an enumerated family

    std::string describe() const;
};

struct ExtensionData {
    Matrix U;
    Matrix A_U;
    Matrix U2;
    ExtensionParameter parameter;
    double one_point_distance = 0.0;  // min |eig(U) - 1|
    ResidualRecord diagnostics;
};

inline constexpr double kOnePointTol = 1e-8;

/// U = V_A + (U24 U2) on H2 and A_U = i (U + I)(U - I)^{-1}, Hermitian-symmetrized.
/// Throws CommutationFailed, OnePointSpectrum or ValidationFailed.
ExtensionData assemble_extension(const OperatorSystem& sys, const DeficiencyData& dd, const Matrix& U24,
                                 const Matrix& U2, ExtensionParameter parameter = {});

/// `count` unitaries commuting with b_on_h2; the first is the identity, the
/// rest are block-diagonal Haar draws over eigenvalue clusters of b_on_h2.
std::vector<Matrix> enumerate_commutant_unitaries(const Matrix& b_on_h2, int count, std::uint64_t seed);

}  // namespace devinatz
