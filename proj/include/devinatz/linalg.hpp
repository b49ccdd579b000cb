#pragma once

// Dense complex linear algebra shared by the operator-model modules.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace devinatz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Spectral (largest singular value) norm; 0 for empty matrices.
double op_norm(const Matrix& m);

/// Largest entry modulus; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Maps an angle into [-pi, pi).
double wrap_angle(double phi);

/// Distance between two angles on the circle, in [0, pi].
double angular_distance(double a, double b);

/// Orthonormal bases for the column space of a matrix and its orthogonal
/// complement, decided by an absolute singular-value threshold.
struct ColumnSpace {
    Matrix basis;       // ambient x rank
    Matrix complement;  // ambient x (ambient - rank)
    RealVector singular_values;
    int rank = 0;
    // smallest kept over largest dropped singular value (+inf if nothing dropped)
    double gap_ratio = 0.0;
};

ColumnSpace column_space(const Matrix& columns, double threshold);

/// Moore-Penrose pseudoinverse keeping singular values above `threshold`.
Matrix pseudo_inverse(const Matrix& m, double threshold);

/// Unitary factor of the polar decomposition.
Matrix nearest_unitary(const Matrix& m);

/// Orthonormal eigendecomposition of a normal matrix, via the complex Schur
/// form. Eigenpairs are returned sorted by argument in [-pi, pi).
struct NormalEigen {
    Matrix vectors;
    Eigen::VectorXcd values;
    double off_diagonal = 0.0;  // norm of the strictly upper Schur part
};

NormalEigen normal_eigen(const Matrix& m);

/// Groups of indices into a sorted list of angles; adjacent angles closer than
/// `tol` (on the circle) share a group. `min_gap` receives the smallest gap
/// that separates two groups (+inf when there is a single group).
std::vector<std::vector<int>> cluster_angles(const std::vector<double>& angles, double tol,
                                             double* min_gap = nullptr);

/// Deterministic orthonormal basis of the span of `q`'s columns: Gram-Schmidt
/// of the projected standard basis vectors, in coordinate order.
Matrix canonical_basis(const Matrix& q);

/// Haar-distributed n x n unitary drawn from `rng`.
Matrix haar_unitary(int n, std::mt19937_64& rng);

/// Multiplies every column by a unit phase so its largest-modulus entry is
/// real and positive.
void normalize_column_phases(Matrix& m);

}  // namespace devinatz
