#pragma once

// Gram matrix of the moment kernel over a finite index window, the positivity
// test, and a finite-rank Hilbert-space embedding of the window indices.

#include <vector>

#include "devinatz/linalg.hpp"
#include "devinatz/moments.hpp"

namespace devinatz {

inline constexpr double kDefaultRankTol = 1e-10;

/// {(m,n): 0 <= m <= M, |n| <= N}, ordered by m then n.
class IndexWindow {
public:
    IndexWindow(int max_power, int max_freq);

    int max_power() const noexcept { return max_power_; }
    int max_freq() const noexcept { return max_freq_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    const std::vector<MomentIndex>& indices() const noexcept { return indices_; }
    const MomentIndex& operator[](int position) const { return indices_.at(static_cast<std::size_t>(position)); }

    bool contains(MomentIndex idx) const noexcept;
    /// Throws IndexOutOfWindow.
    int position(MomentIndex idx) const;

private:
    int max_power_;
    int max_freq_;
    std::vector<MomentIndex> indices_;
};

/// G(pos(t), pos(r)) = K(t, r), symmetrized to be exactly Hermitian.
Matrix build_gram(const MomentTable& table);

struct PositivityReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    int numeric_rank = 0;
    double spectral_norm = 0.0;
    RealVector eigenvalues;  // ascending
};

/// Eigenvalue threshold tol * max(1, ||G||) shared by every rank decision.
double rank_threshold(double tol, double gram_norm);

PositivityReport check_positivity(const Matrix& gram, double tol = kDefaultRankTol);

/// Finite-rank realization: coordinates x_t in C^r with <x_t, x_r> = G(t, r),
/// where <u, v> = v^* u.
class GnsSpace {
public:
    GnsSpace(IndexWindow window, Matrix gram, Matrix coords, double tol, double gram_norm);

    const IndexWindow& window() const noexcept { return window_; }
    const Matrix& gram() const noexcept { return gram_; }
    int rank() const noexcept { return static_cast<int>(coords_.rows()); }
    double factorization_tol() const noexcept { return tol_; }
    double gram_norm() const noexcept { return gram_norm_; }

    /// r x |window| matrix whose columns are the embedding vectors.
    const Matrix& coords() const noexcept { return coords_; }
    Vector vector(MomentIndex idx) const;

    /// Embedding vectors of the listed indices, as columns.
    Matrix columns(const std::vector<MomentIndex>& idx) const;

    /// Singular-value threshold for spans of embedding vectors; consistent
    /// with the Gram eigenvalue threshold.
    double span_threshold() const;

    /// max |<x_t, x_r> - G(t, r)|.
    double embedding_error() const;

private:
    IndexWindow window_;
    Matrix gram_;
    Matrix coords_;
    double tol_;
    double gram_norm_;
};

/// Throws NotPositive when the Gram matrix fails the PSD test at `tol`.
GnsSpace factorize(const Matrix& gram, const IndexWindow& window, double tol = kDefaultRankTol);

/// Convenience: build_gram + factorize over the table's own window.
GnsSpace factorize(const MomentTable& table, double tol = kDefaultRankTol);

}  // namespace devinatz
