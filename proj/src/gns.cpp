#include "devinatz/gns.hpp"

#include <algorithm>
#include <cmath>

#include "devinatz/errors.hpp"

namespace devinatz {

IndexWindow::IndexWindow(int max_power, int max_freq) : max_power_(max_power), max_freq_(max_freq) {
    if (max_power < 0 || max_freq < 0) throw DomainError("index window bounds must be non-negative");
    for (int m = 0; m <= max_power; ++m)
        for (int n = -max_freq; n <= max_freq; ++n) indices_.push_back({m, n});
}

bool IndexWindow::contains(MomentIndex idx) const noexcept {
    return idx.m >= 0 && idx.m <= max_power_ && std::abs(idx.n) <= max_freq_;
}

int IndexWindow::position(MomentIndex idx) const {
    if (!contains(idx))
        throw IndexOutOfWindow("index (" + std::to_string(idx.m) + "," + std::to_string(idx.n) +
                               ") outside the embedding window");
    return idx.m * (2 * max_freq_ + 1) + idx.n + max_freq_;
}

Matrix build_gram(const MomentTable& table) {
    IndexWindow window(table.max_power(), table.max_freq());
    const int size = window.size();
    Matrix g(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) g(i, j) = kernel_value(table, window[i], window[j]);
    Matrix sym = (g + g.adjoint()) * 0.5;
    return sym;
}

double rank_threshold(double tol, double gram_norm) { return tol * std::max(1.0, gram_norm); }

PositivityReport check_positivity(const Matrix& gram, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw ComputationError("Hermitian eigensolver failed on a " + std::to_string(gram.rows()) +
                               "x" + std::to_string(gram.cols()) + " Gram matrix (max entry " +
                               std::to_string(max_abs(gram)) + ")");
    PositivityReport rep;
    rep.eigenvalues = eig.eigenvalues();
    if (rep.eigenvalues.size() == 0) {
        rep.is_psd = true;
        return rep;
    }
    rep.min_eigenvalue = rep.eigenvalues.minCoeff();
    rep.spectral_norm = rep.eigenvalues.cwiseAbs().maxCoeff();
    const double thr = rank_threshold(tol, rep.spectral_norm);
    rep.is_psd = rep.min_eigenvalue >= -thr;
    rep.numeric_rank = static_cast<int>((rep.eigenvalues.array() > thr).count());
    return rep;
}

GnsSpace::GnsSpace(IndexWindow window, Matrix gram, Matrix coords, double tol, double gram_norm)
    : window_(std::move(window)), gram_(std::move(gram)), coords_(std::move(coords)), tol_(tol),
      gram_norm_(gram_norm) {}

Vector GnsSpace::vector(MomentIndex idx) const { return coords_.col(window_.position(idx)); }

Matrix GnsSpace::columns(const std::vector<MomentIndex>& idx) const {
    Matrix out(rank(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vector(idx[k]);
    return out;
}

double GnsSpace::span_threshold() const { return std::sqrt(rank_threshold(tol_, gram_norm_)); }

double GnsSpace::embedding_error() const {
    // <x_t, x_r> = x_r^* x_t, i.e. the Gram of the embedding is X^T conj(X).
    Matrix reproduced = coords_.transpose() * coords_.conjugate();
    return max_abs(reproduced - gram_);
}

GnsSpace factorize(const Matrix& gram, const IndexWindow& window, double tol) {
    if (gram.rows() != window.size() || gram.cols() != window.size())
        throw DomainError("Gram matrix size does not match the index window");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw ComputationError("Hermitian eigensolver failed");
    const RealVector& lambda = eig.eigenvalues();
    const double norm = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
    const double thr = rank_threshold(tol, norm);
    if (lambda.size() && lambda.minCoeff() < -thr)
        throw NotPositive("Gram matrix is not positive semidefinite", lambda.minCoeff());

    // Descending eigenvalue order for the coordinates.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = lambda.size() - 1; i >= 0; --i)
        if (lambda(i) > thr) kept.push_back(i);
    const auto r = static_cast<Eigen::Index>(kept.size());

    Matrix vecs(gram.rows(), r);
    for (Eigen::Index k = 0; k < r; ++k) vecs.col(k) = eig.eigenvectors().col(kept[static_cast<std::size_t>(k)]);
    normalize_column_phases(vecs);

    // x_t(i) = sqrt(lambda_i) U(t, i); then x_r^* x_t = (U Lambda U^*)(t, r).
    Matrix coords(r, gram.rows());
    for (Eigen::Index k = 0; k < r; ++k)
        coords.row(k) = std::sqrt(lambda(kept[static_cast<std::size_t>(k)])) * vecs.col(k).transpose();
    return GnsSpace(window, gram, std::move(coords), tol, norm);
}

GnsSpace factorize(const MomentTable& table, double tol) {
    return factorize(build_gram(table), IndexWindow(table.max_power(), table.max_freq()), tol);
}

}  // namespace devinatz
