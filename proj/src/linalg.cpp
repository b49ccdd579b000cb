#include "devinatz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "devinatz/errors.hpp"

namespace devinatz {

double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double wrap_angle(double phi) {
    constexpr double two_pi = 2.0 * kPi;
    double w = phi - two_pi * std::floor((phi + kPi) / two_pi);
    if (w >= kPi) w -= two_pi;
    if (w < -kPi) w = -kPi;
    return w;
}

double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

ColumnSpace column_space(const Matrix& columns, double threshold) {
    const auto rows = columns.rows();
    ColumnSpace out;
    if (columns.cols() == 0) {
        out.basis = Matrix(rows, 0);
        out.complement = Matrix::Identity(rows, rows);
        out.gap_ratio = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeFullU);
    out.singular_values = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
        if (out.singular_values(i) > threshold) ++rank;
    out.rank = rank;
    out.basis = svd.matrixU().leftCols(rank);
    out.complement = svd.matrixU().rightCols(rows - rank);
    if (rank < out.singular_values.size() && rank > 0) {
        double dropped = out.singular_values(rank);
        out.gap_ratio = dropped > 0.0 ? out.singular_values(rank - 1) / dropped
                                      : std::numeric_limits<double>::infinity();
    } else {
        out.gap_ratio = std::numeric_limits<double>::infinity();
    }
    return out;
}

Matrix pseudo_inverse(const Matrix& m, double threshold) {
    if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    RealVector inv = RealVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix nearest_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

NormalEigen normal_eigen(const Matrix& m) {
    NormalEigen out;
    const auto n = m.rows();
    if (n == 0) {
        out.vectors = Matrix(0, 0);
        out.values = Eigen::VectorXcd(0);
        return out;
    }
    Eigen::ComplexSchur<Matrix> schur(m);
    if (schur.info() != Eigen::Success) throw ComputationError("complex Schur decomposition failed");
    const Matrix& t = schur.matrixT();
    Matrix upper = t.triangularView<Eigen::StrictlyUpper>();
    out.off_diagonal = op_norm(upper);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> angle(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) angle[static_cast<std::size_t>(i)] = wrap_angle(std::arg(t(i, i)));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });

    out.vectors.resize(n, n);
    out.values.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.vectors.col(k) = schur.matrixU().col(order[static_cast<std::size_t>(k)]);
        out.values(k) = t(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    }
    return out;
}

std::vector<std::vector<int>> cluster_angles(const std::vector<double>& angles, double tol,
                                             double* min_gap) {
    std::vector<std::vector<int>> groups;
    const int n = static_cast<int>(angles.size());
    if (min_gap) *min_gap = std::numeric_limits<double>::infinity();
    if (n == 0) return groups;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return angles[a] < angles[b]; });

    // Circular gaps: gap[k] separates order[k] from order[k+1 mod n].
    std::vector<double> gap(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double a = angles[order[k]];
        double b = angles[order[(k + 1) % n]];
        gap[k] = (k + 1 < n) ? b - a : b + 2.0 * kPi - a;
    }
    if (n == 1) gap[0] = std::numeric_limits<double>::infinity();

    // Start the sweep after the widest gap so a cluster straddling -pi/pi stays whole.
    int start = static_cast<int>(std::max_element(gap.begin(), gap.end()) - gap.begin());
    if (gap[start] <= tol) {
        groups.emplace_back(order.begin(), order.end());
        return groups;
    }
    std::vector<int> current;
    for (int step = 1; step <= n; ++step) {
        int k = (start + step) % n;
        current.push_back(order[k]);
        if (gap[k] > tol) {
            if (min_gap) *min_gap = std::min(*min_gap, gap[k]);
            groups.push_back(std::move(current));
            current.clear();
        }
    }
    if (groups.size() == 1 && min_gap) *min_gap = std::numeric_limits<double>::infinity();
    // Deterministic group order: by the first member's angle.
    std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        return wrap_angle(angles[a.front()]) < wrap_angle(angles[b.front()]);
    });
    return groups;
}

Matrix canonical_basis(const Matrix& q) {
    const auto n = q.rows();
    const auto k = q.cols();
    Matrix projector = q * q.adjoint();
    Matrix basis(n, k);
    Eigen::Index found = 0;
    for (Eigen::Index i = 0; i < n && found < k; ++i) {
        Vector v = projector.col(i);
        for (Eigen::Index j = 0; j < found; ++j) v -= basis.col(j) * basis.col(j).dot(v);
        for (Eigen::Index j = 0; j < found; ++j) v -= basis.col(j) * basis.col(j).dot(v);
        double norm = v.norm();
        if (norm > 1e-6) basis.col(found++) = v / norm;
    }
    if (found < k) return q;
    return basis;
}

Matrix haar_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Matrix z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        Complex phase = std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
        q.col(i) *= phase;
    }
    return q;
}

void normalize_column_phases(Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index arg_max = 0;
        m.col(j).cwiseAbs().maxCoeff(&arg_max);
        Complex pivot = m(arg_max, j);
        if (std::abs(pivot) > 0.0) m.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
}

}  // namespace devinatz
