#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace devinatz {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input data (bad atom, malformed table, out-of-range argument).
class DomainError : public Error {
public:
    using Error::Error;
};

class IndexOutOfWindow : public Error {
public:
    using Error::Error;
};

/// A numerical routine (eigensolver, SVD) did not converge.
class ComputationError : public Error {
public:
    using Error::Error;
};

class NotPositive : public Error {
public:
    NotPositive(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// A least-squares operator construction left a residual above its bound.
class IllDefined : public Error {
public:
    IllDefined(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The |n| <= N-1 sub-window does not span the GNS space, so B is undetermined.
class NotSaturated : public Error {
public:
    NotSaturated(const std::string& what, int sub_rank, int rank)
        : Error(what), sub_rank_(sub_rank), rank_(rank) {}
    int sub_rank() const noexcept { return sub_rank_; }
    int rank() const noexcept { return rank_; }

private:
    int sub_rank_;
    int rank_;
};

class IsometryViolation : public Error {
public:
    IsometryViolation(const std::string& what, double defect)
        : Error(what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// One named residual with the bound it is checked against.
struct Residual {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;

    bool ok() const noexcept { return value <= threshold; }
};

using ResidualRecord = std::vector<Residual>;

class ValidationFailed : public Error {
public:
    ValidationFailed(const std::string& what, ResidualRecord failing)
        : Error(what), failing_(std::move(failing)) {}
    const ResidualRecord& failing() const noexcept { return failing_; }

private:
    ResidualRecord failing_;
};

class NumericalRankAmbiguity : public Error {
public:
    using Error::Error;
};

/// 1 is (numerically) an eigenvalue of the assembled unitary U.
class OnePointSpectrum : public Error {
public:
    OnePointSpectrum(const std::string& what, double distance)
        : Error(what), distance_(distance) {}
    double distance() const noexcept { return distance_; }

private:
    double distance_;
};

class CommutationFailed : public Error {
public:
    CommutationFailed(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class CommutationTooLarge : public CommutationFailed {
public:
    using CommutationFailed::CommutationFailed;
};

class ClusterAmbiguity : public Error {
public:
    ClusterAmbiguity(const std::string& what, double gap)
        : Error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class DeficientDomain : public Error {
public:
    DeficientDomain(const std::string& what, int domain_rank, int ambient_dim)
        : Error(what), domain_rank_(domain_rank), ambient_dim_(ambient_dim) {}
    int domain_rank() const noexcept { return domain_rank_; }
    int ambient_dim() const noexcept { return ambient_dim_; }

private:
    int domain_rank_;
    int ambient_dim_;
};

class SingularPencil : public Error {
public:
    SingularPencil(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Throws ValidationFailed listing every entry of `record` above its threshold.
void require_all(const ResidualRecord& record, const std::string& context);

}  // namespace devinatz
