#include "devinatz/pipeline.hpp"

#include <charconv>

namespace devinatz {

Model build_model(const MomentTable& table, double rank_tol) {
    GnsSpace gns = factorize(table, rank_tol);
    OperatorSystem sys = build_operator_system(gns);
    DeficiencyData dd = cayley_decompose(sys);
    ResidualRecord reduction = verify_reduction(sys, dd);
    require_all(reduction, "B does not reduce the deficiency subspaces");
    Matrix b2 = restrict_to_h2(sys, dd);
    ConjugationPair kl = godic_lucenko_factor(b2);
    Matrix u24 = build_U24(sys, kl.K, dd);
    return Model{table, std::move(sys), std::move(dd), std::move(b2), std::move(kl), std::move(u24),
                 std::move(reduction)};
}

Matrix commutant_parameter(const Model& model, const std::string& choice, ExtensionParameter* described) {
    const auto d = model.b_on_h2.rows();
    ExtensionParameter p;
    if (choice == "identity") {
        if (described) *described = p;
        return Matrix::Identity(d, d);
    }
    const std::string prefix = "seed:";
    if (choice.rfind(prefix, 0) == 0) {
        std::uint64_t seed = 0;
        const char* first = choice.data() + prefix.size();
        const char* last = choice.data() + choice.size();
        auto [ptr, ec] = std::from_chars(first, last, seed);
        if (ec != std::errc() || ptr != last || first == last)
            throw DomainError("invalid seed in parameter \"" + choice + "\"");
        p.kind = ExtensionParameter::Kind::Seed;
        p.seed = seed;
        p.index = 1;
        if (described) *described = p;
        if (d == 0) return Matrix(0, 0);
        return enumerate_commutant_unitaries(model.b_on_h2, 2, seed)[1];
    }
    throw DomainError("parameter must be identity, seed:<u64> or file:<path>");
}

}  // namespace devinatz
