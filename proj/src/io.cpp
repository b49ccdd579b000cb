#include "devinatz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "devinatz/errors.hpp"

namespace devinatz::io {

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

int int_field(const json& j, const char* name) {
    const json& f = field(j, name);
    if (!f.is_number_integer()) throw DomainError(std::string("field \"") + name + "\" must be an integer");
    return f.get<int>();
}

double number_field(const json& j, const char* name) {
    const json& f = field(j, name);
    if (!f.is_number()) throw DomainError(std::string("field \"") + name + "\" must be a number");
    return f.get<double>();
}

void emit(std::ostringstream& out, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted keys
                if (!first) out << ",\n";
                first = false;
                out << pad << json(it.key()).dump() << ": ";
                emit(out, it.value(), indent + 2);
            }
            out << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (scalars) {
                out << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out << ", ";
                    emit(out, j[i], indent);
                }
                out << "]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ",\n";
                out << pad;
                emit(out, j[i], indent + 2);
            }
            out << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out << "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::string s(buf);
            if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
            out << s;
            return;
        }
        default: out << j.dump();
    }
}

}  // namespace

json to_json(const MomentTable& table) {
    json moments = json::array();
    for (const auto& idx : table.indices()) {
        auto v = table.at(idx);
        moments.push_back({{"m", idx.m}, {"n", idx.n}, {"re", v.real()}, {"im", v.imag()}});
    }
    return {{"max_power", table.max_power()}, {"max_freq", table.max_freq()}, {"moments", moments}};
}

MomentTable moment_table_from_json(const json& j) {
    MomentTable table(int_field(j, "max_power"), int_field(j, "max_freq"));
    const json& entries = field(j, "moments");
    if (!entries.is_array()) throw DomainError("field \"moments\" must be an array");
    std::set<MomentIndex> seen;
    for (const auto& e : entries) {
        MomentIndex idx{int_field(e, "m"), int_field(e, "n")};
        if (!table.contains(idx))
            throw DomainError("moment (" + std::to_string(idx.m) + "," + std::to_string(idx.n) +
                              ") lies outside the declared rectangle");
        if (!seen.insert(idx).second)
            throw DomainError("duplicate moment (" + std::to_string(idx.m) + "," + std::to_string(idx.n) + ")");
        table.set(idx, {number_field(e, "re"), number_field(e, "im")});
    }
    for (const auto& idx : table.indices())
        if (!seen.count(idx))
            throw DomainError("missing moment (" + std::to_string(idx.m) + "," + std::to_string(idx.n) + ")");
    return table;
}

json to_json(const AtomicMeasure& measure) {
    json atoms = json::array();
    for (const auto& a : measure.atoms()) atoms.push_back({{"x", a.x}, {"phi", a.phi}, {"weight", a.weight}});
    return {{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const json& j) {
    const json& atoms = field(j, "atoms");
    if (!atoms.is_array()) throw DomainError("field \"atoms\" must be an array");
    std::vector<Atom> raw;
    for (const auto& a : atoms) raw.push_back({number_field(a, "x"), number_field(a, "phi"), number_field(a, "weight")});
    return AtomicMeasure::ingest(std::move(raw));
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw DomainError("matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw DomainError("matrix rows must have equal length");
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& e = row[static_cast<std::size_t>(k)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw DomainError("matrix entries must be [re, im] pairs");
            m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

std::string dump(const json& j) {
    std::ostringstream out;
    emit(out, j, 0);
    out << "\n";
    return out.str();
}

json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DomainError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace devinatz::io
