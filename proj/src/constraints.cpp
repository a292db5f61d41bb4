#include "ruc/constraints.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ruc {

namespace {

using nlohmann::json;

int chain_gamma(const NodePair& pair, const std::vector<int>& gammas) {
    int g = 1;
    for (const auto& step : pair.chain) g *= gammas[step.relation];
    return g;
}

ConstraintEquation make_equation(const NodePair& pair, const CellSpec& spec,
                                 const std::vector<int>& gammas, const MacroStrain& eps) {
    ConstraintEquation eq;
    eq.slave = pair.slave;
    eq.master = pair.master;
    const int gamma = chain_gamma(pair, gammas);
    eq.coeff = gamma * pair.map.T.matrix();
    eq.rhs = -(eps.tensor * (pair.map.T.matrix() * pair.map.offset));
    eq.kind = pair.self_pair ? ConstraintEquation::Kind::self
                             : (pair.redundant ? ConstraintEquation::Kind::redundant
                                               : ConstraintEquation::Kind::eliminating);
    eq.chain = pair.chain_labels(spec);
    return eq;
}

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace

std::vector<ConstraintEquation> build_constraints(const ResolvedPairing& pairs,
                                                  const CellSpec& spec, const MacroStrain& eps) {
    const GammaAssignment assignment = check_admissibility(spec, eps);
    if (!assignment.admissible)
        throw Error("MissingGamma", assignment.worst_relation,
                    "load is inadmissible: no load reversal factor satisfies relation " +
                        assignment.worst_relation + " (residual " +
                        std::to_string(assignment.worst_residual) + ")");
    return build_constraints_with_gammas(pairs, spec, assignment.gammas, eps);
}

std::vector<ConstraintEquation> build_constraints_with_gammas(const ResolvedPairing& pairs,
                                                              const CellSpec& spec,
                                                              const std::vector<int>& gammas,
                                                              const MacroStrain& eps) {
    if (static_cast<int>(gammas.size()) != spec.n())
        throw Error("MissingGamma", "gammas", "one load reversal factor per relation required");
    std::vector<ConstraintEquation> out;
    out.reserve(pairs.pairs.size());
    for (const auto& pair : pairs.pairs) out.push_back(make_equation(pair, spec, gammas, eps));
    return out;
}

std::string emit(const std::vector<ConstraintEquation>& equations, Dim dim,
                 ConstraintFormat format) {
    const int d = dim_value(dim);
    if (format == ConstraintFormat::json) {
        json root;
        root["dim"] = d;
        root["equations"] = json::array();
        for (const auto& eq : equations) {
            json j;
            j["slave"] = eq.slave;
            j["master"] = eq.master;
            j["coeff"] = json::array();
            for (int i = 0; i < d; ++i) {
                json row = json::array();
                for (int k = 0; k < d; ++k) row.push_back(eq.coeff(i, k));
                j["coeff"].push_back(row);
            }
            j["rhs"] = std::vector<double>(eq.rhs.data(), eq.rhs.data() + d);
            j["kind"] = eq.kind == ConstraintEquation::Kind::self
                            ? "self"
                            : (eq.kind == ConstraintEquation::Kind::redundant ? "redundant"
                                                                              : "eliminating");
            j["chain"] = eq.chain;
            root["equations"].push_back(std::move(j));
        }
        return root.dump(2) + "\n";
    }

    if (format == ConstraintFormat::csv) {
        // slave_dof, (dof, coefficient)..., rhs -- scalarized per component
        std::ostringstream os;
        os << "slave_dof,terms...,rhs\n";
        for (const auto& eq : equations) {
            for (int i = 0; i < d; ++i) {
                os << eq.slave * d + i;
                for (int k = 0; k < d; ++k) {
                    if (eq.coeff(i, k) == 0.0) continue;
                    os << "," << eq.master * d + k << "," << fmt15(eq.coeff(i, k));
                }
                os << "," << fmt15(eq.rhs[i]) << "\n";
            }
        }
        return os.str();
    }

    // solver deck: one *EQUATION-style card per scalar constraint, terms on
    // the left, inhomogeneity on the header line. DOF numbers are 1-based
    // node id + 1-based direction, the usual FE deck convention.
    std::ostringstream os;
    os << "** linear multipoint constraints: u(slave) - gamma T u(master) = rhs\n";
    for (const auto& eq : equations) {
        for (int i = 0; i < d; ++i) {
            int terms = 1;
            for (int k = 0; k < d; ++k)
                if (eq.coeff(i, k) != 0.0) ++terms;
            os << "*EQUATION, TERMS=" << terms << ", RHS=" << fmt15(eq.rhs[i]) << "\n";
            os << eq.slave + 1 << ", " << i + 1 << ", " << fmt15(1.0) << "\n";
            for (int k = 0; k < d; ++k) {
                if (eq.coeff(i, k) == 0.0) continue;
                os << eq.master + 1 << ", " << k + 1 << ", " << fmt15(-eq.coeff(i, k)) << "\n";
            }
        }
    }
    return os.str();
}

std::vector<ConstraintEquation> parse_constraints_json(const std::string& payload) {
    const json root = json::parse(payload);
    const int d = root.at("dim").get<int>();
    std::vector<ConstraintEquation> out;
    for (const auto& j : root.at("equations")) {
        ConstraintEquation eq;
        eq.slave = j.at("slave").get<int>();
        eq.master = j.at("master").get<int>();
        eq.coeff = Matrix(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) eq.coeff(i, k) = j.at("coeff")[i][k].get<double>();
        eq.rhs = Vector(d);
        for (int i = 0; i < d; ++i) eq.rhs[i] = j.at("rhs")[i].get<double>();
        const std::string kind = j.at("kind").get<std::string>();
        eq.kind = kind == "self" ? ConstraintEquation::Kind::self
                                 : (kind == "redundant" ? ConstraintEquation::Kind::redundant
                                                        : ConstraintEquation::Kind::eliminating);
        for (const auto& c : j.at("chain")) eq.chain.push_back(c.get<std::string>());
        out.push_back(std::move(eq));
    }
    return out;
}

}  // namespace ruc
