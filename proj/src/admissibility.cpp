#include "ruc/admissibility.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace ruc {

namespace {

// (row, col) tensor indices per Voigt slot.
const std::vector<std::pair<int, int>>& voigt_index(Dim dim) {
    static const std::vector<std::pair<int, int>> two{{0, 0}, {1, 1}, {0, 1}};
    static const std::vector<std::pair<int, int>> three{{0, 0}, {1, 1}, {2, 2},
                                                        {1, 2}, {0, 2}, {0, 1}};
    return dim == Dim::two ? two : three;
}

}  // namespace

std::vector<std::string> voigt_labels(Dim dim) {
    if (dim == Dim::two) return {"11", "22", "12"};
    return {"11", "22", "33", "23", "13", "12"};
}

Vector strain_to_voigt(Dim dim, const Matrix& eps) {
    const auto& idx = voigt_index(dim);
    Vector v(voigt_size(dim));
    for (size_t k = 0; k < idx.size(); ++k) {
        const auto [i, j] = idx[k];
        v[static_cast<int>(k)] = (i == j) ? eps(i, i) : eps(i, j) + eps(j, i);
    }
    return v;
}

Matrix voigt_to_strain(Dim dim, const Vector& v) {
    const auto& idx = voigt_index(dim);
    const int d = dim_value(dim);
    Matrix eps = Matrix::Zero(d, d);
    for (size_t k = 0; k < idx.size(); ++k) {
        const auto [i, j] = idx[k];
        if (i == j) {
            eps(i, i) = v[static_cast<int>(k)];
        } else {
            eps(i, j) = eps(j, i) = 0.5 * v[static_cast<int>(k)];
        }
    }
    return eps;
}

Vector stress_to_voigt(Dim dim, const Matrix& sig) {
    const auto& idx = voigt_index(dim);
    Vector v(voigt_size(dim));
    for (size_t k = 0; k < idx.size(); ++k) {
        const auto [i, j] = idx[k];
        v[static_cast<int>(k)] = 0.5 * (sig(i, j) + sig(j, i));
    }
    return v;
}

Matrix voigt_to_stress(Dim dim, const Vector& v) {
    const auto& idx = voigt_index(dim);
    const int d = dim_value(dim);
    Matrix sig = Matrix::Zero(d, d);
    for (size_t k = 0; k < idx.size(); ++k) {
        const auto [i, j] = idx[k];
        sig(i, j) = sig(j, i) = v[static_cast<int>(k)];
    }
    return sig;
}

Matrix strain_transform_operator(Dim dim, const Transform& T) {
    const int vs = voigt_size(dim);
    Matrix L(vs, vs);
    for (int j = 0; j < vs; ++j) {
        const Matrix eps = voigt_to_strain(dim, Vector::Unit(vs, j));
        L.col(j) = strain_to_voigt(dim, T.matrix() * eps * T.matrix().transpose());
    }
    return L;
}

MacroStrain::MacroStrain(Matrix t) : tensor(std::move(t)) {
    if (tensor.rows() != tensor.cols() || (tensor.rows() != 2 && tensor.rows() != 3))
        throw Error("InvalidStrain", "macro_strain", "strain must be a 2x2 or 3x3 tensor");
    if (max_abs_diff(tensor, tensor.transpose()) > Tol::symmetry)
        throw Error("InvalidStrain", "macro_strain", "strain tensor is not symmetric");
    tensor = 0.5 * (tensor + tensor.transpose());
}

MacroStrain MacroStrain::from_voigt(Dim dim, const Vector& v) {
    if (v.size() != voigt_size(dim))
        throw Error("InvalidStrain", "macro_strain", "wrong Voigt vector length");
    return MacroStrain(voigt_to_strain(dim, v));
}

GammaAssignment check_admissibility(const CellSpec& spec, const MacroStrain& eps, double tol) {
    if (eps.dim() != spec.dim)
        throw Error("InvalidStrain", "macro_strain", "strain dimension does not match the spec");
    GammaAssignment out;
    out.admissible = true;
    for (const auto& rel : spec.relations) {
        const Matrix mapped = transform_strain(rel, 1, eps.tensor);
        const double res_plus = max_abs_diff(eps.tensor, mapped);
        const double res_minus = max_abs_diff(eps.tensor, -mapped);
        const bool ok_plus = res_plus <= tol;
        const bool ok_minus = res_minus <= tol;
        if (ok_plus) {
            out.gammas.push_back(1);  // +1 also wins ties
            out.residuals.push_back(res_plus);
        } else if (ok_minus) {
            out.gammas.push_back(-1);
            out.residuals.push_back(res_minus);
        } else {
            const double best = std::min(res_plus, res_minus);
            out.residuals.push_back(best);
            out.gammas.push_back(0);
            if (!out.admissible) {
                if (best > out.worst_residual) {
                    out.worst_residual = best;
                    out.worst_relation = rel.label;
                }
            } else {
                out.admissible = false;
                out.worst_residual = best;
                out.worst_relation = rel.label;
            }
        }
    }
    if (!out.admissible) out.gammas.clear();
    return out;
}

double LoadCase::distance(const Vector& strain_voigt) const {
    const double norm = strain_voigt.norm();
    if (norm == 0.0) return 0.0;
    const Vector residual = strain_voigt - basis * (basis.transpose() * strain_voigt);
    return residual.norm() / norm;
}

bool LoadCase::contains(const Vector& strain_voigt, double tol) const {
    return distance(strain_voigt) <= tol;
}

namespace {

// Orthonormal basis of the kernel of M restricted to span(Q): columns Q*V
// for the right singular vectors with sigma ~ 0.
Matrix restricted_kernel(const Matrix& M, const Matrix& Q) {
    const Matrix MQ = M * Q;
    Eigen::JacobiSVD<Matrix> svd(MQ, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() == 0 ? 0.0 : Tol::nullspace * sv.maxCoeff();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > std::max(cutoff, 1e-300)) ++rank;
    const int null_dim = static_cast<int>(Q.cols()) - rank;
    if (null_dim <= 0) return Matrix(Q.rows(), 0);
    return Q * svd.matrixV().rightCols(null_dim);
}

// Canonical subspace basis: reduced row echelon form of the span, followed
// by Gram-Schmidt. Gives exact unit vectors for axis-aligned subspaces and a
// deterministic result otherwise.
Matrix canonical_basis(const Matrix& Q) {
    const int vs = static_cast<int>(Q.rows());
    const int r = static_cast<int>(Q.cols());
    if (r == 0) return Q;
    Matrix R = Q.transpose();  // r x vs
    const double tol = 1e-10;
    int lead = 0;
    for (int row = 0; row < r && lead < vs; ++row) {
        int pivot = -1;
        while (lead < vs) {
            pivot = row;
            for (int i = row; i < r; ++i)
                if (std::abs(R(i, lead)) > std::abs(R(pivot, lead))) pivot = i;
            if (std::abs(R(pivot, lead)) > tol) break;
            for (int i = row; i < r; ++i) R(i, lead) = 0.0;
            ++lead;
        }
        if (lead >= vs) break;
        R.row(row).swap(R.row(pivot));
        R.row(row) /= R(row, lead);
        for (int i = 0; i < r; ++i) {
            if (i == row) continue;
            R.row(i) -= R(i, lead) * R.row(row);
        }
        ++lead;
    }
    // Gram-Schmidt on the echelon rows.
    Matrix B(vs, r);
    int count = 0;
    for (int row = 0; row < r; ++row) {
        Vector v = R.row(row).transpose();
        for (int k = 0; k < count; ++k) v -= B.col(k).dot(v) * B.col(k);
        const double n = v.norm();
        if (n <= tol) continue;
        v /= n;
        // sign convention: largest-magnitude entry positive
        int imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0) v = -v;
        B.col(count++) = v;
    }
    return B.leftCols(count);
}

bool subspace_contained(const Matrix& A, const Matrix& B, double tol) {
    if (A.cols() > B.cols()) return false;
    for (int j = 0; j < A.cols(); ++j) {
        const Vector v = A.col(j);
        if ((v - B * (B.transpose() * v)).norm() > tol) return false;
    }
    return true;
}

bool gamma_lexicographic_before(const std::vector<int>& a, const std::vector<int>& b) {
    // +1 sorts before -1
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

}  // namespace

std::vector<LoadCase> enumerate_load_cases(const CellSpec& spec, int max_relations) {
    const int n = spec.n();
    if (n > max_relations)
        throw Error("EnumerationBound", "relations",
                    "relation count exceeds the sign-enumeration bound of " +
                        std::to_string(max_relations));
    const int vs = voigt_size(spec.dim);
    const Matrix I = Matrix::Identity(vs, vs);

    struct Branch {
        std::vector<int> gammas;
        Matrix basis;
    };
    std::vector<Branch> branches{{{}, I}};
    for (const auto& rel : spec.relations) {
        const Matrix L = strain_transform_operator(spec.dim, rel.T);
        std::vector<Branch> next;
        for (const auto& br : branches) {
            for (int gamma : {1, -1}) {
                Matrix kernel = restricted_kernel(I - gamma * L, br.basis);
                if (kernel.cols() == 0) continue;
                Branch nb;
                nb.gammas = br.gammas;
                nb.gammas.push_back(gamma);
                nb.basis = std::move(kernel);
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
        if (branches.empty()) break;
    }

    std::vector<LoadCase> cases;
    for (auto& br : branches) {
        LoadCase lc;
        lc.gammas = std::move(br.gammas);
        lc.basis = canonical_basis(br.basis);
        if (lc.basis.cols() > 0) cases.push_back(std::move(lc));
    }

    // maximal subspaces only
    std::vector<LoadCase> maximal;
    for (size_t i = 0; i < cases.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < cases.size() && !dominated; ++j) {
            if (i == j) continue;
            if (!subspace_contained(cases[i].basis, cases[j].basis, 1e-9)) continue;
            if (cases[j].dimension() > cases[i].dimension()) {
                dominated = true;
            } else if (subspace_contained(cases[j].basis, cases[i].basis, 1e-9)) {
                // identical spans: keep the lexicographically first sign vector
                dominated = gamma_lexicographic_before(cases[j].gammas, cases[i].gammas);
            }
        }
        if (!dominated) maximal.push_back(cases[i]);
    }

    std::sort(maximal.begin(), maximal.end(), [](const LoadCase& a, const LoadCase& b) {
        if (a.dimension() != b.dimension()) return a.dimension() > b.dimension();
        return gamma_lexicographic_before(a.gammas, b.gammas);
    });
    return maximal;
}

}  // namespace ruc
