#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ruc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Spatial dimension of an analysis. Fixed per cell spec; every tensor,
/// vector and mesh in one analysis shares it.
enum class Dim : int { two = 2, three = 3 };

inline int dim_value(Dim d) { return static_cast<int>(d); }

/// Number of independent symmetric-tensor components (Voigt length).
inline int voigt_size(Dim d) { return d == Dim::two ? 3 : 6; }

/// Default tolerances used across the library. Equality tests on exact
/// signed-permutation data pass at machine precision; these bounds govern
/// the general orthogonal case.
struct Tol {
    static constexpr double orthogonality = 1e-12;
    static constexpr double symmetry = 1e-14;
    static constexpr double admissibility = 1e-12;
    static constexpr double nullspace = 1e-10;   // relative to sigma_max
    static constexpr double consistency = 1e-9;  // relative to bbox diagonal
    static constexpr double pairing = 1e-8;      // relative to bbox diagonal
};

/// Base error for all structured failures. `entity` names the offending
/// object in user terms (relation label, node id, load case).
class Error : public std::runtime_error {
  public:
    Error(std::string code, std::string entity, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), entity_(std::move(entity)) {}

    const std::string& code() const { return code_; }
    const std::string& entity() const { return entity_; }

  private:
    std::string code_;
    std::string entity_;
};

inline bool approx_zero(double v, double tol) { return std::abs(v) <= tol; }

/// Max-norm distance between two matrices (used by most equality tests).
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ruc
