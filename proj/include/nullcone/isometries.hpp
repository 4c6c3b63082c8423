#pragma once
// Isometries of a section X_f as the null space of J -> J(f) over o(2, n).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/embedding.hpp"
#include "nullcone/scalefactor.hpp"

namespace nullcone::isometries {

using embedding::DefiningFunction;
using scalefactor::ScaleExpr;

/// J = J^{ab} y_a d_b with J^{ab} = -J^{ba}; parameters are the entries a < b, row-major.
class ConformalGenerator {
public:
    explicit ConformalGenerator(int n);
    ConformalGenerator(int n, Eigen::VectorXd params);
    static ConformalGenerator plane(int n, int alpha, int beta);
    static ConformalGenerator from_matrix(const Eigen::MatrixXd& J);

    int n() const { return n_; }
    static int parameter_count(int n) { return (n + 2) * (n + 1) / 2; }
    const Eigen::VectorXd& params() const { return p_; }
    Eigen::MatrixXd matrix() const;
    /// A with (J y)^b = A^b_c y^c, i.e. A = J^T eta.
    Eigen::MatrixXd linear_action() const;
    /// exp(s A); preserves eta.
    Eigen::MatrixXd flow(double s) const;

private:
    int n_;
    Eigen::VectorXd p_;
};

/// J(f)(y) = J^{ab} y_a (d_b f)(y).
double generator_action(const ConformalGenerator& J, const DefiningFunction& f, const Eigen::VectorXd& y);

struct SampleDomain {
    double t_min = 0.2, t_max = 2.5;
    double chi_min = 0.1, chi_max = 1.5;
};

/// Chart points of the (k, a) FLRW section embedded in R^{n+2}; |t| < 0.1 is skipped.
std::vector<Eigen::VectorXd> sample_section(int k, const ScaleExpr& a, int n, int count,
                                            const SampleDomain& dom, unsigned seed);

struct IsometryAlgebra {
    int dimension = 0;
    std::vector<ConformalGenerator> basis;
    Eigen::VectorXd sigma;       // relative singular values, descending
    bool ill_conditioned = false;  // singular-value gap within 10x of the tolerance
};

/// Nullity of R[s, (ab)] = y_a d_b f - y_b d_a f over the given samples.
IsometryAlgebra isometry_algebra(const DefiningFunction& f, const std::vector<Eigen::VectorXd>& samples,
                                 double tol = 1e-8);
IsometryAlgebra isometry_algebra_dimension(int k, const ScaleExpr& a, int n = 4, int sample_count = 40,
                                           double tol = 1e-8, unsigned seed = 42,
                                           std::optional<SampleDomain> dom = {});

enum class Special { generic, einstein, de_sitter, anti_de_sitter, minkowski, inconclusive };
std::string special_name(Special s);

struct Classification {
    Special kind = Special::inconclusive;
    int dimension = 0;
    std::string ode;                // matched defining equation
    std::optional<double> offset;   // t0 when the ODE carries one
    double ode_residual = 0.0;      // spread of the fitted constants
    std::string note;
};

/// Dimension over several draws plus an ODE fit on psi' = a'/a.
Classification classify_special(int k, const ScaleExpr& a, std::optional<SampleDomain> dom = {}, int n = 4);

/// Sample domain of a preset if `a` is one, else the default.
SampleDomain default_domain(const ScaleExpr& a);

}  // namespace nullcone::isometries
