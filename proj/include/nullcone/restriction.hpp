#pragma once
// Pullback of ambient operators to a section versus intrinsic operators on the
// pulled-back field.  Ambient side: jets.  Intrinsic side: chart finite differences.

#include <span>

#include "nullcone/calculus.hpp"
#include "nullcone/embedding.hpp"
#include "nullcone/intrinsic.hpp"

namespace nullcone::restriction {

using embedding::Section;

enum class Which { star, d, delta, box };

const char* which_name(Which w);
Which parse_which(const std::string& s);

struct Residual {
    double value = 0.0;     // |lhs - rhs|_inf / max(1, |lhs|_inf)
    forms::Form lhs, rhs;
};

struct Orientation {
    double eps;        // sign making *_f 1 = omega_f
    double magnitude;  // |omega_f| coefficient, should equal sqrt|det g|
    double sqrt_det;
};

/// omega_f = m^*(i_{n+1} i_n omega_eta) at chart point x.
Orientation orientation(const Section& s, std::span<const double> x);

/// Metric used on the intrinsic side: the closed form when the section has one.
Eigen::MatrixXd chart_metric(const Section& s, std::span<const double> x);

/// alpha_f as a chart field.
intrinsic::ChartField pulled_back(const Section& s, const forms::FormField& phi);

Residual restriction_residual(Which which, const Section& s, const forms::FormField& phi,
                              std::span<const double> x, const intrinsic::FdOptions& opt = {});

using ScalarField = std::function<numeric::Jet(std::span<const numeric::Jet>)>;

Residual hessian_restriction_residual(const Section& s, const ScalarField& phi,
                                      std::span<const double> x,
                                      const intrinsic::FdOptions& opt = {});

}  // namespace nullcone::restriction
