#pragma once
// Univariate Taylor coefficients c_k = g^(k)(x0)/k! of the elementary functions.
// HyperDual uses the first three, Jet uses as many as its order requires.

#include <vector>

namespace nullcone::numeric {

enum class Fn {
    sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt,
    csc, sec, csch, sech, cot, coth, atan, atanh, recip
};

const char* fn_name(Fn f);

/// Coefficients c_0..c_order of g(x0 + s). Throws DomainError when x0 lies
/// outside the domain of g or any coefficient is not finite.
std::vector<double> taylor(Fn f, double x0, int order);

/// Coefficients of (x0 + s)^p for real p.
std::vector<double> taylor_pow(double x0, double p, int order);

/// Plain double evaluation with the same domain checks.
double apply(Fn f, double x);

}  // namespace nullcone::numeric
