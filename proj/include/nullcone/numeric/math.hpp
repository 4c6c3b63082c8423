#pragma once
// One spelling of every elementary function for double, HyperDual and Jet,
// so generic code can be written once: numeric::sin(x), numeric::sqrt(x), ...

#include <cmath>

#include "nullcone/errors.hpp"
#include "nullcone/numeric/hyperdual.hpp"
#include "nullcone/numeric/jet.hpp"
#include "nullcone/numeric/taylor.hpp"

namespace nullcone::numeric {

#define NULLCONE_UNARY(name)                                                         \
    inline double name(double x) { return apply(Fn::name, x); }                      \
    inline HyperDual name(const HyperDual& x) { return apply(Fn::name, x); }         \
    inline Jet name(const Jet& x) { return apply(Fn::name, x); }

NULLCONE_UNARY(sin)
NULLCONE_UNARY(cos)
NULLCONE_UNARY(tan)
NULLCONE_UNARY(sinh)
NULLCONE_UNARY(cosh)
NULLCONE_UNARY(tanh)
NULLCONE_UNARY(exp)
NULLCONE_UNARY(log)
NULLCONE_UNARY(sqrt)
NULLCONE_UNARY(csc)
NULLCONE_UNARY(sec)
NULLCONE_UNARY(csch)
NULLCONE_UNARY(sech)
NULLCONE_UNARY(cot)
NULLCONE_UNARY(coth)
NULLCONE_UNARY(atan)
NULLCONE_UNARY(atanh)

#undef NULLCONE_UNARY

inline double pow(double x, double p) { return taylor_pow(x, p, 0)[0]; }

inline double atan2(double y, double x) {
    if (x == 0.0 && y == 0.0) throw DomainError("atan2 at the origin");
    return std::atan2(y, x);
}

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.value(); }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace nullcone::numeric
