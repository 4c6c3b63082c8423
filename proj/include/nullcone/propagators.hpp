#pragma once
// Two-point functions on FLRW sections, n = 4.  Points are given in the
// (t, r^1, r^2, r^3) chart: r = sinh chi (k = -1), sin chi (k = +1); for
// k = 0 this is the cartesian xi.  Bitensors are in that chart basis.

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "nullcone/embedding.hpp"
#include "nullcone/errors.hpp"
#include "nullcone/intrinsic.hpp"
#include "nullcone/numeric/math.hpp"
#include "nullcone/scalefactor.hpp"

namespace nullcone::propagators {

using scalefactor::ScaleExpr;

using Point = std::array<double, 4>;
using BiTensor1 = Eigen::Matrix4d;
/// Rows/cols over index pairs (01, 02, 03, 12, 13, 23); entry = F(e_a, e_b; e'_c, e'_d).
using BiTensor2 = Eigen::Matrix<double, 6, 6>;

inline constexpr std::array<std::array<int, 2>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
/// Index of the pair (a, b), a < b.
int pair_index(int a, int b);

/// (t, r-vector) from a (t, chi, angles) chart point.
Point from_chart(int k, const embedding::ChartPoint& p);

template <class T>
std::array<T, 6> embed(int k, const ScaleExpr& a, std::span<const T> x) {
    T r2(0.0);
    for (int i = 1; i < 4; ++i) r2 = r2 + x[i] * x[i];
    const T A = a.positive(x[0]);
    std::array<T, 6> y;
    for (int i = 1; i < 4; ++i) y[i] = A * x[i];
    const T& t = x[0];
    if (k == 0) {
        y[0] = A * t;
        y[4] = T(0.5) * A * (T(1.0) + t * t - r2);
        y[5] = T(0.5) * A * (T(1.0) - t * t + r2);
    } else if (k == -1) {
        y[0] = A * numeric::sqrt(T(1.0) + r2);
        y[4] = A * numeric::cosh(t);
        y[5] = A * numeric::sinh(t);
    } else if (k == 1) {
        if (!(numeric::value_of(r2) < 1.0)) throw DomainError("k = +1 chart needs r^2 < 1");
        y[0] = A * numeric::cos(t);
        y[4] = A * numeric::sqrt(T(1.0) - r2);
        y[5] = A * numeric::sin(t);
    } else {
        throw DomainError("k must be -1, 0 or +1");
    }
    return y;
}

struct PairSeparation {
    double ydot = 0.0;         // eta-dot of embedded points
    double ydot_closed = 0.0;  // printed closed form
    double scale = 1.0;        // a(t) a(t')
    bool singular = false;     // |ydot| < 1e-9 a(t) a(t')
};

PairSeparation ambient_dot(int k, const ScaleExpr& a, const Point& x, const Point& xp);

/// 1 / (8 pi^2 y.y').
double scalar_two_point(int k, const ScaleExpr& a, const Point& x, const Point& xp);

/// -(1/8pi^2) (J^T eta J')_{mu nu'} / y.y'.
BiTensor1 photon_potential_ambient(int k, const ScaleExpr& a, const Point& x, const Point& xp);
/// Closed forms on the Einstein space of type k.
BiTensor1 photon_potential_einstein(int k, const Point& x, const Point& xp);
/// PG_k as printed.
BiTensor1 pure_gauge_term(int k, const ScaleExpr& a, const Point& x, const Point& xp);

/// Closed forms: compact k = 0 expression, component tables for k = +-1.
BiTensor2 field_strength_two_point(int k, const Point& x, const Point& xp);
/// Pullback of the ambient expression (any a).
BiTensor2 field_strength_ambient(int k, const ScaleExpr& a, const Point& x, const Point& xp);

using BiFn = std::function<BiTensor1(const Point&, const Point&)>;

/// d d' of a potential bitensor by mixed finite differences.
BiTensor2 field_strength_via_dd(const BiFn& M, const Point& x, const Point& xp,
                                const intrinsic::FdOptions& opt = {});
BiTensor2 field_strength_via_dd(int k, const ScaleExpr& a, const Point& x, const Point& xp,
                                const intrinsic::FdOptions& opt = {});

}  // namespace nullcone::propagators
