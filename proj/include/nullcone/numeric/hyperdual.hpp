#pragma once
// Second-order forward AD: value, gradient and Hessian over up to kMaxDirs
// active directions. The direction count is fixed when a variable is seeded;
// constants carry zero derivatives and mix with any direction count.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/numeric/taylor.hpp"

namespace nullcone::numeric {

class HyperDual {
public:
    static constexpr int kMaxDirs = 8;

    HyperDual() = default;
    HyperDual(double v) : v_(v) {}  // NOLINT: implicit promotion of constants

    static HyperDual variable(double v, int index, int dims);

    double value() const { return v_; }
    int dims() const { return n_; }
    double grad(int i) const { return g_[i]; }
    double hess(int i, int j) const { return h_[i * kMaxDirs + j]; }

    Eigen::VectorXd gradient() const;
    Eigen::MatrixXd hessian() const;

    HyperDual& operator+=(const HyperDual& o);
    HyperDual& operator-=(const HyperDual& o);
    HyperDual& operator*=(const HyperDual& o);
    HyperDual& operator/=(const HyperDual& o);

    friend HyperDual operator-(const HyperDual& a);
    friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
    friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
    friend HyperDual operator*(HyperDual a, const HyperDual& b) { return a *= b; }
    friend HyperDual operator/(HyperDual a, const HyperDual& b) { return a /= b; }

    /// g(x) given c0 = g, c1 = g', c2 = g''/2 at x.value().
    HyperDual chain(double c0, double c1, double c2) const;

    /// g(x, y) given the partials of g at (x.value(), y.value()).
    static HyperDual chain2(const HyperDual& x, const HyperDual& y, double g, double gx,
                            double gy, double gxx, double gxy, double gyy);

private:
    double v_ = 0.0;
    int n_ = 0;
    std::array<double, kMaxDirs> g_{};
    std::array<double, kMaxDirs * kMaxDirs> h_{};
};

HyperDual apply(Fn f, const HyperDual& x);
HyperDual pow(const HyperDual& x, double p);
HyperDual atan2(const HyperDual& y, const HyperDual& x);

struct HyperDualResult {
    double value;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

/// Seeds one direction per coordinate of point and evaluates fn.
HyperDualResult hyperdual_eval(const std::function<HyperDual(std::span<const HyperDual>)>& fn,
                               std::span<const double> point);

/// Seeded variables x_i = point_i + e_i.
std::vector<HyperDual> seed(std::span<const double> point);

}  // namespace nullcone::numeric
