#include "nullcone/numeric/hyperdual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nullcone/errors.hpp"

namespace nullcone::numeric {

namespace {
constexpr int M = HyperDual::kMaxDirs;
}

HyperDual HyperDual::variable(double v, int index, int dims) {
    if (dims < 1 || dims > kMaxDirs || index < 0 || index >= dims)
        throw std::invalid_argument("HyperDual::variable: bad direction");
    HyperDual r(v);
    r.n_ = dims;
    r.g_[index] = 1.0;
    return r;
}

Eigen::VectorXd HyperDual::gradient() const {
    Eigen::VectorXd g(n_);
    for (int i = 0; i < n_; ++i) g(i) = g_[i];
    return g;
}

Eigen::MatrixXd HyperDual::hessian() const {
    Eigen::MatrixXd h(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) h(i, j) = h_[i * M + j];
    return h;
}

HyperDual& HyperDual::operator+=(const HyperDual& o) {
    const int n = std::max(n_, o.n_);
    v_ += o.v_;
    for (int i = 0; i < n; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h_[i * M + j] += o.h_[i * M + j];
    n_ = n;
    return *this;
}

HyperDual& HyperDual::operator-=(const HyperDual& o) {
    const int n = std::max(n_, o.n_);
    v_ -= o.v_;
    for (int i = 0; i < n; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h_[i * M + j] -= o.h_[i * M + j];
    n_ = n;
    return *this;
}

HyperDual operator-(const HyperDual& a) {
    HyperDual r;
    return r -= a;
}

HyperDual& HyperDual::operator*=(const HyperDual& o) {
    const int n = std::max(n_, o.n_);
    const double a = v_, b = o.v_;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h_[i * M + j] = h_[i * M + j] * b + a * o.h_[i * M + j] + g_[i] * o.g_[j] +
                            o.g_[i] * g_[j];
    for (int i = 0; i < n; ++i) g_[i] = g_[i] * b + a * o.g_[i];
    v_ = a * b;
    n_ = n;
    return *this;
}

HyperDual& HyperDual::operator/=(const HyperDual& o) {
    if (o.v_ == 0.0) throw DomainError("division by zero");
    if (o.n_ == 0) {
        const double inv = 1.0 / o.v_;
        v_ *= inv;
        for (int i = 0; i < n_; ++i) g_[i] *= inv;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) h_[i * M + j] *= inv;
        return *this;
    }
    return *this *= apply(Fn::recip, o);
}

HyperDual HyperDual::chain(double c0, double c1, double c2) const {
    HyperDual r(c0);
    r.n_ = n_;
    const double g2 = 2.0 * c2;
    for (int i = 0; i < n_; ++i) r.g_[i] = c1 * g_[i];
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.h_[i * M + j] = c1 * h_[i * M + j] + g2 * g_[i] * g_[j];
    return r;
}

HyperDual HyperDual::chain2(const HyperDual& x, const HyperDual& y, double g, double gx,
                            double gy, double gxx, double gxy, double gyy) {
    HyperDual r(g);
    const int n = std::max(x.n_, y.n_);
    r.n_ = n;
    for (int i = 0; i < n; ++i) r.g_[i] = gx * x.g_[i] + gy * y.g_[i];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r.h_[i * M + j] = gx * x.h_[i * M + j] + gy * y.h_[i * M + j] +
                              gxx * x.g_[i] * x.g_[j] + gyy * y.g_[i] * y.g_[j] +
                              gxy * (x.g_[i] * y.g_[j] + y.g_[i] * x.g_[j]);
    return r;
}

HyperDual apply(Fn f, const HyperDual& x) {
    const auto c = taylor(f, x.value(), 2);
    return x.chain(c[0], c[1], c[2]);
}

HyperDual pow(const HyperDual& x, double p) {
    const auto c = taylor_pow(x.value(), p, 2);
    return x.chain(c[0], c[1], c[2]);
}

HyperDual atan2(const HyperDual& y, const HyperDual& x) {
    const double xv = x.value(), yv = y.value();
    const double r2 = xv * xv + yv * yv;
    if (r2 == 0.0) throw DomainError("atan2 at the origin");
    const double r4 = r2 * r2;
    return HyperDual::chain2(x, y, std::atan2(yv, xv), -yv / r2, xv / r2, 2 * xv * yv / r4,
                             (yv * yv - xv * xv) / r4, -2 * xv * yv / r4);
}

std::vector<HyperDual> seed(std::span<const double> point) {
    const int m = static_cast<int>(point.size());
    std::vector<HyperDual> x;
    x.reserve(m);
    for (int i = 0; i < m; ++i) x.push_back(HyperDual::variable(point[i], i, m));
    return x;
}

HyperDualResult hyperdual_eval(const std::function<HyperDual(std::span<const HyperDual>)>& fn,
                               std::span<const double> point) {
    auto x = seed(point);
    HyperDual r = fn(x);
    const int m = static_cast<int>(point.size());
    HyperDualResult out{r.value(), Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m)};
    if (r.dims() > 0) {
        out.gradient = r.gradient();
        out.hessian = r.hessian();
    }
    return out;
}

}  // namespace nullcone::numeric
