#include "nullcone/intrinsic.hpp"

#include <cmath>

#include "nullcone/errors.hpp"

namespace nullcone::intrinsic {

using forms::Form;
using forms::Mask;

namespace {

Eigen::VectorXd five_point(const VecFn& fn, std::vector<double> x, int dir, double h) {
    const double x0 = x[dir];
    auto at = [&](double s) {
        x[dir] = x0 + s * h;
        return fn(x);
    };
    const Eigen::VectorXd p1 = at(1), m1 = at(-1), p2 = at(2), m2 = at(-2);
    return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
}

Eigen::VectorXd to_vec(const Form& f) { return Eigen::Map<const Eigen::VectorXd>(f.c.data(), f.c.size()); }

Form from_vec(int m, const Eigen::VectorXd& v) {
    Form f(m);
    for (Mask A = 0; A < f.size(); ++A) f[A] = v[A];
    return f;
}

Form derivative_sum(const ChartField& b, std::span<const double> x, const FdOptions& opt) {
    const int m = static_cast<int>(x.size());
    VecFn fn = [&](std::span<const double> p) { return to_vec(b(p)); };
    Form r(m);
    for (int mu = 0; mu < m; ++mu) {
        const Form dmu = from_vec(m, partial(fn, x, mu, opt));
        for (Mask A = 0; A < dmu.size(); ++A) {
            if (dmu[A] == 0.0 || ((A >> mu) & 1U)) continue;
            r[A | (Mask(1) << mu)] += forms::front_sign(A, mu) * dmu[A];
        }
    }
    return r;
}

}  // namespace

Eigen::VectorXd partial(const VecFn& fn, std::span<const double> x, int dir, const FdOptions& opt) {
    const double h = opt.step * std::max(1.0, std::abs(x[dir]));
    std::vector<double> xv(x.begin(), x.end());
    const Eigen::VectorXd coarse = five_point(fn, xv, dir, h);
    const Eigen::VectorXd fine = five_point(fn, xv, dir, 0.5 * h);
    const Eigen::VectorXd rich = (16.0 * fine - coarse) / 15.0;
    const double scale = std::max(1.0, rich.cwiseAbs().maxCoeff());
    const double gap = (rich - fine).cwiseAbs().maxCoeff();
    if (!(gap <= opt.tolerance * scale))
        throw StepFailure("finite-difference levels disagree by " + std::to_string(gap) +
                          " in direction " + std::to_string(dir));
    return rich;
}

Form d(const ChartField& b, std::span<const double> x, const FdOptions& opt) {
    return derivative_sum(b, x, opt);
}

Form delta(const ChartField& b, const MetricFn& g, double eps, std::span<const double> x,
           const FdOptions& opt) {
    const int m = static_cast<int>(x.size());
    ChartField starred = [&](std::span<const double> p) { return forms::star_metric(g(p), eps, b(p)); };
    const Form dstar = derivative_sum(starred, x, opt);
    const Form back = forms::star_metric_inv(g(x), eps, dstar);
    // back has degree a-1 where a is the degree of the source part
    Form r(m);
    for (Mask A = 0; A < back.size(); ++A) {
        const int a = forms::degree(A) + 1;
        r[A] = (a & 1) ? -back[A] : back[A];
    }
    return r;
}

Form box(const ChartField& b, const MetricFn& g, double eps, std::span<const double> x,
         const FdOptions& opt) {
    ChartField db = [&](std::span<const double> p) { return d(b, p, opt); };
    ChartField deltab = [&](std::span<const double> p) { return delta(b, g, eps, p, opt); };
    Form r = d(deltab, x, opt) + delta(db, g, eps, x, opt);
    return -1.0 * r;
}

std::vector<Eigen::MatrixXd> christoffel(const MetricFn& g, std::span<const double> x,
                                         const FdOptions& opt) {
    const int n = static_cast<int>(x.size());
    VecFn flat = [&](std::span<const double> p) {
        const Eigen::MatrixXd m = g(p);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
    };
    std::vector<Eigen::MatrixXd> dg(n);
    for (int mu = 0; mu < n; ++mu) dg[mu] = Eigen::Map<const Eigen::MatrixXd>(partial(flat, x, mu, opt).data(), n, n);
    const Eigen::MatrixXd gi = g(x).inverse();
    std::vector<Eigen::MatrixXd> G(n, Eigen::MatrixXd::Zero(n, n));
    for (int l = 0; l < n; ++l)
        for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu) {
                double s = 0.0;
                for (int r = 0; r < n; ++r)
                    s += gi(l, r) * (dg[mu](r, nu) + dg[nu](r, mu) - dg[r](mu, nu));
                G[l](mu, nu) = 0.5 * s;
            }
    return G;
}

Eigen::MatrixXd hessian(const std::function<double(std::span<const double>)>& phi, const MetricFn& g,
                        std::span<const double> x, const FdOptions& opt) {
    const int n = static_cast<int>(x.size());
    VecFn grad = [&](std::span<const double> p) {
        VecFn s = [&](std::span<const double> q) { return Eigen::VectorXd::Constant(1, phi(q)); };
        Eigen::VectorXd r(n);
        for (int mu = 0; mu < n; ++mu) r[mu] = partial(s, p, mu, opt)[0];
        return r;
    };
    const Eigen::VectorXd g0 = grad(x);
    Eigen::MatrixXd H(n, n);
    for (int mu = 0; mu < n; ++mu) H.col(mu) = partial(grad, x, mu, opt);
    H = 0.5 * (H + H.transpose()).eval();
    const auto G = christoffel(g, x, opt);
    for (int l = 0; l < n; ++l) H -= G[l] * g0[l];
    return H;
}

}  // namespace nullcone::intrinsic
