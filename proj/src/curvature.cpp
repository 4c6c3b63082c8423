#include "nullcone/curvature.hpp"

#include <cmath>

#include "nullcone/errors.hpp"

namespace nullcone::curvature {

using embedding::ChartJet;
using forms::Form;
using numeric::Symmetry;

Tensor4 kulkarni_nomizu(const Eigen::MatrixXd& h, const Eigen::MatrixXd& k) {
    const int n = static_cast<int>(h.rows());
    Tensor4 t(n, Symmetry::kulkarni_nomizu);
    for (int x = 0; x < n; ++x)
        for (int w = 0; w < n; ++w)
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    t(x, w, u, v) = h(x, u) * k(w, v) + h(w, v) * k(x, u) - h(w, u) * k(x, v) -
                                    h(x, v) * k(w, u);
    return t;
}

Eigen::MatrixXd contract13(const Tensor4& t, const Eigen::MatrixXd& gi) {
    const int n = t.dim();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            for (int x = 0; x < n; ++x)
                for (int u = 0; u < n; ++u) r(w, v) += gi(x, u) * t(x, w, u, v);
    return r;
}

namespace {

Eigen::MatrixXd section_metric(const Section& s, std::span<const double> x) {
    return s.has_closed_form() ? s.closed_form_metric(x) : s.metric(x);
}

CurvatureSet finish(std::vector<double> x, Eigen::MatrixXd g, Tensor4 rm) {
    CurvatureSet c;
    c.x = std::move(x);
    c.metric = std::move(g);
    c.riemann = std::move(rm);
    c.riemann.set_tag(Symmetry::riemann);
    c.ricci = contract13(c.riemann, c.metric.inverse());
    c.scalar = (c.metric.inverse() * c.ricci).trace();
    return c;
}

}  // namespace

NfForm nf_form(const Section& s, std::span<const double> x) {
    const ChartJet cj = s.jet(x);
    const auto fv = embedding::defining_function_value(s.f(), cj.y);
    const int n = s.n();
    NfForm r;
    r.hessian_route = cj.J.transpose() * fv.hess * cj.J;
    r.connection_route = Eigen::MatrixXd::Zero(n, n);
    for (int al = 0; al < cj.y.size(); ++al) r.connection_route -= fv.grad[al] * cj.d2[al];
    return r;
}

AmbientScalars ambient_scalars(const Section& s, std::span<const double> x) {
    const ChartJet cj = s.jet(x);
    const auto fv = embedding::defining_function_value(s.f(), cj.y);
    AmbientScalars a;
    a.F2 = fv.F2;
    a.box = fv.box;
    a.Nf = cj.J.transpose() * fv.hess * cj.J;
    a.g = section_metric(s, x);
    a.trace_N = (a.g.inverse() * a.Nf).trace();
    a.hess_DF = cj.y.dot(fv.hess * fv.F);
    a.hess_DD = cj.y.dot(fv.hess * cj.y);
    return a;
}

CurvatureSet ambient_curvature(const Section& s, std::span<const double> x) {
    const AmbientScalars a = ambient_scalars(s, x);
    Tensor4 rm = kulkarni_nomizu(a.g, a.F2 * a.g - 2.0 * a.Nf) * -0.5;
    return finish({x.begin(), x.end()}, a.g, std::move(rm));
}

CurvatureSet ambient_curvature(int k, const scalefactor::ScaleExpr& a, const ChartPoint& p) {
    const auto x = p.coords();
    return ambient_curvature(embedding::flrw_section(k, a, p.n()), x);
}

double scalar_formula(const Section& s, std::span<const double> x) {
    const auto cj = s.jet(x);
    const auto fv = embedding::defining_function_value(s.f(), cj.y);
    const int n = s.n();
    return -n * (n - 1) * fv.F2 + 2.0 * (n - 1) * fv.box;
}

CurvatureSet intrinsic_curvature_oracle(const intrinsic::MetricFn& g, std::span<const double> x,
                                        const intrinsic::FdOptions& opt) {
    const int n = static_cast<int>(x.size());
    const auto G = intrinsic::christoffel(g, x, opt);
    // dG[m][r](n, s) = d_m G^r_{ns}
    intrinsic::VecFn flatG = [&](std::span<const double> p) {
        const auto Gp = intrinsic::christoffel(g, p, opt);
        Eigen::VectorXd v(n * n * n);
        for (int r = 0; r < n; ++r)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) v[(r * n + a) * n + b] = Gp[r](a, b);
        return v;
    };
    std::vector<Eigen::VectorXd> dG(n);
    for (int mu = 0; mu < n; ++mu) dG[mu] = intrinsic::partial(flatG, x, mu, opt);
    auto dGam = [&](int m, int r, int a, int b) { return dG[m][(r * n + a) * n + b]; };

    const Eigen::MatrixXd gx = g(x);
    Tensor4 up(n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m)
                for (int v = 0; v < n; ++v) {
                    double val = dGam(m, r, v, s) - dGam(v, r, m, s);
                    for (int l = 0; l < n; ++l) val += G[r](m, l) * G[l](v, s) - G[r](v, l) * G[l](m, s);
                    up(r, s, m, v) = val;
                }
    Tensor4 rm(n);
    for (int xx = 0; xx < n; ++xx)
        for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m)
                for (int v = 0; v < n; ++v) {
                    double val = 0.0;
                    for (int r = 0; r < n; ++r) val += gx(xx, r) * up(r, s, m, v);
                    rm(xx, s, m, v) = val;
                }
    return finish({x.begin(), x.end()}, gx, std::move(rm));
}

CurvatureSet intrinsic_curvature_oracle(int k, const scalefactor::ScaleExpr& a, const ChartPoint& p,
                                        const intrinsic::FdOptions& opt) {
    const auto x = p.coords();
    intrinsic::MetricFn g = [k, &a](std::span<const double> q) {
        return embedding::flrw_closed_metric(k, a, q);
    };
    return intrinsic_curvature_oracle(g, x, opt);
}

Tensor4 weyl_part(const CurvatureSet& c) {
    const int n = c.riemann.dim();
    if (n < 3) return Tensor4(n);
    const Eigen::MatrixXd P = (c.ricci - c.scalar / (2.0 * (n - 1)) * c.metric) / (n - 2.0);
    return c.riemann - kulkarni_nomizu(c.metric, P);
}

Form derivation(const Eigen::MatrixXd& N, const Eigen::MatrixXd& g, const Form& a) {
    const int n = a.dim;
    const Eigen::MatrixXd gi = g.inverse();
    Form r(n);
    std::vector<double> lam(n), v(n);
    for (int mu = 0; mu < n; ++mu) {
        // i^nu weighted by N_{mu nu}: the vector N_{mu nu} g^{nu l}
        for (int l = 0; l < n; ++l) {
            v[l] = 0.0;
            for (int nu = 0; nu < n; ++nu) v[l] += N(mu, nu) * gi(nu, l);
        }
        std::fill(lam.begin(), lam.end(), 0.0);
        lam[mu] = 1.0;
        r += forms::ext<double>(lam, forms::interior<double>(v, a));
    }
    return r;
}

Form WeitzenboeckShift::apply(const Eigen::MatrixXd& g, const Form& a) const {
    return scalar * a + derivation_apply(g, a);
}

WeitzenboeckShift weitzenboeck_shift(const Section& s, int degree, std::span<const double> x) {
    const int n = s.n();
    if (degree < 0 || degree > n) throw DomainError("form degree out of range");
    const AmbientScalars a = ambient_scalars(s, x);
    WeitzenboeckShift w;
    w.degree = degree;
    w.scalar = degree * (n - degree) * a.F2 - degree * a.box;
    w.derivation = (2.0 * degree - n) * a.Nf;
    return w;
}

WeitzenboeckShift lemma1_shift(const Eigen::MatrixXd& T, const Eigen::MatrixXd& g, int degree) {
    const int n = static_cast<int>(T.rows());
    WeitzenboeckShift w;
    w.degree = degree;
    w.scalar = -degree * (g.inverse() * T).trace();
    w.derivation = (2.0 * degree - n) * T;
    return w;
}

Form weitzenboeck_from_riemann(const Tensor4& rm, const Eigen::MatrixXd& g, const Form& a) {
    const int n = a.dim;
    const Eigen::MatrixXd gi = g.inverse();
    auto e = [n](int i) {
        std::vector<double> v(n, 0.0);
        v[i] = 1.0;
        return v;
    };
    auto raised_i = [&](int b, const Form& f) {
        std::vector<double> v(n);
        for (int l = 0; l < n; ++l) v[l] = gi(b, l);
        return forms::interior<double>(v, f);
    };
    Form r(n);
    for (int ai = 0; ai < n; ++ai)
        for (int bi = 0; bi < n; ++bi) {
            // R(e_a, e_b) alpha = Rm(e_c, e_d, e_a, e_b) j^c i^d alpha
            Form Rab(n);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const double coef = rm(c, d, ai, bi);
                    if (coef == 0.0) continue;
                    Rab += coef * forms::ext<double>(e(c), raised_i(d, a));
                }
            r += forms::ext<double>(e(ai), raised_i(bi, Rab));
        }
    return r;
}

}  // namespace nullcone::curvature
