#include "nullcone/propagators.hpp"

#include <cmath>
#include <numbers>

#include "nullcone/numeric/hyperdual.hpp"

namespace nullcone::propagators {

using numeric::HyperDual;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
constexpr double kSig[6] = {1, -1, -1, -1, -1, 1};

struct EmbJet {
    Eigen::Matrix<double, 6, 1> y;
    Eigen::Matrix<double, 6, 4> J;
};

EmbJet embed_jet(int k, const ScaleExpr& a, const Point& x) {
    std::array<HyperDual, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = HyperDual::variable(x[i], i, 4);
    const auto y = embed<HyperDual>(k, a, v);
    EmbJet e;
    for (int al = 0; al < 6; ++al) {
        e.y[al] = y[al].value();
        for (int mu = 0; mu < 4; ++mu) e.J(al, mu) = y[al].grad(mu);
    }
    return e;
}

double eta_dot6(const Eigen::Matrix<double, 6, 1>& a, const Eigen::Matrix<double, 6, 1>& b) {
    double s = 0.0;
    for (int al = 0; al < 6; ++al) s += kSig[al] * a[al] * b[al];
    return s;
}

double rdot(const Point& x, const Point& xp) { return x[1] * xp[1] + x[2] * xp[2] + x[3] * xp[3]; }
double r2(const Point& x) { return rdot(x, x); }

/// Einstein-space y.y' (a = 1) from the closed forms.
double einstein_dot(int k, const Point& x, const Point& xp) {
    const double dt = x[0] - xp[0];
    if (k == 0) {
        double q = dt * dt;
        for (int i = 1; i < 4; ++i) q -= (x[i] - xp[i]) * (x[i] - xp[i]);
        return -0.5 * q;
    }
    if (k == -1) return std::sqrt((1 + r2(x)) * (1 + r2(xp))) - rdot(x, xp) - std::cosh(dt);
    if (r2(x) >= 1.0 || r2(xp) >= 1.0) throw DomainError("k = +1 chart needs r^2 < 1");
    return std::cos(dt) - std::sqrt((1 - r2(x)) * (1 - r2(xp))) - rdot(x, xp);
}

double checked_einstein_dot(int k, const Point& x, const Point& xp) {
    const double Y = einstein_dot(k, x, xp);
    if (std::abs(Y) < 1e-9) throw SingularSeparation("points are light-like separated (y.y' = 0)");
    return Y;
}

BiTensor2 antisymmetrize(const std::function<double(int, int, int, int)>& K) {
    // K(a, c, b, d) with (a, b) at x and (c, d) at x'
    BiTensor2 F;
    for (int P = 0; P < 6; ++P)
        for (int R = 0; R < 6; ++R) {
            const int a = kPairs[P][0], b = kPairs[P][1], c = kPairs[R][0], d = kPairs[R][1];
            F(P, R) = K(a, c, b, d) - K(b, c, a, d) - K(a, d, b, c) + K(b, d, a, c);
        }
    return F;
}

}  // namespace

int pair_index(int a, int b) {
    for (int p = 0; p < 6; ++p)
        if (kPairs[p][0] == a && kPairs[p][1] == b) return p;
    throw std::invalid_argument("pair index needs 0 <= a < b < 4");
}

Point from_chart(int k, const embedding::ChartPoint& p) {
    if (p.n() != 4) throw DomainError("two-point functions need n = 4");
    if (k == 1 && !(std::cos(p.chi) > 0.0))
        throw DomainError("the (t, r) chart of k = +1 covers cos(chi) > 0 only");
    const auto w = embedding::sphere_omega<double>(p.angles);
    const double r = k == -1 ? std::sinh(p.chi) : k == 1 ? std::sin(p.chi) : p.chi;
    return {p.t, r * w[0], r * w[1], r * w[2]};
}

PairSeparation ambient_dot(int k, const ScaleExpr& a, const Point& x, const Point& xp) {
    PairSeparation s;
    const auto y = embed<double>(k, a, x), yp = embed<double>(k, a, xp);
    for (int al = 0; al < 6; ++al) s.ydot += kSig[al] * y[al] * yp[al];
    s.scale = a.positive(x[0]) * a.positive(xp[0]);
    s.ydot_closed = s.scale * einstein_dot(k, x, xp);
    s.singular = std::abs(s.ydot) < 1e-9 * s.scale;
    return s;
}

double scalar_two_point(int k, const ScaleExpr& a, const Point& x, const Point& xp) {
    const auto s = ambient_dot(k, a, x, xp);
    if (s.singular) throw SingularSeparation("points are light-like separated (y.y' = 0)");
    return 1.0 / (8.0 * kPi2 * s.ydot);
}

BiTensor1 photon_potential_ambient(int k, const ScaleExpr& a, const Point& x, const Point& xp) {
    const EmbJet e = embed_jet(k, a, x), ep = embed_jet(k, a, xp);
    const double Y = eta_dot6(e.y, ep.y);
    if (std::abs(Y) < 1e-9 * a.positive(x[0]) * a.positive(xp[0]))
        throw SingularSeparation("points are light-like separated (y.y' = 0)");
    Eigen::Matrix<double, 6, 6> eta = Eigen::Matrix<double, 6, 6>::Zero();
    for (int al = 0; al < 6; ++al) eta(al, al) = kSig[al];
    return -(e.J.transpose() * eta * ep.J) / (8.0 * kPi2 * Y);
}

BiTensor1 photon_potential_einstein(int k, const Point& x, const Point& xp) {
    const double Y = checked_einstein_dot(k, x, xp);
    const double dt = x[0] - xp[0];
    BiTensor1 M = BiTensor1::Zero();
    if (k == 0) {
        // 1/(4 pi^2 (dxi)^2) dxi^mu (x) dxi'_mu, (dxi)^2 = -2 Y
        const double q = -2.0 * Y;
        for (int mu = 0; mu < 4; ++mu) M(mu, mu) = (mu == 0 ? 1.0 : -1.0) / (4.0 * kPi2 * q);
        return M;
    }
    const double s = static_cast<double>(k);
    M(0, 0) = k == -1 ? std::cosh(dt) : std::cos(dt);
    const double rr = std::sqrt((1 - s * r2(x)) * (1 - s * r2(xp)));
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j) M(i, j) = (i == j ? -1.0 : 0.0) - s * x[i] * xp[j] / rr;
    return -M / (8.0 * kPi2 * Y);
}

BiTensor1 pure_gauge_term(int k, const ScaleExpr& a, const Point& x, const Point& xp) {
    const double p = scalefactor::psi_dot(a, x[0]), pp = scalefactor::psi_dot(a, xp[0]);
    const double Y = checked_einstein_dot(k, x, xp);
    const double dt = x[0] - xp[0];
    BiTensor1 G = BiTensor1::Zero();  // -8 pi^2 PG_k
    G(0, 0) = p * pp;
    if (k == 0) {
        const double q = -2.0 * Y;
        for (int mu = 0; mu < 4; ++mu) {
            const double dl = (mu == 0 ? 1.0 : -1.0) * (x[mu] - xp[mu]);  // Delta xi_mu
            G(mu, 0) += 2.0 / q * dl * pp;
            G(0, mu) -= 2.0 / q * p * dl;
        }
        return -G / (8.0 * kPi2);
    }
    const double s = static_cast<double>(k);
    const double sn = k == -1 ? std::sinh(dt) : std::sin(dt);
    const double q = std::sqrt((1 - s * r2(x)) / (1 - s * r2(xp)));  // sqrt((1 -+ r^2)/(1 -+ r'^2))
    G(0, 0) += p * sn / Y;
    G(0, 0) -= sn * pp / Y;
    for (int i = 1; i < 4; ++i) {
        G(0, i) -= p * (x[i] - xp[i] * q) / Y;
        G(i, 0) -= (xp[i] - x[i] / q) * pp / Y;
    }
    return -G / (8.0 * kPi2);
}

BiTensor2 field_strength_two_point(int k, const Point& x, const Point& xp) {
    const double Y = checked_einstein_dot(k, x, xp);
    BiTensor2 F = BiTensor2::Zero();
    if (k == 0) {
        // (1/2pi^2)(1/Q^2) dxi^mu ^ dxi^nu (x) dxi'_mu ^ dxi'_nu
        //   - (2/pi^2)(1/Q^3) Dxi_mu Dxi_nu dxi^mu ^ dxi^rho (x) dxi'^nu ^ dxi'_rho
        const double Q = -2.0 * Y;
        std::array<double, 4> eta = {1, -1, -1, -1}, dl;
        for (int mu = 0; mu < 4; ++mu) dl[mu] = eta[mu] * (x[mu] - xp[mu]);
        // (e^mu ^ e^nu)(e_a, e_b) = d^mu_a d^nu_b - d^mu_b d^nu_a
        for (int P = 0; P < 6; ++P)
            for (int R = 0; R < 6; ++R) {
                const int a = kPairs[P][0], b = kPairs[P][1], c = kPairs[R][0], d = kPairs[R][1];
                auto w = [](int mu, int nu, int i, int j) {
                    return double((mu == i && nu == j) - (mu == j && nu == i));
                };
                double t1 = 0.0, t2 = 0.0;
                for (int mu = 0; mu < 4; ++mu)
                    for (int nu = 0; nu < 4; ++nu) {
                        t1 += w(mu, nu, a, b) * eta[mu] * eta[nu] * w(mu, nu, c, d);
                        for (int rho = 0; rho < 4; ++rho)
                            t2 += dl[mu] * dl[nu] * w(mu, rho, a, b) * eta[rho] * w(nu, rho, c, d);
                    }
                F(P, R) = t1 / (2.0 * kPi2 * Q * Q) - 2.0 * t2 / (kPi2 * Q * Q * Q);
            }
        return F;
    }
    const double s = static_cast<double>(k);
    const double dt = x[0] - xp[0];
    const double ch = k == -1 ? std::cosh(dt) : std::cos(dt);
    const double sh = k == -1 ? std::sinh(dt) : std::sin(dt);
    auto r = [&](int i) { return x[i + 1]; };
    auto rp = [&](int i) { return xp[i + 1]; };
    const auto dlt = [](int i, int j) { return i == j ? 1.0 : 0.0; };

    struct Helpers {
        double D[3][3], G[3][3], rr, q;  // q = sqrt((1 - s r^2)/(1 - s r'^2))
    };
    auto helpers = [&](const Point& u, const Point& v) {
        Helpers h;
        const double ru2 = r2(u), rv2 = r2(v);
        h.rr = std::sqrt((1 - s * ru2) * (1 - s * rv2));
        h.q = std::sqrt((1 - s * ru2) / (1 - s * rv2));
        for (int i = 0; i < 3; ++i)
            for (int m = 0; m < 3; ++m) {
                const double ui = u[i + 1], um = u[m + 1], vi = v[i + 1], vm = v[m + 1];
                h.D[i][m] = dlt(i, m) + s * ui * vm / h.rr;
                h.G[i][m] = ui * vm + vi * um - std::sqrt((1 - s * rv2) / (1 - s * ru2)) * ui * um -
                            h.q * vi * vm;
            }
        return h;
    };
    const Helpers h = helpers(x, xp);
    const double Y2 = Y * Y, Y3 = Y2 * Y;
    const double sh2 = sh * sh;

    // [0i][0'm]
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 3; ++m)
            F(i, m) = (-ch / Y2 * h.D[i][m] - (ch * h.G[i][m] + sh2 * h.D[i][m]) / Y3) / (4.0 * kPi2);

    // [0i][m'n'].  Normalized to F(e_a, e_b; e'_c, e'_d) like the other blocks; the
    // sqrt term enters with a minus sign for both k (fixed against the ambient form).
    auto f0i_mn = [&](const Point& u, const Point& v, double shs, int i, int m, int n) {
        const Helpers hu = helpers(u, v);
        const double ru_m = u[m + 1], ru_n = u[n + 1], rv_m = v[m + 1], rv_n = v[n + 1];
        const double val = ru_m * hu.D[i][n] - ru_n * hu.D[i][m] -
                           hu.q * (rv_m * dlt(i, n) - rv_n * dlt(i, m));
        return shs / (Y3 * 4.0 * kPi2) * val;
    };
    for (int i = 0; i < 3; ++i)
        for (int R = 3; R < 6; ++R) {
            const int m = kPairs[R][0] - 1, n = kPairs[R][1] - 1;
            F(i, R) = f0i_mn(x, xp, sh, i, m, n);
            // swap rule: <F_mn(x) F_0i(x')> = <F_0i(x') F_mn(x)>
            F(R, i) = f0i_mn(xp, x, -sh, i, m, n);
        }

    // [ij][m'n'], same normalization; the delta-delta term is negative for both k
    for (int P = 3; P < 6; ++P)
        for (int R = 3; R < 6; ++R) {
            const int i = kPairs[P][0] - 1, j = kPairs[P][1] - 1;
            const int m = kPairs[R][0] - 1, n = kPairs[R][1] - 1;
            auto& D = h.D;
            auto& G = h.G;
            const double t1 = D[i][m] * dlt(j, n) - D[j][m] * dlt(i, n) - D[i][n] * dlt(j, m) +
                              D[j][n] * dlt(i, m) - (dlt(i, m) * dlt(j, n) - dlt(j, m) * dlt(i, n));
            const double quad = (rp(i) * r(j) * r(m) * rp(n) - rp(j) * r(i) * r(m) * rp(n) -
                                 rp(i) * r(j) * r(n) * rp(m) + rp(j) * r(i) * r(n) * rp(m)) / h.rr;
            const double gt = G[i][m] * dlt(j, n) - G[j][m] * dlt(i, n) - G[i][n] * dlt(j, m) +
                              G[j][n] * dlt(i, m);
            F(P, R) = (t1 / Y2 + (s * quad + gt) / Y3) / (4.0 * kPi2);
        }
    return F;
}

BiTensor2 field_strength_ambient(int k, const ScaleExpr& a, const Point& x, const Point& xp) {
    const EmbJet e = embed_jet(k, a, x), ep = embed_jet(k, a, xp);
    const double Y = eta_dot6(e.y, ep.y);
    if (std::abs(Y) < 1e-9 * a.positive(x[0]) * a.positive(xp[0]))
        throw SingularSeparation("points are light-like separated (y.y' = 0)");
    Eigen::Matrix<double, 6, 6> eta = Eigen::Matrix<double, 6, 6>::Zero();
    for (int al = 0; al < 6; ++al) eta(al, al) = kSig[al];
    const Eigen::Matrix4d A = e.J.transpose() * eta * ep.J;
    const Eigen::Vector4d u = e.J.transpose() * eta * ep.y;  // y'_gamma dy^gamma
    const Eigen::Vector4d v = ep.J.transpose() * eta * e.y;  // y_delta' dy'^delta'
    const double Y2 = Y * Y, Y3 = Y2 * Y;
    return antisymmetrize([&](int p, int q, int r, int s) {
               return A(p, q) * A(r, s) / Y2 - 2.0 * A(p, q) * u[r] * v[s] / Y3;
           }) /
           (8.0 * kPi2);
}

BiTensor2 field_strength_via_dd(const BiFn& M, const Point& x, const Point& xp,
                                const intrinsic::FdOptions& opt) {
    // inner: H[c][b][d] = d'_c M_bd at (u, xp); outer: d_a of that at x
    const intrinsic::VecFn inner_all = [&](std::span<const double> u) {
        const Point pu = {u[0], u[1], u[2], u[3]};
        Eigen::VectorXd out(64);
        for (int c = 0; c < 4; ++c) {
            const intrinsic::VecFn m = [&](std::span<const double> w) {
                const BiTensor1 v = M(pu, {w[0], w[1], w[2], w[3]});
                return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), 16));
            };
            out.segment<16>(16 * c) = intrinsic::partial(m, xp, c, opt);
        }
        return out;
    };
    std::array<Eigen::VectorXd, 4> dd;
    for (int a = 0; a < 4; ++a) dd[a] = intrinsic::partial(inner_all, x, a, opt);
    // column-major map: M_bd sits at b + 4 d
    return antisymmetrize([&](int a, int c, int b, int d) { return dd[a][16 * c + b + 4 * d]; });
}

BiTensor2 field_strength_via_dd(int k, const ScaleExpr& a, const Point& x, const Point& xp,
                                const intrinsic::FdOptions& opt) {
    const auto s = ambient_dot(k, a, x, xp);
    if (std::abs(s.ydot) < 1e-3 * s.scale)
        throw SingularSeparation("points too close to the light cone for finite differences");
    return field_strength_via_dd(
        [&](const Point& u, const Point& w) { return photon_potential_ambient(k, a, u, w); }, x, xp,
        opt);
}

}  // namespace nullcone::propagators
