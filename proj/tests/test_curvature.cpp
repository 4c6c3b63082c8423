#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcone/curvature.hpp"
#include "nullcone/errors.hpp"

using namespace nullcone;
using namespace nullcone::curvature;
using embedding::chart_preset;
using embedding::flrw_section;
using embedding::make_chart_point;
using scalefactor::parse_scale_factor;
using scalefactor::preset;

namespace {

constexpr int n = 4;

Eigen::MatrixXd random_sym(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

double rel(const Tensor4& a, const Tensor4& b) { return (a - b).max_abs() / std::max(1.0, b.max_abs()); }
double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

struct Case {
    int k;
    std::string a;
    double t0, t1;
};

std::vector<Case> oracle_cases() {
    std::vector<Case> c;
    for (const auto& p : scalefactor::preset_catalog())
        for (int k : p.k_compatible) c.push_back({k, p.name, p.t_min, p.t_max});
    for (int k : {-1, 0, 1}) {
        c.push_back({k, "cosh(t/2) + t^2/5", -2.0, 2.0});
        c.push_back({k, "exp(t/3) * (2 + sin(t))", -2.0, 2.0});
    }
    return c;
}

scalefactor::ScaleExpr resolve(const std::string& s) { return scalefactor::resolve_scale(s); }

}  // namespace

TEST_CASE("kulkarni-nomizu product and contractions") {
    std::mt19937_64 rng(42);
    for (int d : {3, 4, 5}) {
        for (int t = 0; t < 10; ++t) {
            const Eigen::MatrixXd h = random_sym(rng, d), k = random_sym(rng, d);
            Eigen::MatrixXd g = random_sym(rng, d) + 3.0 * Eigen::MatrixXd::Identity(d, d);
            CHECK((kulkarni_nomizu(h, k) - kulkarni_nomizu(k, h)).max_abs() < 1e-15);
            CHECK(kulkarni_nomizu(h, k).riemann_defect() < 1e-14);
            const Eigen::MatrixXd gi = g.inverse();
            const double trk = (gi * k).trace();
            CHECK(rel(contract13(kulkarni_nomizu(g, k), gi), (d - 2) * k + trk * g) < 1e-12);
            CHECK(rel(contract13(kulkarni_nomizu(g, g), gi), 2.0 * (d - 1) * g) < 1e-12);
        }
    }
}

TEST_CASE("ambient curvature: AdSM sections have constant curvature") {
    const std::vector<double> xi = {0.2, 0.1, -0.3, 0.25};
    for (auto [name, kappa] : std::vector<std::pair<const char*, double>>{{"ds_half", 1.0}, {"ads", -1.0}, {"mink_global", 0.0}}) {
        const auto s = chart_preset(name);
        const auto c = ambient_curvature(s, xi);
        const auto nf = nf_form(s, xi);
        CHECK(nf.hessian_route.cwiseAbs().maxCoeff() < 1e-14);
        CHECK(rel(c.riemann, kulkarni_nomizu(c.metric, c.metric) * (-kappa / 2)) < 1e-12);
        CHECK(c.scalar == doctest::Approx(-n * (n - 1) * kappa).scale(1.0).epsilon(1e-12));
    }
    CHECK(ambient_curvature(chart_preset("mink_global"), xi).riemann.max_abs() < 1e-14);
    // linear null f with a FLRW chart
    const auto mk = chart_preset("mink_flrw_km1");
    CHECK(std::abs(ambient_curvature(mk, std::vector<double>{0.4, 0.6, 1.0, 0.3}).scalar) < 1e-12);
}

TEST_CASE("intrinsic oracle: spec examples") {
    const auto one = parse_scale_factor("1");
    const auto flat = intrinsic_curvature_oracle(0, one, make_chart_point(0, 0.3, 0.8, {1.0, 0.5}));
    CHECK(flat.riemann.max_abs() < 1e-8);
    CHECK(std::abs(flat.scalar) < 1e-8);

    const auto ds = intrinsic_curvature_oracle(0, preset("ds_k0"), make_chart_point(0, 0.7, 0.4, {1.2, 0.3}));
    // -n(n-1) H^2 with n = 4
    CHECK(ds.scalar == doctest::Approx(-12.0).epsilon(1e-6));

    double lo = 1e300, hi = -1e300;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.2, 2.8);
    for (int i = 0; i < 10; ++i) {
        const auto c = intrinsic_curvature_oracle(1, one, make_chart_point(1, u(rng) - 1.5, u(rng), {u(rng), u(rng)}));
        lo = std::min(lo, c.scalar);
        hi = std::max(hi, c.scalar);
    }
    CHECK(hi - lo < 1e-6);
    // Einstein static universe: R = -6 (n-1)(n-2)/... in these units: -n(n-1)F^2 + 2(n-1) box f
    const auto amb = ambient_curvature(flrw_section(1, one), std::vector<double>{0.1, 1.0, 1.0, 0.5});
    CHECK(lo == doctest::Approx(amb.scalar).epsilon(1e-6));
}

TEST_CASE("oracle equivalence over sections, scale factors and chart points") {
    std::mt19937_64 rng(42);
    int count = 0;
    for (const auto& c : oracle_cases()) {
        const auto a = resolve(c.a);
        const auto sec = flrw_section(c.k, a);
        std::uniform_real_distribution<double> ut(c.t0 + 0.05, c.t1 - 0.05);
        std::uniform_real_distribution<double> uchi(0.2, c.k == 1 ? 2.9 : 1.5), uth(0.3, 2.8), uph(-3, 3);
        for (int i = 0; i < 5; ++i) {
            const auto p = make_chart_point(c.k, ut(rng), uchi(rng), {uth(rng), uph(rng)});
            const auto amb = ambient_curvature(c.k, a, p);
            const auto orc = intrinsic_curvature_oracle(c.k, a, p);
            INFO("k=", c.k, " a=", c.a, " t=", p.t, " chi=", p.chi);
            CHECK(rel(amb.riemann, orc.riemann) < 1e-5);
            CHECK(rel(amb.ricci, orc.ricci) < 1e-5);
            CHECK(std::abs(amb.scalar - orc.scalar) / std::max(1.0, std::abs(orc.scalar)) < 1e-5);
            if (amb.riemann.max_abs() > 1e-3) CHECK(amb.riemann.riemann_defect() < 1e-10);
            if (orc.riemann.max_abs() > 1e-3) CHECK(orc.riemann.riemann_defect() < 1e-6);
            const auto x = p.coords();
            CHECK(amb.scalar == doctest::Approx(scalar_formula(sec, x)).epsilon(1e-10));
            const auto nf = nf_form(sec, x);
            CHECK(rel(nf.hessian_route, nf.connection_route) < 1e-9);
            const auto as = ambient_scalars(sec, x);
            CHECK(std::abs(as.hess_DF) < 1e-9);
            CHECK(std::abs(as.hess_DD) < 1e-9);
            CHECK(as.trace_N == doctest::Approx(as.box - 2 * as.hess_DF + as.F2 * as.hess_DD).epsilon(1e-9));
            CHECK(weyl_part(amb).max_abs() < 1e-9 * std::max(1.0, amb.riemann.max_abs()));
            ++count;
        }
    }
    CHECK(count >= 5 * 14);
}

TEST_CASE("ricci formula from f alone") {
    const auto sec = flrw_section(0, preset("matter_k0"));
    const std::vector<double> x = {1.0, 0.5, 1.0, 0.2};
    const auto as = ambient_scalars(sec, x);
    const auto c = ambient_curvature(sec, x);
    const Eigen::MatrixXd ric = -(n - 1) * as.F2 * as.g + (n - 2) * as.Nf + as.box * as.g;
    CHECK(rel(c.ricci, ric) < 1e-12);
}

TEST_CASE("weitzenboeck shift") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    auto random_form = [&](int deg) {
        forms::Form f(n);
        for (forms::Mask A = 0; A < f.size(); ++A)
            if (forms::degree(A) == deg) f[A] = u(rng);
        return f;
    };
    const std::vector<double> xi = {0.2, 0.1, -0.3, 0.25};
    // degree 0: nothing
    for (const char* name : {"ds_half", "ads", "mink_global"}) {
        const auto w = weitzenboeck_shift(chart_preset(name), 0, xi);
        CHECK(w.scalar == 0.0);
    }
    // AdSM with kappa = 1, degree 1: 3 Id; Lemma 1 with T = -kappa/2 g for all degrees
    for (auto [name, kappa] : std::vector<std::pair<const char*, double>>{{"ds_half", 1.0}, {"ads", -1.0}}) {
        const auto s = chart_preset(name);
        const Eigen::MatrixXd g = s.closed_form_metric(xi);
        for (int deg = 0; deg <= n; ++deg) {
            const auto w = weitzenboeck_shift(s, deg, xi);
            const auto l = lemma1_shift(-kappa / 2 * g, g, deg);
            const auto a = random_form(deg);
            CHECK(forms::max_abs(w.apply(g, a) - deg * (n - deg) * kappa * a) < 1e-12);
            CHECK(forms::max_abs(l.apply(g, a) - deg * (n - deg) * kappa * a) < 1e-12);
        }
        if (kappa == 1.0) {
            const auto a = random_form(1);
            CHECK(forms::max_abs(weitzenboeck_shift(s, 1, xi).apply(g, a) - 3.0 * a) < 1e-12);
        }
    }
    // Minkowski: zero for all degrees
    for (int deg = 0; deg <= n; ++deg) {
        const auto w = weitzenboeck_shift(chart_preset("mink_global"), deg, xi);
        CHECK(w.scalar == 0.0);
        CHECK(w.derivation.cwiseAbs().maxCoeff() == 0.0);
    }
    // general f: LB1 equals Lemma 1 with T = N_f - F^2 g / 2, and the Riemann-operator form
    const std::vector<std::pair<int, const char*>> cases = {{0, "matter_k0"}, {-1, "ds_km1"}, {1, "einstein"}, {0, "radiation_k0"}};
    for (auto [k, name] : cases) {
        const auto sec = flrw_section(k, preset(name));
        const std::vector<double> x = {1.1, 0.6, 1.2, -0.4};
        const auto as = ambient_scalars(sec, x);
        const intrinsic::MetricFn gf = [&sec](std::span<const double> q) { return sec.closed_form_metric(q); };
        const auto orc = intrinsic_curvature_oracle(gf, x);
        for (int deg = 0; deg <= n; ++deg) {
            const auto w = weitzenboeck_shift(sec, deg, x);
            const auto l = lemma1_shift(as.Nf - 0.5 * as.F2 * as.g, as.g, deg);
            for (int t = 0; t < 5; ++t) {
                const auto a = random_form(deg);
                const auto wa = w.apply(as.g, a);
                CHECK(forms::max_abs(wa - l.apply(as.g, a)) < 1e-10 * std::max(1.0, forms::max_abs(wa)));
                const auto ra = weitzenboeck_from_riemann(orc.riemann, as.g, a);
                CHECK(forms::max_abs(wa - ra) < 1e-5 * std::max(1.0, forms::max_abs(wa)));
            }
        }
    }
    CHECK_THROWS_AS(weitzenboeck_shift(chart_preset("ds_half"), 5, xi), DomainError);
}
