#include "nullcone/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "nullcone/calculus.hpp"
#include "nullcone/curvature.hpp"
#include "nullcone/errors.hpp"
#include "nullcone/isometries.hpp"
#include "nullcone/propagators.hpp"
#include "nullcone/restriction.hpp"

namespace nullcone::acceptance {

namespace {

using embedding::ChartPoint;
using numeric::Jet;
using scalefactor::resolve_scale;
using scalefactor::ScaleExpr;

constexpr int n = 4;

// running maximum of one named residual
struct Worst {
    std::string name;
    double threshold;
    double value = 0.0;
    void see(double v) { value = std::max(value, std::isfinite(v) ? v : INFINITY); }
    Check check() const { return {name, value, threshold}; }
};

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}
template <class M>
double rel_scaled(const M& a, const M& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

ChartPoint random_chart(std::mt19937_64& rng, int k, double t0, double t1) {
    std::uniform_real_distribution<double> t(t0, t1), chi(0.1, k == 1 ? std::numbers::pi - 0.1 : 2.5),
        th(0.1, std::numbers::pi - 0.1), ph(0.0, 2 * std::numbers::pi);
    return embedding::make_chart_point(k, t(rng), chi(rng), {th(rng), ph(rng)});
}

// ---- 1, 2: embedding

std::vector<Check> embedding_constraints(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, scalefactor::Preset>> draws;
    for (const auto& p : scalefactor::preset_catalog())
        for (int k : p.k_compatible) draws.emplace_back(k, p);
    Worst c{"|c(y)|/|y|^2", 1e-12}, f{"|f(y) - 1|", 1e-10};
    std::uniform_int_distribution<std::size_t> pick(0, draws.size() - 1);
    for (int i = 0; i < 1000; ++i) {
        const auto& [k, p] = draws[pick(rng)];
        const auto a = scalefactor::preset(p.name);
        const Eigen::VectorXd y = embedding::embed_point(k, a, random_chart(rng, k, p.t_min, p.t_max));
        c.see(std::abs(embedding::cone_c(y)) / y.squaredNorm());
        f.see(std::abs(embedding::flrw(k, a, n)(y) - 1.0));
    }
    return {c.check(), f.check()};
}

std::vector<Check> metric_identity(unsigned seed) {
    std::mt19937_64 rng(seed);
    const std::vector<std::pair<int, const char*>> presets = {
        {0, "matter_k0"}, {-1, "ds_km1"}, {1, "ds_kp1"}, {-1, "ads_km1"}, {-1, "mink_km1"}, {1, "einstein"}};
    Worst w{"|g - closed form| rel", 1e-9};
    for (const auto& [k, name] : presets) {
        const auto p = *scalefactor::find_preset(name);
        const auto a = scalefactor::preset(name);
        for (int i = 0; i < 200 / static_cast<int>(presets.size()) + 1; ++i) {
            const auto cp = random_chart(rng, k, p.t_min, p.t_max);
            const Eigen::MatrixXd closed = embedding::flrw_closed_metric(k, a, cp.coords());
            w.see(rel_scaled(embedding::induced_metric(k, a, cp), closed));
        }
    }
    return {w.check()};
}

// ---- 3: curvature

std::vector<Check> curvature_oracle(unsigned seed) {
    std::mt19937_64 rng(seed);
    Worst rm{"Riemann rel", 1e-5}, ric{"Ricci rel", 1e-5}, sc{"R rel", 1e-5}, ds{"|R + 12| on dS", 1e-5},
        mk{"|R| on Minkowski", 1e-5};
    for (int k : {-1, 0, 1}) {
        const std::string special = k == -1 ? "csch(t)" : k == 0 ? "1/t" : "csc(t)";
        for (const std::string src : {"1", "t", "t^2", special.c_str(), "sech(t)", "exp(-t)"}) {
            const auto a = resolve_scale(src);
            for (int i = 0; i < 5; ++i) {
                const auto cp = random_chart(rng, k, 0.3, 2.5);
                const auto amb = curvature::ambient_curvature(k, a, cp);
                const auto orc = curvature::intrinsic_curvature_oracle(k, a, cp);
                rm.see((amb.riemann - orc.riemann).max_abs() / std::max(1.0, orc.riemann.max_abs()));
                ric.see(rel(amb.ricci, orc.ricci));
                sc.see(std::abs(amb.scalar - orc.scalar) / std::max(1.0, std::abs(orc.scalar)));
                if (src == special) ds.see(std::abs(amb.scalar + 12.0));
                if ((k == 0 && src == "1") || (k == -1 && src == "exp(-t)")) mk.see(std::abs(amb.scalar));
            }
        }
    }
    return {rm.check(), ric.check(), sc.check(), ds.check(), mk.check()};
}

// ---- 4, 5: restriction

struct SectionPoint {
    int k;
    const char* a;
    std::vector<double> x;
};

const std::vector<SectionPoint>& restriction_sections() {
    static const std::vector<SectionPoint> s = {
        {0, "matter_k0", {1.0, 0.7, 1.1, 0.4}},
        {-1, "ds_km1", {0.8, 0.5, 0.9, 2.0}},
        {1, "einstein", {0.3, 0.6, 1.3, -0.7}},
    };
    return s;
}

std::vector<Check> restriction_formulas(unsigned seed) {
    Worst w{"restriction residual", 1e-5}, h{"Hessian residual", 1e-5};
    for (const auto& c : restriction_sections()) {
        const auto sec = embedding::flrw_section(c.k, scalefactor::preset(c.a));
        for (int deg = 0; deg <= 3; ++deg)
            for (unsigned s = 0; s < 5; ++s) {
                const auto phi = forms::random_polynomial_field(n, deg, 1000ull * seed + 10 * s + deg);
                for (auto which : {restriction::Which::star, restriction::Which::d, restriction::Which::delta,
                                   restriction::Which::box})
                    w.see(restriction::restriction_residual(which, sec, phi, c.x).value);
            }
        const auto& f = sec.f();
        const std::vector<restriction::ScalarField> scalars = {
            [&f](std::span<const Jet> y) { return f(y); },
            [](std::span<const Jet> y) { return y[0] * (y[4] + y[5]); },
            [](std::span<const Jet> y) { return y[1] * y[2] - Jet(0.3) * y[0] * y[0] * y[5]; },
        };
        for (const auto& s : scalars) h.see(restriction::hessian_restriction_residual(sec, s, c.x).value);
    }
    return {w.check(), h.check()};
}

std::vector<Check> conformal_scalar(unsigned seed) {
    std::mt19937_64 rng(seed);
    Worst w{"(box_f - R/6) phi - m* box phi", 1e-6};
    // homogeneous of degree -1 with a positive denominator
    const auto phi = forms::scalar_field(
        [](std::span<const Jet> y) { return (y[1] + Jet(2.0) * y[0]) / (y[0] * y[0] + y[5] * y[5] + y[1] * y[1]); },
        n);
    const std::vector<std::pair<int, const char*>> secs = {
        {0, "matter_k0"}, {-1, "ds_km1"}, {1, "einstein"}, {0, "radiation_k0"}};
    for (const auto& [k, name] : secs) {
        const auto p = *scalefactor::find_preset(name);
        const auto sec = embedding::flrw_section(k, scalefactor::preset(name));
        for (int i = 0; i < 5; ++i) {
            const auto cp = random_chart(rng, k, std::max(p.t_min, 0.3), std::min(p.t_max, 2.5));
            const auto x = cp.coords();
            const forms::FieldsAt A(sec.f(), sec.embed(x), 4);
            const double amb = forms::values(A.ops().box(A.eval(phi)))[0];
            const auto g = [&sec](std::span<const double> q) { return restriction::chart_metric(sec, q); };
            const double eps = restriction::orientation(sec, x).eps;
            const double R = curvature::ambient_curvature(sec, x).scalar;
            const double phif = forms::values(A.eval(phi))[0];
            const double lhs = intrinsic::box(restriction::pulled_back(sec, phi), g, eps, x)[0] - R / 6.0 * phif;
            w.see(std::abs(lhs - amb) / std::max(1.0, std::abs(amb)));
        }
    }
    return {w.check()};
}

// ---- 6: Weitzenboeck

std::vector<Check> weitzenboeck(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Worst lb1{"LB1 - a(n-a)kappa", 1e-10}, lem{"Lemma 1 - a(n-a)kappa", 1e-10};
    const std::vector<double> xi = {0.2, 0.1, -0.3, 0.25};
    for (auto [name, kappa] : std::vector<std::pair<const char*, double>>{{"ds_half", 1.0}, {"ads", -1.0}, {"mink_global", 0.0}}) {
        const auto s = embedding::chart_preset(name);
        const Eigen::MatrixXd g = s.closed_form_metric(xi);
        for (int deg = 0; deg <= n; ++deg) {
            const auto w = curvature::weitzenboeck_shift(s, deg, xi);
            const auto l = curvature::lemma1_shift(-kappa / 2 * g, g, deg);
            for (int t = 0; t < 5; ++t) {
                forms::Form a(n);
                for (forms::Mask A = 0; A < a.size(); ++A)
                    if (forms::degree(A) == deg) a[A] = u(rng);
                const forms::Form expect = deg * (n - deg) * kappa * a;
                lb1.see(forms::max_abs(w.apply(g, a) - expect));
                lem.see(forms::max_abs(l.apply(g, a) - expect));
            }
        }
    }
    return {lb1.check(), lem.check()};
}

// ---- 7, 8: propagators

using propagators::Point;

std::pair<Point, Point> random_pair(std::mt19937_64& rng, int k, const ScaleExpr& a, double margin) {
    std::uniform_real_distribution<double> t(0.4, 2.4), r(-0.5, 0.5);
    for (;;) {
        const Point x{t(rng), r(rng), r(rng), r(rng)}, xp{t(rng), r(rng), r(rng), r(rng)};
        const auto s = propagators::ambient_dot(k, a, x, xp);
        if (std::abs(s.ydot) > margin * s.scale) return {x, xp};
    }
}

std::vector<Check> propagator_decomposition(unsigned seed) {
    std::mt19937_64 rng(seed);
    Worst dec{"ambient - (Einstein + PG) rel", 1e-8}, gauge{"|dd'(PG)|", 1e-6};
    for (int k : {-1, 0, 1})
        for (const char* src : {"t^2", "t"}) {
            const auto a = resolve_scale(src);
            for (int i = 0; i < 20; ++i) {
                const auto [x, xp] = random_pair(rng, k, a, 1e-3);
                const auto amb = propagators::photon_potential_ambient(k, a, x, xp);
                const propagators::BiTensor1 sum =
                    propagators::photon_potential_einstein(k, x, xp) + propagators::pure_gauge_term(k, a, x, xp);
                dec.see(rel_scaled(sum, amb));
            }
            for (int i = 0; i < 2; ++i) {
                const auto [x, xp] = random_pair(rng, k, a, 0.1);
                const auto pg = propagators::field_strength_via_dd(
                    [&](const Point& u, const Point& w) { return propagators::pure_gauge_term(k, a, u, w); }, x, xp);
                gauge.see(pg.cwiseAbs().maxCoeff());
            }
        }
    return {dec.check(), gauge.check()};
}

std::vector<Check> field_strength(unsigned seed) {
    std::mt19937_64 rng(seed);
    Worst inv{"dd'(a) vs dd'(1) rel", 1e-5}, closed{"dd'(1) vs closed form rel", 1e-5};
    const auto one = resolve_scale("1");
    for (int k : {-1, 0, 1}) {
        const std::string special = k == -1 ? "exp(-t)" : k == 0 ? "1/t" : "csc(t)";
        for (const std::string& src : {std::string("t^2"), special}) {
            const auto a = resolve_scale(src);
            for (int i = 0; i < 3; ++i) {
                const auto [x, xp] = random_pair(rng, k, a, 0.1);
                const auto ref = propagators::field_strength_via_dd(k, one, x, xp);
                inv.see(rel_scaled(propagators::field_strength_via_dd(k, a, x, xp), ref));
                closed.see(rel_scaled(ref, propagators::field_strength_two_point(k, x, xp)));
            }
        }
    }
    return {inv.check(), closed.check()};
}

// ---- 9: isometries

std::vector<Check> isometry_counts(unsigned seed) {
    struct Case {
        int k;
        const char* a;
        int dim;
    };
    const std::vector<Case> cases = {
        {0, "matter_k0", 6}, {0, "radiation_k0", 6}, {0, "exp(t/3) * (2 + sin(t))", 6},
        {-1, "einstein", 7}, {1, "einstein", 7},
        {0, "ds_k0", 10},    {-1, "ds_km1", 10},    {1, "ds_kp1", 10},
        {0, "einstein", 10}, {-1, "mink_km1", 10},  {-1, "ads_km1", 10},
    };
    Worst miss{"cases with the wrong dimension", 0.5}, unstable{"cases unstable across seeds", 0.5};
    int wrong = 0, unstable_count = 0;
    for (const auto& c : cases) {
        const auto a = resolve_scale(c.a);
        bool bad = false, varies = false;
        int first = -1;
        for (unsigned s = 0; s < 10; ++s) {
            const int d = isometries::isometry_algebra_dimension(c.k, a, n, 40, 1e-8, seed + s).dimension;
            if (first < 0) first = d;
            varies |= d != first;
            bad |= d != c.dim;
        }
        wrong += bad;
        unstable_count += varies;
    }
    miss.see(wrong);
    unstable.see(unstable_count);
    return {miss.check(), unstable.check()};
}

// ---- 10: exterior algebra

std::vector<Check> exterior_laws(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    const int m = n + 2;
    std::vector<double> sig(m);
    for (int a = 0; a < m; ++a) sig[a] = embedding::eta_diag(n, a);
    auto vec = [&] {
        std::vector<double> v(m);
        for (auto& x : v) x = u(rng);
        return v;
    };
    auto lower = [&](const std::vector<double>& v) {
        std::vector<double> r(m);
        for (int a = 0; a < m; ++a) r[a] = sig[a] * v[a];
        return r;
    };
    std::uniform_int_distribution<forms::Mask> pick(0, (forms::Mask(1) << m) - 1);
    Worst anti{"i/j anticommutators", 1e-12}, dstar{"double Hodge", 1e-12}, spring{"springboard", 1e-12},
        proj{"T^2 = T, T T_c = 0", 1e-12};
    std::vector<std::unique_ptr<forms::FieldsAt>> at;
    for (const auto& c : restriction_sections()) {
        const auto sec = embedding::flrw_section(c.k, scalefactor::preset(c.a));
        at.push_back(std::make_unique<forms::FieldsAt>(sec.f(), sec.embed(c.x), 2));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const forms::Mask A = pick(rng);
        const int deg = forms::degree(A);
        const forms::Form b = u(rng) * forms::blade(m, A);
        const auto x = vec(), y = vec();
        double uv = 0.0;
        for (int a = 0; a < m; ++a) uv += sig[a] * x[a] * y[a];
        auto j = [&](const std::vector<double>& v, const forms::Form& f) { return forms::ext<double>(lower(v), f); };
        auto i = [&](const std::vector<double>& v, const forms::Form& f) { return forms::interior<double>(v, f); };
        anti.see(forms::max_abs(j(x, j(y, b)) + j(y, j(x, b))));
        anti.see(forms::max_abs(i(x, i(y, b)) + i(y, i(x, b))));
        anti.see(forms::max_abs(i(x, j(y, b)) + j(y, i(x, b)) - uv * b));
        const double s = ((n + (n + 1) * deg) & 1) ? -1.0 : 1.0;
        dstar.see(forms::max_abs(forms::star_diag<double>(sig, forms::star_diag<double>(sig, b)) - s * b));
        const forms::Form lhs = forms::interior<double>(lower(x), b);
        const forms::Form rhs = forms::star_diag_inv<double>(sig, forms::ext<double>(x, forms::star_diag<double>(sig, b)));
        spring.see(forms::max_abs(lhs - ((deg + 1) & 1 ? -1.0 : 1.0) * rhs));

        const auto& F = *at[trial % at.size()];
        forms::JetForm bj(m);
        for (forms::Mask M = 0; M < b.size(); ++M) bj[M] = Jet(b[M]);
        const forms::Form Tb = forms::values(F.T(bj));
        proj.see(forms::max_abs(forms::values(F.T(F.T(bj))) - Tb));
        proj.see(forms::max_abs(forms::values(F.T(F.Tc(bj)))));
    }
    return {anti.check(), dstar.check(), spring.check(), proj.check()};
}

struct Entry {
    CriterionInfo info;
    std::function<std::vector<Check>(unsigned)> run;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = {
        {{1, "embedding constraints", 1.0}, embedding_constraints},
        {{2, "metric identity", 1.0}, metric_identity},
        {{3, "curvature oracle", 5.0}, curvature_oracle},
        {{4, "restriction formulas", 30.0}, restriction_formulas},
        {{5, "conformal scalar", 5.0}, conformal_scalar},
        {{6, "Weitzenboeck shift", 1.0}, weitzenboeck},
        {{7, "propagator decomposition", 10.0}, propagator_decomposition},
        {{8, "field-strength invariance", 20.0}, field_strength},
        {{9, "isometry counts", 5.0}, isometry_counts},
        {{10, "exterior-algebra laws", 1.0}, exterior_laws},
    };
    return e;
}

}  // namespace

const Check* CriterionResult::worst() const {
    const Check* w = nullptr;
    for (const auto& c : checks)
        if (!w || c.value / c.threshold > w->value / w->threshold) w = &c;
    return w;
}

const std::vector<CriterionInfo>& criteria() {
    static const std::vector<CriterionInfo> list = [] {
        std::vector<CriterionInfo> l;
        for (const auto& e : entries()) l.push_back(e.info);
        return l;
    }();
    return list;
}

CriterionResult run_criterion(int id, unsigned seed) {
    for (const auto& e : entries()) {
        if (e.info.id != id) continue;
        CriterionResult r;
        r.info = e.info;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.checks = e.run(seed);
        } catch (const std::exception& ex) {
            r.error = ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.passed = r.error.empty() && r.seconds < r.info.time_limit;
        for (const auto& c : r.checks) r.passed &= c.value < c.threshold;
        return r;
    }
    throw std::invalid_argument("no acceptance criterion with id " + std::to_string(id));
}

std::string format_line(const CriterionResult& r) {
    char buf[512];
    if (!r.error.empty()) {
        std::snprintf(buf, sizeof buf, "FAIL  %2d  %-26s  error: %s  (%.2f s)", r.info.id, r.info.title.c_str(),
                      r.error.c_str(), r.seconds);
        return buf;
    }
    const Check* w = r.worst();
    std::snprintf(buf, sizeof buf, "%s  %2d  %-26s  %s = %.3g (< %.3g)  %.2f s (< %.0f s)", r.passed ? "PASS" : "FAIL",
                  r.info.id, r.info.title.c_str(), w ? w->name.c_str() : "-", w ? w->value : 0.0,
                  w ? w->threshold : 0.0, r.seconds, r.info.time_limit);
    return buf;
}

}  // namespace nullcone::acceptance
