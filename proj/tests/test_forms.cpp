#include <cmath>
#include <random>

#include "doctest.h"
#include "nullcone/calculus.hpp"
#include "nullcone/errors.hpp"
#include "nullcone/restriction.hpp"

using namespace nullcone;
using namespace nullcone::forms;
using embedding::DefiningFunction;
using embedding::flrw_section;
using numeric::Jet;
using restriction::Which;
using scalefactor::preset;

namespace {

constexpr int n = 4, m = 6;

std::vector<double> eta_sig() {
    std::vector<double> s(m);
    for (int a = 0; a < m; ++a) s[a] = embedding::eta_diag(n, a);
    return s;
}

Form random_form(std::mt19937_64& rng, int deg = -1) {
    std::uniform_real_distribution<double> u(-1, 1);
    Form f(m);
    for (Mask A = 0; A < f.size(); ++A)
        if (deg < 0 || degree(A) == deg) f[A] = u(rng);
    return f;
}

std::vector<double> random_vec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(m);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<double> lower(const std::vector<double>& v) {
    auto s = eta_sig();
    std::vector<double> r(m);
    for (int a = 0; a < m; ++a) r[a] = s[a] * v[a];
    return r;
}

Form j_vec(const std::vector<double>& v, const Form& a) { return ext<double>(lower(v), a); }
Form i_vec(const std::vector<double>& v, const Form& a) { return interior<double>(v, a); }

double eta_uv(const std::vector<double>& u, const std::vector<double>& v) {
    auto s = eta_sig();
    double r = 0;
    for (int a = 0; a < m; ++a) r += s[a] * u[a] * v[a];
    return r;
}

Form jet_values(const JetForm& a) { return values(a); }

std::vector<double> span_vals(const std::vector<Jet>& v) {
    std::vector<double> r;
    for (const auto& x : v) r.push_back(x.value());
    return r;
}

struct SectionCase {
    int k;
    const char* a;
    std::vector<double> x;
};

const std::vector<SectionCase>& section_cases() {
    static const std::vector<SectionCase> c = {
        {0, "matter_k0", {1.0, 0.7, 1.1, 0.4}},
        {-1, "ds_km1", {0.8, 0.5, 0.9, 2.0}},
        {1, "einstein", {0.3, 0.6, 1.3, -0.7}},
    };
    return c;
}

Eigen::VectorXd on_section(const SectionCase& c) {
    return flrw_section(c.k, preset(c.a)).embed(c.x);
}

}  // namespace

TEST_CASE("exterior algebra: i/j anticommutators, double star, springboard") {
    std::mt19937_64 rng(42);
    const auto sig = eta_sig();
    for (int trial = 0; trial < 200; ++trial) {
        const Form b = random_form(rng);
        const auto u = random_vec(rng), v = random_vec(rng);
        CHECK(max_abs(j_vec(u, j_vec(v, b)) + j_vec(v, j_vec(u, b))) < 1e-12);
        CHECK(max_abs(i_vec(u, i_vec(v, b)) + i_vec(v, i_vec(u, b))) < 1e-12);
        CHECK(max_abs(i_vec(u, j_vec(v, b)) + j_vec(v, i_vec(u, b)) - eta_uv(u, v) * b) < 1e-12);

        for (int deg = 0; deg <= m; ++deg) {
            const Form bd = degree_part(b, deg);
            // sgn(eta) = (-1)^n, **b = sgn (-1)^{(n+1) b} b
            const double s = ((n + (n + 1) * deg) & 1) ? -1.0 : 1.0;
            CHECK(max_abs(star_diag<double>(sig, star_diag<double>(sig, bd)) - s * bd) < 1e-12);
            CHECK(max_abs(star_diag_inv<double>(sig, star_diag<double>(sig, bd)) - bd) < 1e-12);
            // i^lambda b = (-1)^{b+1} *^{-1} j^lambda * b
            const auto lam = random_vec(rng);
            const Form lhs = interior<double>(lower(lam), bd);  // sharp of lambda
            const Form rhs = star_diag_inv<double>(sig, ext<double>(lam, star_diag<double>(sig, bd)));
            CHECK(max_abs(lhs - ((deg + 1) & 1 ? -1.0 : 1.0) * rhs) < 1e-12);
        }
        // graded anticommutativity
        const int da = trial % 4, db = (trial / 4) % 4;
        const Form x = random_form(rng, da), y = random_form(rng, db);
        CHECK(max_abs(wedge(x, y) - ((da * db) & 1 ? -1.0 : 1.0) * wedge(y, x)) < 1e-12);
    }
}

TEST_CASE("hodge star: unit form and pairing") {
    const auto sig = eta_sig();
    const Mask full = (Mask(1) << m) - 1;
    const Form s1 = star_diag<double>(sig, blade(m, 0));
    CHECK(s1[full] == 1.0);
    CHECK(max_abs(s1) == 1.0);
    // a ^ *a = eta~(a, a) vol
    const Form e0 = blade(m, 1), e1 = blade(m, 2);
    CHECK(wedge(e0, star_diag<double>(sig, e0))[full] == doctest::Approx(1.0));
    CHECK(wedge(e1, star_diag<double>(sig, e1))[full] == doctest::Approx(-1.0));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const int deg = t % (m + 1);
        const Form a = random_form(rng, deg), b = random_form(rng, deg);
        CHECK(wedge(a, star_diag<double>(sig, b))[full] == doctest::Approx(pairing_diag(sig, a, b)).epsilon(1e-12));
    }
    // general-metric star agrees with the diagonal one for eta
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a) g(a, a) = sig[a];
    const Form r = random_form(rng);
    CHECK(max_abs(star_metric(g, 1.0, r) - star_diag<double>(sig, r)) < 1e-12);
    CHECK(max_abs(star_metric_inv(g, 1.0, star_metric(g, 1.0, r)) - r) < 1e-12);
}

TEST_CASE("ambient d, delta, Lie derivative") {
    const Ambient ops(n);
    const std::vector<double> y0 = {0.3, -0.2, 0.5, 0.1, 0.7, 0.9};
    const auto Y = numeric::seed_jets(y0, 4);

    JetForm a(m);
    a[Mask(1) << 1] = Y[0];  // y^0 dy^1
    const Form da = values(ops.d(a));
    CHECK(da[0b11] == doctest::Approx(1.0));
    CHECK(max_abs(da) == doctest::Approx(1.0));

    for (std::uint64_t s = 1; s <= 5; ++s)
        for (int deg = 0; deg <= 3; ++deg) {
            const JetForm f = random_polynomial_field(n, deg, s)(Y);
            CHECK(max_abs(values(ops.d(ops.d(f)))) < 1e-9);
            // delta delta = 0 too
            CHECK(max_abs(values(ops.delta(ops.delta(f)))) < 1e-9);
        }

    // dc = y_alpha dy^alpha, delta dc = -(n+2)
    JetForm dc(m);
    for (int al = 0; al < m; ++al) dc[Mask(1) << al] = Jet(embedding::eta_diag(n, al)) * Y[al];
    const Form ddc = values(ops.delta(dc));
    CHECK(ddc[0] == doctest::Approx(-(n + 2.0)).epsilon(1e-12));
    CHECK(max_abs(ddc) == doctest::Approx(n + 2.0));

    // L_D dy^alpha = dy^alpha; L_D (h dy^A) = (r + |A|) h dy^A for h of degree r
    for (int al = 0; al < m; ++al) {
        JetForm e(m);
        e[Mask(1) << al] = Jet(1.0);
        CHECK(max_abs(values(ops.lie(Y, e)) - values(e)) < 1e-12);
    }
    JetForm h(m);
    h[0b10100] = Y[0] * Y[1] * Y[5];  // degree 3 coefficient on a 2-blade
    CHECK(max_abs(values(ops.lie(Y, h)) - 5.0 * values(h)) < 1e-12);
}

TEST_CASE("vector field identities on the section") {
    for (const auto& c : section_cases()) {
        const auto sec = flrw_section(c.k, preset(c.a));
        const FieldsAt A(sec.f(), on_section(c), 4);
        const auto sig = eta_sig();
        double Df = 0, Fc = 0, eDF = 0, Dc = 0, Ff = 0, DF2 = 0, eEF = 0;
        for (int a = 0; a < m; ++a) {
            Df += A.D[a].value() * A.df[a].value();
            Fc += A.F[a].value() * A.dc[a].value();
            eDF += sig[a] * A.D[a].value() * A.F[a].value();
            Dc += A.D[a].value() * A.dc[a].value();
            Ff += A.F[a].value() * A.df[a].value();
            DF2 += A.D[a].value() * A.dF2[a].value();
            eEF += sig[a] * A.Ef[a].value() * A.F[a].value();
        }
        const double f = A.f.value();
        CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(A.c.value() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(Df == doctest::Approx(f));
        CHECK(Fc == doctest::Approx(f));
        CHECK(eDF == doctest::Approx(f));
        CHECK(Dc == doctest::Approx(2 * A.c.value()).scale(1.0));
        CHECK(Ff == doctest::Approx(A.F2.value()));
        CHECK(std::abs(DF2) < 1e-10);
        CHECK(std::abs(eEF) < 1e-10);
        // [D, F] = -F and [D, E_f] = 0: [u, v]^b = u(v^b) - v(u^b)
        for (int b = 0; b < m; ++b) {
            double DFb = 0, DEb = 0;
            for (int a = 0; a < m; ++a) {
                DFb += A.D[a].value() * A.F[b].derivative(a).value() - A.F[a].value() * (a == b ? 1.0 : 0.0);
                DEb += A.D[a].value() * A.Ef[b].derivative(a).value() - A.Ef[a].value() * (a == b ? 1.0 : 0.0);
            }
            CHECK(DFb == doctest::Approx(-A.F[b].value()).scale(1.0));
            CHECK(std::abs(DEb) < 1e-10);
        }
        // l_D = eta: eta(nabla_u D, v) = eta(u, v)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                CHECK(sig[b] * A.D[b].derivative(a).value() == doctest::Approx(a == b ? sig[a] : 0.0));
    }
}

TEST_CASE("basis e_n, e_{n+1} and operator identities") {
    std::mt19937_64 rng(3);
    const auto sig = eta_sig();
    for (const auto& c : section_cases()) {
        const auto sec = flrw_section(c.k, preset(c.a));
        const FieldsAt A(sec.f(), on_section(c), 4);
        const auto en = span_vals(A.en), en1 = span_vals(A.en1);
        CHECK(eta_uv(en, en) == doctest::Approx(-1.0));
        CHECK(eta_uv(en1, en1) == doctest::Approx(1.0));
        CHECK(std::abs(eta_uv(en, en1)) < 1e-12);
        const auto F = span_vals(A.F), D = span_vals(A.D), df = span_vals(A.df), dc = span_vals(A.dc);
        for (int t = 0; t < 20; ++t) {
            const Form b = random_form(rng);
            CHECK(max_abs(i_vec(en, i_vec(en1, b)) - i_vec(F, i_vec(D, b))) < 1e-10);
            // e^n = -flat(e_n), e^{n+1} = flat(e_{n+1})
            CHECK(max_abs(-1.0 * j_vec(en, j_vec(en1, b)) + ext<double>(df, ext<double>(dc, b))) < 1e-10);
        }
    }
}

TEST_CASE("projectors T, L, T_c on the section") {
    std::mt19937_64 rng(11);
    const auto sig = eta_sig();
    for (const auto& c : section_cases()) {
        const auto sec = flrw_section(c.k, preset(c.a));
        const auto cj = sec.jet(c.x);
        const FieldsAt A(sec.f(), cj.y, 4);
        auto cst = [](const Form& f) {
            JetForm r(f.dim);
            for (Mask M = 0; M < f.size(); ++M) r[M] = Jet(f[M]);
            return r;
        };
        for (int t = 0; t < 20; ++t) {
            const JetForm a = cst(random_form(rng));
            const Form Ta = values(A.T(a)), Tca = values(A.Tc(a));
            CHECK(max_abs(values(A.T(A.T(a))) - Ta) < 1e-10);
            CHECK(max_abs(values(A.Tc(A.Tc(a))) - Tca) < 1e-10);
            CHECK(max_abs(values(A.T(A.Tc(a)))) < 1e-10);
            CHECK(max_abs(values(A.Tc(A.T(a)))) < 1e-10);
            CHECK(max_abs(Ta + values(A.L(a)) - values(a)) < 1e-14);
            CHECK(max_abs(values(A.iD(A.T(a)))) < 1e-10);
            CHECK(max_abs(values(A.iF(A.T(a)))) < 1e-10);
            CHECK(max_abs(pullback(Ta, cj.J) - pullback(values(a), cj.J)) < 1e-10);
            // T_c = *^{-1} T *
            CHECK(max_abs(values(A.ops().star_inv(A.T(A.ops().star(a)))) - Tca) < 1e-10);
        }
        JetForm dfj(m);
        for (int a = 0; a < m; ++a) dfj[Mask(1) << a] = A.df[a];
        CHECK(max_abs(values(A.T(dfj))) < 1e-12);
        CHECK(max_abs(values(A.L(dfj)) - values(dfj)) < 1e-12);
    }
    // dy^1 where F and D have no e_1 component: ds_half at xi^1 = 0
    const auto ds = embedding::chart_preset("ds_half");
    const std::vector<double> xi = {0.3, 0.0, 0.2, -0.1};
    const FieldsAt A(ds.f(), ds.embed(xi), 4);
    JetForm dy1(m);
    dy1[Mask(1) << 1] = Jet(1.0);
    CHECK(max_abs(values(A.T(dy1)) - values(dy1)) < 1e-12);
}

TEST_CASE("schouten operator: Hessian route and star-conjugation route agree") {
    const std::vector<std::pair<int, const char*>> fs = {{0, "matter_k0"}, {-1, "ds_km1"}, {1, "ds_kp1"}, {0, "radiation_k0"}};
    const std::vector<double> x = {1.2, 0.4, 0.8, 0.3};
    for (auto [k, name] : fs) {
        const auto sec = flrw_section(k, preset(name));
        const FieldsAt A(sec.f(), sec.embed(x), 4);
        for (int deg = 0; deg <= 4; ++deg)
            for (std::uint64_t s = 1; s <= 3; ++s) {
                const JetForm a = A.eval(random_polynomial_field(n, deg, 100 * s + deg));
                const Form s1 = values(A.schouten(a)), s2 = values(A.schouten_hessian(a));
                CHECK(max_abs(s1 - s2) < 1e-9 * std::max(1.0, max_abs(s1)));
            }
    }
    // linear f: Hessian vanishes, S = L_F
    const auto ds = embedding::chart_preset("ds_half");
    const FieldsAt L(ds.f(), ds.embed(std::vector<double>{0.3, 0.1, 0.2, -0.1}), 4);
    const JetForm a = L.eval(random_polynomial_field(n, 2, 5));
    CHECK(max_abs(values(L.schouten(a)) - values(L.LF(a))) < 1e-10);
    CHECK(max_abs(values(L.schouten_hessian(a)) - values(L.LF(a))) < 1e-12);

    // phi = c: S^{dc} b = (L_D - 2b) b
    const auto cfun = DefiningFunction::make(DefiningFunction::Tag::composed, n, "c", [](auto y) {
        using S = typename decltype(y)::value_type;
        S r(0.0);
        for (int al = 0; al < m; ++al) r = r + S(0.5 * embedding::eta_diag(n, al)) * y[al] * y[al];
        return r;
    });
    Eigen::VectorXd y0(m);
    y0 << 0.3, -0.2, 0.5, 0.1, 0.7, 0.9;
    const FieldsAt C(cfun, y0, 4);
    for (int deg = 0; deg <= m; ++deg) {
        const JetForm b = C.eval(random_polynomial_field(n, deg, 77 + deg));
        const Form expect = values(C.LD(b)) - 2.0 * deg * values(b);
        CHECK(max_abs(values(C.schouten(b)) - expect) < 1e-10);
        CHECK(max_abs(values(C.schouten_hessian(b)) - expect) < 1e-10);
    }
}

TEST_CASE("orientation: omega_f magnitude is sqrt|g|") {
    for (const auto& c : section_cases()) {
        const auto sec = flrw_section(c.k, preset(c.a));
        const auto o = restriction::orientation(sec, c.x);
        CHECK(o.magnitude == doctest::Approx(o.sqrt_det).epsilon(1e-10));
    }
}

TEST_CASE("restriction residuals") {
    for (const auto& c : section_cases()) {
        const auto sec = flrw_section(c.k, preset(c.a));
        for (int deg = 0; deg <= 3; ++deg)
            for (std::uint64_t s = 1; s <= 2; ++s) {
                const auto phi = random_polynomial_field(n, deg, 1000 * s + deg);
                for (Which w : {Which::star, Which::d, Which::delta, Which::box}) {
                    const auto r = restriction::restriction_residual(w, sec, phi, c.x);
                    INFO(c.a, " deg ", deg, " ", restriction::which_name(w));
                    CHECK(r.value < 1e-6);
                }
            }
    }
}

TEST_CASE("restriction: correction terms are not negligible") {
    const auto& c = section_cases()[0];
    const auto sec = flrw_section(c.k, preset(c.a));
    const auto phi = random_polynomial_field(n, 1, 9);
    const auto g = [&sec](std::span<const double> p) { return restriction::chart_metric(sec, p); };
    const double eps = restriction::orientation(sec, c.x).eps;
    const auto af = restriction::pulled_back(sec, phi);
    const auto rd = restriction::restriction_residual(Which::delta, sec, phi, c.x);
    const auto rb = restriction::restriction_residual(Which::box, sec, phi, c.x);
    CHECK(rd.value < 1e-6);
    CHECK(rb.value < 1e-6);
    CHECK(max_abs(rd.lhs - intrinsic::delta(af, g, eps, c.x)) > 1e-2);
    CHECK(max_abs(rb.lhs - intrinsic::box(af, g, eps, c.x)) > 1e-2);
    // wrong orientation breaks the star law
    const auto rs = restriction::restriction_residual(Which::star, sec, random_polynomial_field(n, 2, 9), c.x);
    CHECK(max_abs(rs.lhs + rs.rhs) > 1e-3);
}

TEST_CASE("restriction: conformal scalar and strongly transverse fields on AdSM sections") {
    // f = y^{n+1}: F = e_{n+1}; phi homogeneous of degree -1 with F(phi) = 0
    const auto ds = embedding::chart_preset("ds_half");
    const auto phi = scalar_field([](std::span<const Jet> y) { return Jet(1.0) / (y[4] + Jet(0.3) * y[0]); }, n);
    const std::vector<double> xi = {0.3, 0.1, 0.2, -0.1};
    const auto cj = ds.jet(xi);
    const FieldsAt A(ds.f(), cj.y, 4);
    const JetForm p = A.eval(phi);
    CHECK(max_abs(values(A.LF(p))) < 1e-14);
    // (box_f - R/6) phi_f = m^* box_eta phi with R = -n(n-1) = -12
    const auto g = [&ds](std::span<const double> q) { return restriction::chart_metric(ds, q); };
    const auto af = restriction::pulled_back(ds, phi);
    const double eps = restriction::orientation(ds, xi).eps;
    const double lhs = values(A.ops().box(p))[0];
    const double rhs = intrinsic::box(af, g, eps, xi)[0] + 2.0 * p[0].value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    CHECK(restriction::restriction_residual(Which::box, ds, phi, xi).value < 1e-6);

    // degree-0 homogeneous, F-invariant: delta and box pass straight through
    const auto stfn = [](std::span<const Jet> y) { return (y[0] + Jet(0.4) * y[3]) / (y[4] + Jet(0.2) * y[1]); };
    const auto st = scalar_field(stfn, n);
    const JetForm s = A.eval(st);
    CHECK(max_abs(values(A.LD(s))) < 1e-14);
    const auto sf = restriction::pulled_back(ds, st);
    CHECK(max_abs(pullback(values(A.ops().box(s)), cj.J) - intrinsic::box(sf, g, eps, xi)) < 1e-6);
    // d(st) is a strongly transverse 1-form of degree 0: m^* delta_eta = delta_f
    const FormField dst = [stfn](std::span<const Jet> y) { return Ambient(n).d(scalar_field(stfn, n)(y)); };
    const auto dsf = [&ds, stfn](std::span<const double> q) {
        const auto cq = ds.jet(q);
        const auto yq = numeric::seed_jets(std::vector<double>(cq.y.data(), cq.y.data() + m), 1);
        return pullback(values(Ambient(n).d(scalar_field(stfn, n)(yq))), cq.J);
    };
    CHECK(max_abs(pullback(values(A.ops().delta(A.eval(dst))), cj.J) - intrinsic::delta(dsf, g, eps, xi)) < 1e-6);
}

TEST_CASE("hessian restriction") {
    const auto sec = flrw_section(0, preset("matter_k0"));
    const std::vector<double> x = {1.0, 0.7, 1.1, 0.4};
    const auto& f = sec.f();
    restriction::ScalarField phi_f = [&f](std::span<const Jet> y) { return f(y); };
    CHECK(restriction::hessian_restriction_residual(sec, phi_f, x).value < 1e-7);
    restriction::ScalarField phi_c = [](std::span<const Jet> y) {
        Jet r(0.0);
        for (int a = 0; a < m; ++a) r += Jet(0.5 * embedding::eta_diag(n, a)) * y[a] * y[a];
        return r;
    };
    CHECK(restriction::hessian_restriction_residual(sec, phi_c, x).value < 1e-7);
    restriction::ScalarField phi_p = [](std::span<const Jet> y) { return y[0] * (y[4] + y[5]); };
    CHECK(restriction::hessian_restriction_residual(sec, phi_p, x).value < 1e-6);
    restriction::ScalarField phi_r = [](std::span<const Jet> y) { return y[1] * y[2] - Jet(0.3) * y[0] * y[0] * y[5]; };
    for (const auto& c : section_cases())
        CHECK(restriction::hessian_restriction_residual(flrw_section(c.k, preset(c.a)), phi_r, c.x).value < 1e-6);
}

TEST_CASE("restriction: oversized step is reported as a step failure") {
    const auto& c = section_cases()[0];
    const auto sec = flrw_section(c.k, preset(c.a));
    intrinsic::FdOptions opt;
    opt.step = 0.3;
    CHECK_THROWS_AS(restriction::restriction_residual(Which::box, sec, random_polynomial_field(n, 1, 2), c.x, opt),
                    StepFailure);
}
