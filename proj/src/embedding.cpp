#include "nullcone/embedding.hpp"

#include <cmath>
#include <sstream>

#include "nullcone/errors.hpp"
#include "nullcone/numeric/linalg.hpp"

namespace nullcone::embedding {

namespace nm = nullcone::numeric;

Eigen::MatrixXd eta(int n) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (int i = 0; i < n + 2; ++i) e(i, i) = eta_diag(n, i);
    return e;
}

double eta_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.size()) - 2;
    double s = 0.0;
    for (int i = 0; i < n + 2; ++i) s += eta_diag(n, i) * a(i) * b(i);
    return s;
}

double cone_c(const Eigen::VectorXd& y) { return 0.5 * eta_dot(y, y); }

std::vector<double> ChartPoint::coords() const {
    std::vector<double> x{t, chi};
    x.insert(x.end(), angles.begin(), angles.end());
    return x;
}

Eigen::VectorXd ChartPoint::omega() const {
    auto w = sphere_omega<double>(angles);
    return Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

ChartPoint make_chart_point(int k, double t, double chi, std::vector<double> angles) {
    if (k < -1 || k > 1) throw ConfigError("k must be -1, 0 or +1");
    if (k == 1) {
        chi = std::fmod(chi, 2 * M_PI);
        if (chi < 0) chi += 2 * M_PI;
    }
    return ChartPoint{k, t, chi, std::move(angles)};
}

DefiningFunction flrw(int k, const ScaleExpr& a, int n) {
    if (k < -1 || k > 1) throw ConfigError("k must be -1, 0 or +1");
    std::ostringstream d;
    d << "flrw(k=" << k << ", a=" << a.source() << ")";
    return DefiningFunction::make(DefiningFunction::Tag::flrw, n, d.str(), [k, a, n](auto y) {
        using S = typename decltype(y)::value_type;
        using std::abs;
        const S& yn = y[n];
        const S& yn1 = y[n + 1];
        if (k == 0) {
            const S s = yn + yn1;
            if (!(nm::value_of(s) > 0.0))
                throw BranchError("k=0 defining function needs y^n + y^{n+1} > 0");
            return s / a.positive(y[0] / s);
        }
        if (k == -1) {
            if (!(nm::value_of(yn) > std::abs(nm::value_of(yn1))))
                throw BranchError("k=-1 defining function needs y^n > |y^{n+1}|");
            return nm::sqrt(yn * yn - yn1 * yn1) / a.positive(nm::atanh(yn1 / yn));
        }
        const S r2 = y[0] * y[0] + yn1 * yn1;
        if (!(nm::value_of(r2) > 0.0))
            throw BranchError("k=+1 defining function needs (y^0, y^{n+1}) != 0");
        return nm::sqrt(r2) / a.positive(nm::atan2(yn1, y[0]));
    });
}

DefiningFunction adsm(double kappa, int n) {
    std::ostringstream d;
    d << "adsm(kappa=" << kappa << ")";
    const double H = std::sqrt(std::abs(kappa));
    return DefiningFunction::make(DefiningFunction::Tag::adsm, n, d.str(), [kappa, H, n](auto y) {
        using S = typename decltype(y)::value_type;
        if (kappa > 0) return S(H) * y[n + 1];
        if (kappa < 0) return S(H) * y[n];
        return y[n] + y[n + 1];
    });
}

DefiningFunction linear(const Eigen::VectorXd& A) {
    const int n = static_cast<int>(A.size()) - 2;
    std::vector<double> c(A.data(), A.data() + A.size());
    return DefiningFunction::make(DefiningFunction::Tag::linear, n, "linear", [c](auto y) {
        using S = typename decltype(y)::value_type;
        S s(0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0.0) s = s + S(c[i]) * y[i];
        return s;
    });
}

FValue defining_function_value(const DefiningFunction& f, const Eigen::VectorXd& y) {
    const int D = static_cast<int>(y.size());
    const int n = D - 2;
    auto r = nm::hyperdual_eval([&f](std::span<const HyperDual> x) { return f(x); },
                                std::span<const double>(y.data(), D));
    FValue v{r.value, r.gradient, r.hessian, Eigen::VectorXd(D), 0.0, 0.0};
    for (int a = 0; a < D; ++a) {
        v.F(a) = eta_diag(n, a) * v.grad(a);
        v.F2 += eta_diag(n, a) * v.grad(a) * v.grad(a);
        v.box += eta_diag(n, a) * v.hess(a, a);
    }
    return v;
}

Eigen::VectorXd Section::embed(std::span<const double> x) const {
    auto y = map_d_(x);
    return Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

ChartJet Section::jet(std::span<const double> x) const {
    auto xs = nm::seed(x);
    auto y = map_h_(xs);
    const int D = static_cast<int>(y.size());
    const int m = static_cast<int>(x.size());
    ChartJet cj{Eigen::VectorXd(D), Eigen::MatrixXd::Zero(D, m),
                std::vector<Eigen::MatrixXd>(D, Eigen::MatrixXd::Zero(m, m))};
    for (int a = 0; a < D; ++a) {
        cj.y(a) = y[a].value();
        if (y[a].dims() == 0) continue;
        for (int i = 0; i < m; ++i) {
            cj.J(a, i) = y[a].grad(i);
            for (int j = 0; j < m; ++j) cj.d2[a](i, j) = y[a].hess(i, j);
        }
    }
    return cj;
}

Eigen::MatrixXd Section::metric(std::span<const double> x) const {
    const ChartJet cj = jet(x);
    if (nm::rank_with_tolerance(cj.J, 1e-10) < n_) {
        std::ostringstream os;
        os << "chart " << name_ << " degenerate at (";
        for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
        os << ")";
        throw ChartDegenerate(os.str());
    }
    return cj.J.transpose() * eta(n_) * cj.J;
}

Eigen::MatrixXd Section::closed_form_metric(std::span<const double> x) const {
    if (!closed_) throw Error("section " + name_ + " has no closed-form metric");
    return closed_(x);
}

namespace {

// diag(1, -1, -r^2 g_sphere) scaled by w2, i.e. w2 (dt^2 - dchi^2 - r^2 dOmega^2)
Eigen::MatrixXd static_form(double w2, int k, std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    const double r = radial(k, x[1]);
    g(0, 0) = w2;
    g(1, 1) = -w2;
    double s = r * r;
    for (int i = 2; i < n; ++i) {
        g(i, i) = -w2 * s;
        s *= std::sin(x[i]) * std::sin(x[i]);
    }
    return g;
}

}  // namespace

Eigen::MatrixXd flrw_closed_metric(int k, const ScaleExpr& a, std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    const double A = a.positive(x[0]);
    const double chi = x[1];
    double r, dr;
    if (k == 1) r = std::sin(chi), dr = std::cos(chi);
    else if (k == -1) r = std::sinh(chi), dr = std::cosh(chi);
    else r = chi, dr = 1.0;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    g(0, 0) = A * A;
    const double den = 1.0 - k * r * r;
    g(1, 1) = -A * A * (den == 0.0 ? 1.0 : dr * dr / den);
    double s = r * r;
    for (int i = 2; i < n; ++i) {
        g(i, i) = -A * A * s;
        s *= std::sin(x[i]) * std::sin(x[i]);
    }
    return g;
}

Section flrw_section(int k, const ScaleExpr& a, int n) {
    std::ostringstream name;
    name << "flrw(k=" << k << ", a=" << a.source() << ")";
    return Section::make(
        name.str(), n, flrw(k, a, n), [k, a](auto x) { return flrw_embed(k, a, x); },
        [k, a](std::span<const double> x) { return flrw_closed_metric(k, a, x); });
}

Eigen::VectorXd embed_point(int k, const ScaleExpr& a, const ChartPoint& p) {
    auto x = p.coords();
    auto y = flrw_embed<double>(k, a, x);
    return Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

Eigen::MatrixXd induced_metric(int k, const ScaleExpr& a, const ChartPoint& p) {
    return flrw_section(k, a, p.n()).metric(p.coords());
}

namespace {

template <class S>
S mdot(std::span<const S> xi) {
    S s = xi[0] * xi[0];
    for (std::size_t i = 1; i < xi.size(); ++i) s = s - xi[i] * xi[i];
    return s;
}

double mdot_d(std::span<const double> xi) { return mdot<double>(xi); }

Eigen::MatrixXd minkowski(int n) {
    Eigen::MatrixXd g = -Eigen::MatrixXd::Identity(n, n);
    g(0, 0) = 1.0;
    return g;
}

template <class S>
std::vector<S> coord_mink(std::span<const S> xi) {
    const int n = static_cast<int>(xi.size());
    std::vector<S> y(n + 2);
    for (int i = 0; i < n; ++i) y[i] = xi[i];
    const S q = mdot(xi);
    y[n] = S(0.5) * (S(1.0) + q);
    y[n + 1] = S(0.5) * (S(1.0) - q);
    return y;
}

// xi_mu lowered with the Minkowski metric
Eigen::VectorXd lower(std::span<const double> xi) {
    Eigen::VectorXd v(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) v(i) = (i == 0 ? 1.0 : -1.0) * xi[i];
    return v;
}

}  // namespace

Section chart_preset(const std::string& name, int n) {
    if (name == "mink_global")
        return Section::make(name, n, adsm(0.0, n), [](auto x) { return coord_mink(x); },
                             [n](std::span<const double>) { return minkowski(n); });
    if (name == "ds_half")
        return Section::make(
            name, n, adsm(1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S q = mdot(x);
                if (!(nm::value_of(q) > -1.0)) throw DomainError("ds_half needs xi.xi > -1");
                std::vector<S> y(n + 2);
                for (int i = 0; i < n; ++i) y[i] = x[i];
                y[n] = nm::sqrt(q + S(1.0));
                y[n + 1] = S(1.0);
                return y;
            },
            [n](std::span<const double> x) {
                Eigen::VectorXd l = lower(x);
                return Eigen::MatrixXd(minkowski(n) - l * l.transpose() / (mdot_d(x) + 1.0));
            });
    if (name == "ads")
        return Section::make(
            name, n, adsm(-1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S q = mdot(x);
                if (!(nm::value_of(q) < 1.0)) throw DomainError("ads chart needs xi.xi < 1");
                std::vector<S> y(n + 2);
                for (int i = 0; i < n; ++i) y[i] = x[i];
                y[n] = S(1.0);
                y[n + 1] = nm::sqrt(S(1.0) - q);
                return y;
            },
            [n](std::span<const double> x) {
                Eigen::VectorXd l = lower(x);
                return Eigen::MatrixXd(minkowski(n) + l * l.transpose() / (1.0 - mdot_d(x)));
            });

    // FLRW-type presets: chart (t, chi, angles); closed form w(t)^2 {dt^2 - g_k}
    auto flrw_like = [n, &name](int k, DefiningFunction f, auto map, auto weight) {
        return Section::make(name, n, std::move(f), map,
                             [k, weight](std::span<const double> x) {
                                 const double w = weight(x[0]);
                                 return static_form(w * w, k, x);
                             });
    };
    if (name == "ds_flrw_km1")
        return flrw_like(
            -1, adsm(1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S cs = nm::csch(x[0]);
                auto w = sphere_omega<S>(x.subspan(2));
                std::vector<S> y(n + 2);
                y[0] = cs * nm::cosh(x[1]);
                for (int i = 1; i < n; ++i) y[i] = cs * nm::sinh(x[1]) * w[i - 1];
                y[n] = nm::coth(x[0]);
                y[n + 1] = S(1.0);
                return y;
            },
            [](double t) { return 1.0 / std::sinh(t); });
    if (name == "ds_flrw_k0")
        return flrw_like(
            0, adsm(1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S& t = x[0];
                const S& chi = x[1];
                auto w = sphere_omega<S>(x.subspan(2));
                std::vector<S> y(n + 2);
                y[0] = S(0.5) * (-t + S(1.0) / t + chi * chi / t);
                for (int i = 1; i < n; ++i) y[i] = chi * w[i - 1] / t;
                y[n] = S(0.5) * (t + S(1.0) / t - chi * chi / t);
                y[n + 1] = S(1.0);
                return y;
            },
            [](double t) { return 1.0 / t; });
    if (name == "ds_flrw_kp1")
        return flrw_like(
            1, adsm(1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S cs = nm::csc(x[0]);
                auto w = sphere_omega<S>(x.subspan(2));
                std::vector<S> y(n + 2);
                y[0] = nm::cot(x[0]);
                for (int i = 1; i < n; ++i) y[i] = cs * nm::sin(x[1]) * w[i - 1];
                y[n] = cs * nm::cos(x[1]);
                y[n + 1] = S(1.0);
                return y;
            },
            [](double t) { return 1.0 / std::sin(t); });
    if (name == "mink_flrw_km1")
        return flrw_like(
            -1, adsm(0.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S e = nm::exp(-x[0]);
                auto w = sphere_omega<S>(x.subspan(2));
                std::vector<S> xi(n);
                xi[0] = e * nm::cosh(x[1]);
                for (int i = 1; i < n; ++i) xi[i] = e * nm::sinh(x[1]) * w[i - 1];
                return coord_mink<S>(xi);
            },
            [](double t) { return std::exp(-t); });
    if (name == "ads_flrw_km1")
        return flrw_like(
            -1, adsm(-1.0, n),
            [n](auto x) {
                using S = typename decltype(x)::value_type;
                const S se = nm::sech(x[0]);
                auto w = sphere_omega<S>(x.subspan(2));
                std::vector<S> y(n + 2);
                y[0] = se * nm::cosh(x[1]);
                for (int i = 1; i < n; ++i) y[i] = se * nm::sinh(x[1]) * w[i - 1];
                y[n] = S(1.0);
                y[n + 1] = nm::tanh(x[0]);
                return y;
            },
            [](double t) { return 1.0 / std::cosh(t); });
    throw ConfigError("unknown chart preset '" + name + "'");
}

const std::vector<std::string>& chart_preset_names() {
    static const std::vector<std::string> names = {"mink_global", "ds_half",     "ads",
                                                   "ds_flrw_km1", "ds_flrw_k0",  "ds_flrw_kp1",
                                                   "mink_flrw_km1", "ads_flrw_km1"};
    return names;
}

Eigen::VectorXd rescale_between_sections(const Eigen::VectorXd& y, const DefiningFunction& f1,
                                         const DefiningFunction& f2) {
    const double v1 = f1(y);
    if (std::abs(v1 - 1.0) > 1e-10)
        throw DomainError("point is not on the source section: f1(y) = " + std::to_string(v1));
    const double v2 = f2(y);
    if (!(v2 > 1e-14 * y.norm()))
        throw DomainError("ray misses the target section: f2(y) = " + std::to_string(v2));
    return y * (v1 / v2);
}

ConformalImage conformal_action(const Eigen::MatrixXd& g, const DefiningFunction& f,
                                const Eigen::VectorXd& y) {
    const int n = static_cast<int>(y.size()) - 2;
    const Eigen::MatrixXd e = eta(n);
    const double defect = (g.transpose() * e * g - e).cwiseAbs().maxCoeff();
    if (defect > 1e-10) throw DomainError("g does not preserve eta");
    if (g.determinant() < 0.0) throw DomainError("g is not in the identity component");
    const Eigen::VectorXd gy = g * y;
    const double fv = f(gy);
    if (!(fv > 0.0)) throw DomainError("orbit leaves the section domain: f(g y) <= 0");
    return {gy / fv, 1.0 / fv};
}

Eigen::MatrixXd plane_transform(int n, int alpha, int beta, double s) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n + 2, n + 2);
    const bool rotation = eta_diag(n, alpha) == eta_diag(n, beta);
    const double c = rotation ? std::cos(s) : std::cosh(s);
    const double sn = rotation ? std::sin(s) : std::sinh(s);
    g(alpha, alpha) = c;
    g(beta, beta) = c;
    g(alpha, beta) = rotation ? -sn : sn;
    g(beta, alpha) = sn;
    return g;
}

double mink_base_conformal_factor(double kappa, const ScaleExpr& a, std::span<const double> xi) {
    if (kappa == 0.0) return a.positive(xi[0]);
    const double q = mdot_d(xi);
    const double den = 1.0 - 0.25 * kappa * q;
    const double W = den * den + kappa * xi[0] * xi[0];
    if (!(den > 0.0) || !(W > 0.0))
        throw BranchError("conformal factor outside the arctan/arctanh branch");
    const double s = std::sqrt(std::abs(kappa));
    const double z = s * xi[0] / den;
    double t;
    if (kappa > 0) t = std::atan(z) / s;
    else {
        if (std::abs(z) >= 1.0) throw BranchError("arctanh argument outside (-1, 1)");
        t = std::atanh(z) / s;
    }
    return a.positive(t) / std::sqrt(W);
}

double mink_base_conformal_factor_exponential(const ScaleExpr& a, std::span<const double> xi) {
    const double q = mdot_d(xi);
    if (!(q > 0.0)) throw BranchError("exponential form needs xi.xi > 0");
    return a.positive(0.5 * std::log(q)) / (4.0 * std::sqrt(q));
}

}  // namespace nullcone::embedding
