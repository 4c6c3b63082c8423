#include "nullcone/isometries.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "nullcone/errors.hpp"
#include "nullcone/numeric/linalg.hpp"

namespace nullcone::isometries {

namespace {

Eigen::VectorXd eta_diag(int n) {
    Eigen::VectorXd e = -Eigen::VectorXd::Ones(n + 2);
    e[0] = 1.0;
    e[n + 1] = 1.0;
    return e;
}

}  // namespace

ConformalGenerator::ConformalGenerator(int n) : n_(n), p_(Eigen::VectorXd::Zero(parameter_count(n))) {}

ConformalGenerator::ConformalGenerator(int n, Eigen::VectorXd params) : n_(n), p_(std::move(params)) {
    if (p_.size() != parameter_count(n)) throw std::invalid_argument("generator needs (n+2)(n+1)/2 parameters");
}

ConformalGenerator ConformalGenerator::plane(int n, int alpha, int beta) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 2, n + 2);
    J(alpha, beta) = 1.0;
    J(beta, alpha) = -1.0;
    return from_matrix(J);
}

ConformalGenerator ConformalGenerator::from_matrix(const Eigen::MatrixXd& J) {
    const int m = static_cast<int>(J.rows());
    ConformalGenerator g(m - 2);
    int p = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) g.p_[p++] = 0.5 * (J(a, b) - J(b, a));
    return g;
}

Eigen::MatrixXd ConformalGenerator::matrix() const {
    const int m = n_ + 2;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    int p = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            J(a, b) = p_[p];
            J(b, a) = -p_[p++];
        }
    return J;
}

Eigen::MatrixXd ConformalGenerator::linear_action() const {
    return matrix().transpose() * eta_diag(n_).asDiagonal();
}

Eigen::MatrixXd ConformalGenerator::flow(double s) const { return (s * linear_action()).exp(); }

double generator_action(const ConformalGenerator& J, const DefiningFunction& f, const Eigen::VectorXd& y) {
    const auto fv = embedding::defining_function_value(f, y);
    const Eigen::VectorXd ylow = eta_diag(J.n()).cwiseProduct(y);
    return ylow.dot(J.matrix() * fv.grad);
}

std::vector<Eigen::VectorXd> sample_section(int k, const ScaleExpr& a, int n, int count,
                                            const SampleDomain& dom, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(dom.t_min, dom.t_max), chi(dom.chi_min, dom.chi_max),
        polar(0.1, std::numbers::pi - 0.1), azim(0.0, 2 * std::numbers::pi);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 100 * count) throw DomainError("sample domain yields no admissible points");
        const double tv = t(rng);
        if (std::abs(tv) < 0.1) continue;
        std::vector<double> ang(n - 2);
        for (int i = 0; i + 1 < n - 2; ++i) ang[i] = polar(rng);
        if (n > 2) ang.back() = azim(rng);
        double c = chi(rng);
        if (k == 1) c = std::min(c, std::numbers::pi - 0.1);
        try {
            out.push_back(embedding::embed_point(k, a, embedding::make_chart_point(k, tv, c, ang)));
        } catch (const DomainError&) {
            // a(t) not positive here; draw again
        }
    }
    return out;
}

IsometryAlgebra isometry_algebra(const DefiningFunction& f, const std::vector<Eigen::VectorXd>& samples,
                                 double tol) {
    const int n = f.n();
    const int P = ConformalGenerator::parameter_count(n);
    if (static_cast<int>(samples.size()) < P)
        throw std::invalid_argument("isometry rank needs at least (n+2)(n+1)/2 samples");
    const Eigen::VectorXd eta = eta_diag(n);
    Eigen::MatrixXd R(samples.size(), P);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Eigen::VectorXd& y = samples[s];
        const auto fv = embedding::defining_function_value(f, y);
        const Eigen::VectorXd yl = eta.cwiseProduct(y);
        int p = 0;
        for (int a = 0; a < n + 2; ++a)
            for (int b = a + 1; b < n + 2; ++b) R(s, p++) = yl[a] * fv.grad[b] - yl[b] * fv.grad[a];
        const double norm = R.row(s).norm();
        if (norm > 0) R.row(s) /= norm;
    }
    const auto svd = numeric::jacobi_svd(R);
    IsometryAlgebra out;
    const double smax = svd.sigma.size() ? svd.sigma[0] : 0.0;
    out.sigma = smax > 0 ? Eigen::VectorXd(svd.sigma / smax) : svd.sigma;
    const int rank = numeric::rank_with_tolerance(R, tol);
    out.dimension = P - rank;
    for (int j = rank; j < P; ++j) out.basis.emplace_back(n, svd.V.col(j));
    if (rank > 0 && out.sigma[rank - 1] < 10 * tol) out.ill_conditioned = true;
    if (rank < out.sigma.size() && out.sigma[rank] > tol / 10) out.ill_conditioned = true;
    return out;
}

SampleDomain default_domain(const ScaleExpr& a) {
    SampleDomain d;
    if (a.preset())
        if (const auto p = scalefactor::find_preset(*a.preset())) {
            d.t_min = p->t_min;
            d.t_max = p->t_max;
        }
    return d;
}

IsometryAlgebra isometry_algebra_dimension(int k, const ScaleExpr& a, int n, int sample_count, double tol,
                                           unsigned seed, std::optional<SampleDomain> dom) {
    const auto samples = sample_section(k, a, n, sample_count, dom.value_or(default_domain(a)), seed);
    return isometry_algebra(embedding::flrw(k, a, n), samples, tol);
}

std::string special_name(Special s) {
    switch (s) {
        case Special::generic: return "generic";
        case Special::einstein: return "einstein";
        case Special::de_sitter: return "de_sitter";
        case Special::anti_de_sitter: return "anti_de_sitter";
        case Special::minkowski: return "minkowski";
        case Special::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

struct Fit {
    bool ok = false;
    double value = 0.0;
    double spread = 0.0;
};

// Constants c_i computed pointwise; accepted when they agree (modulo `period` if > 0).
Fit agree(const std::vector<double>& c, double period = 0.0) {
    Fit f;
    if (c.empty()) return f;
    auto wrap = [&](double v) {
        if (period <= 0) return v;
        v = std::fmod(v - c[0], period);
        if (v > period / 2) v -= period;
        if (v < -period / 2) v += period;
        return v + c[0];
    };
    double lo = wrap(c[0]), hi = lo;
    for (double v : c) {
        const double w = wrap(v);
        if (!std::isfinite(w)) return f;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    f.spread = hi - lo;
    f.value = 0.5 * (lo + hi);
    if (period > 0) f.value = std::fmod(std::fmod(f.value, period) + period, period);
    f.ok = f.spread < 1e-6 * std::max(1.0, std::abs(f.value));
    return f;
}

}  // namespace

Classification classify_special(int k, const ScaleExpr& a, std::optional<SampleDomain> dom, int n) {
    const SampleDomain d = dom.value_or(default_domain(a));
    Classification c;
    std::optional<int> dim;
    for (unsigned seed : {42u, 7u, 1234u}) {
        const auto alg = isometry_algebra_dimension(k, a, n, 40, 1e-8, seed, d);
        if (dim && *dim != alg.dimension) {
            c.note = "dimension estimate differs across sample draws";
            return c;
        }
        dim = alg.dimension;
    }
    c.dimension = *dim;

    // psi' on a fixed grid of the domain, skipping |t| < 0.1
    std::vector<double> ts, ps;
    for (int i = 0; i < 25; ++i) {
        const double t = d.t_min + (d.t_max - d.t_min) * (i + 0.5) / 25.0;
        if (std::abs(t) < 0.1) continue;
        ts.push_back(t);
        ps.push_back(scalefactor::psi_dot(a, t));
    }
    auto constants = [&](auto fn) {
        std::vector<double> out;
        for (std::size_t i = 0; i < ts.size(); ++i) out.push_back(fn(ts[i], ps[i]));
        return out;
    };
    const int minimal = n * (n - 1) / 2;
    auto accept = [&](Special kind, const char* ode, const Fit& f, bool offset) {
        c.kind = kind;
        c.ode = ode;
        c.ode_residual = f.spread;
        if (offset) c.offset = f.value;
    };

    if (c.dimension == minimal) {
        c.kind = Special::generic;
        return c;
    }
    if (c.dimension == minimal + 1) {
        const Fit f = agree(constants([](double, double p) { return p; }));
        if (k != 0 && f.ok && std::abs(f.value) < 1e-9) {
            accept(Special::einstein, "a' = 0", f, false);
            return c;
        }
        c.note = "dimension " + std::to_string(c.dimension) + " but a' = 0 does not hold";
        return c;
    }
    if (c.dimension == minimal + n) {
        if (k == 0) {
            const Fit flat = agree(constants([](double, double p) { return p; }));
            if (flat.ok && std::abs(flat.value) < 1e-9) {
                accept(Special::minkowski, "a' = 0", flat, false);
                return c;
            }
            const Fit ds = agree(constants([](double t, double p) { return t + 1.0 / p; }));
            if (ds.ok) {
                accept(Special::de_sitter, "(t - t0) a' + a = 0", ds, true);
                return c;
            }
        } else if (k == -1) {
            const Fit mink = agree(constants([](double, double p) { return p; }));
            if (mink.ok && std::abs(std::abs(mink.value) - 1.0) < 1e-9) {
                accept(Special::minkowski, mink.value < 0 ? "a' + a = 0" : "a' - a = 0", mink, false);
                return c;
            }
            // psi' = -tanh(t - t0) (AdS), psi' = -coth(t - t0) (dS)
            const Fit ads = agree(constants([](double t, double p) {
                return std::abs(p) < 1 ? t - std::atanh(-p) : std::nan("");
            }));
            if (ads.ok) {
                accept(Special::anti_de_sitter, "a' + tanh(t - t0) a = 0", ads, true);
                return c;
            }
            const Fit ds = agree(constants([](double t, double p) {
                return std::abs(p) > 1 ? t - std::atanh(-1.0 / p) : std::nan("");
            }));
            if (ds.ok) {
                accept(Special::de_sitter, "a' + coth(t - t0) a = 0", ds, true);
                return c;
            }
        } else {
            // psi' = -cot(t - t0), t0 defined modulo pi
            const Fit ds = agree(constants([](double t, double p) { return t - std::atan2(1.0, -p); }),
                                 std::numbers::pi);
            if (ds.ok) {
                accept(Special::de_sitter, "a' + cot(t - t0) a = 0", ds, true);
                return c;
            }
        }
        c.note = "dimension " + std::to_string(c.dimension) + " but no defining equation fits";
        return c;
    }
    c.note = "unexpected dimension " + std::to_string(c.dimension);
    return c;
}

}  // namespace nullcone::isometries
