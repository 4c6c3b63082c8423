#pragma once
// Spacetimes as sections X_f of the null cone in R^{n+2}: defining functions,
// chart maps, induced metrics and the conformal SO(2,n) action.
//
// Ambient index order is (0, 1..n-1, n, n+1) with eta = diag(+, -, ..., -, +).
// H is fixed to 1.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/numeric/hyperdual.hpp"
#include "nullcone/numeric/jet.hpp"
#include "nullcone/numeric/math.hpp"
#include "nullcone/scalefactor.hpp"

namespace nullcone::embedding {

using numeric::HyperDual;
using numeric::Jet;
using scalefactor::ScaleExpr;

/// eta_{alpha alpha} for ambient dimension n+2.
inline double eta_diag(int n, int alpha) { return (alpha == 0 || alpha == n + 1) ? 1.0 : -1.0; }
Eigen::MatrixXd eta(int n);

template <class T>
T eta_dot(std::span<const T> a, std::span<const T> b) {
    const int n = static_cast<int>(a.size()) - 2;
    T s(0.0);
    for (int i = 0; i < n + 2; ++i) s = s + T(eta_diag(n, i)) * a[i] * b[i];
    return s;
}
double eta_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// c(y) = y.y / 2
double cone_c(const Eigen::VectorXd& y);

/// Intrinsic FLRW coordinates (k, t, chi, angles); n = angles.size() + 2.
struct ChartPoint {
    int k = 0;
    double t = 0.0;
    double chi = 0.0;
    std::vector<double> angles;

    int n() const { return static_cast<int>(angles.size()) + 2; }
    std::vector<double> coords() const;  // (t, chi, angles...)
    Eigen::VectorXd omega() const;
};

/// Validates k and reduces chi mod 2pi for k = +1.
ChartPoint make_chart_point(int k, double t, double chi, std::vector<double> angles);

/// Nested spherical unit vector of length angles.size() + 1:
/// (cos th1, sin th1 cos th2, ..., sin th1 ... sin th_m).
template <class T>
std::vector<T> sphere_omega(std::span<const T> angles) {
    const std::size_t m = angles.size();
    std::vector<T> w(m + 1);
    T prod(1.0);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = prod * numeric::cos(angles[i]);
        prod = prod * numeric::sin(angles[i]);
    }
    w[m] = prod;
    return w;
}

/// Radial function r(chi) = sin chi, chi, sinh chi for k = +1, 0, -1.
template <class T>
T radial(int k, const T& chi) {
    if (k == 1) return numeric::sin(chi);
    if (k == -1) return numeric::sinh(chi);
    return chi;
}

/// Ambient image of an FLRW chart point (t, chi, angles) with scale factor a.
template <class T>
std::vector<T> flrw_embed(int k, const ScaleExpr& a, std::span<const T> x) {
    const int n = static_cast<int>(x.size());
    const T& t = x[0];
    const T& chi = x[1];
    const T A = a.positive(t);
    auto w = sphere_omega<T>(x.subspan(2));
    std::vector<T> y(n + 2);
    const T r = radial(k, chi);
    for (int i = 1; i < n; ++i) y[i] = A * r * w[i - 1];
    if (k == 1) {
        y[0] = A * numeric::cos(t);
        y[n] = A * numeric::cos(chi);
        y[n + 1] = A * numeric::sin(t);
    } else if (k == -1) {
        y[0] = A * numeric::cosh(chi);
        y[n] = A * numeric::cosh(t);
        y[n + 1] = A * numeric::sinh(t);
    } else {
        y[0] = A * t;
        y[n] = T(0.5) * A * (T(1.0) + t * t - chi * chi);
        y[n + 1] = T(0.5) * A * (T(1.0) - t * t + chi * chi);
    }
    return y;
}

class DefiningFunction {
public:
    enum class Tag { flrw, adsm, linear, composed };

    template <class S>
    using Eval = std::function<S(std::span<const S>)>;

    DefiningFunction() = default;

    /// Wraps a generic callable g(std::span<const S>) -> S for S in {double, HyperDual, Jet}.
    template <class G>
    static DefiningFunction make(Tag tag, int n, std::string description, G g) {
        DefiningFunction f;
        f.tag_ = tag;
        f.n_ = n;
        f.desc_ = std::move(description);
        f.d_ = [g](std::span<const double> y) { return g(y); };
        f.h_ = [g](std::span<const HyperDual> y) { return g(y); };
        f.j_ = [g](std::span<const Jet> y) { return g(y); };
        return f;
    }

    double operator()(std::span<const double> y) const { return d_(y); }
    double operator()(const Eigen::VectorXd& y) const {
        return d_(std::span<const double>(y.data(), y.size()));
    }
    HyperDual operator()(std::span<const HyperDual> y) const { return h_(y); }
    Jet operator()(std::span<const Jet> y) const { return j_(y); }

    Tag tag() const { return tag_; }
    int n() const { return n_; }
    const std::string& description() const { return desc_; }

private:
    Tag tag_ = Tag::composed;
    int n_ = 4;
    std::string desc_;
    Eval<double> d_;
    Eval<HyperDual> h_;
    Eval<Jet> j_;
};

/// f_k of the FLRW family; branch violations raise BranchError.
DefiningFunction flrw(int k, const ScaleExpr& a, int n = 4);
/// kappa > 0: sqrt(kappa) y^{n+1} (dS); kappa < 0: sqrt(-kappa) y^n (AdS); 0: y^n + y^{n+1}.
DefiningFunction adsm(double kappa, int n = 4);
/// f = A_alpha y^alpha.
DefiningFunction linear(const Eigen::VectorXd& A);

struct FValue {
    double f;
    Eigen::VectorXd grad;  // d_alpha f
    Eigen::MatrixXd hess;  // d_alpha d_beta f
    Eigen::VectorXd F;     // eta^{alpha beta} d_beta f
    double F2;             // eta(F, F)
    double box;            // eta^{alpha beta} d_alpha d_beta f
};

FValue defining_function_value(const DefiningFunction& f, const Eigen::VectorXd& y);

/// Position, Jacobian and second derivatives of a chart map at one point.
struct ChartJet {
    Eigen::VectorXd y;
    Eigen::MatrixXd J;                 // (n+2) x n
    std::vector<Eigen::MatrixXd> d2;   // per ambient component, n x n
};

/// A chart of a section X_f, with an optional printed closed-form metric.
class Section {
public:
    template <class S>
    using Map = std::function<std::vector<S>(std::span<const S>)>;

    Section() = default;

    template <class G>
    static Section make(std::string name, int n, DefiningFunction f, G map,
                        std::function<Eigen::MatrixXd(std::span<const double>)> closed = {}) {
        Section s;
        s.name_ = std::move(name);
        s.n_ = n;
        s.f_ = std::move(f);
        s.map_d_ = [map](std::span<const double> x) { return map(x); };
        s.map_h_ = [map](std::span<const HyperDual> x) { return map(x); };
        s.closed_ = std::move(closed);
        return s;
    }

    const std::string& name() const { return name_; }
    int n() const { return n_; }
    const DefiningFunction& f() const { return f_; }

    Eigen::VectorXd embed(std::span<const double> x) const;
    ChartJet jet(std::span<const double> x) const;
    /// J^T eta J; ChartDegenerate when J loses rank.
    Eigen::MatrixXd metric(std::span<const double> x) const;
    bool has_closed_form() const { return static_cast<bool>(closed_); }
    Eigen::MatrixXd closed_form_metric(std::span<const double> x) const;

private:
    std::string name_;
    int n_ = 4;
    DefiningFunction f_;
    Map<double> map_d_;
    Map<HyperDual> map_h_;
    std::function<Eigen::MatrixXd(std::span<const double>)> closed_;
};

/// FLRW section with chart (t, chi, angles) and the conformal-time closed form.
Section flrw_section(int k, const ScaleExpr& a, int n = 4);

/// a^2 diag(1, -(dr/dchi)^2/(1 - k r^2), -r^2 g_sphere).
Eigen::MatrixXd flrw_closed_metric(int k, const ScaleExpr& a, std::span<const double> x);

Eigen::VectorXd embed_point(int k, const ScaleExpr& a, const ChartPoint& p);
Eigen::MatrixXd induced_metric(int k, const ScaleExpr& a, const ChartPoint& p);

/// Named chart: mink_global, ds_half, ads, ds_flrw_km1, ds_flrw_k0, ds_flrw_kp1,
/// mink_flrw_km1, ads_flrw_km1.
Section chart_preset(const std::string& name, int n = 4);
const std::vector<std::string>& chart_preset_names();

/// y f1(y) / f2(y), landing on X_{f2}.
Eigen::VectorXd rescale_between_sections(const Eigen::VectorXd& y, const DefiningFunction& f1,
                                         const DefiningFunction& f2);

struct ConformalImage {
    Eigen::VectorXd y;
    double factor;  // 1 / f(g y)
};

/// g_f(y) = g y / f(g y) for g in SO(2,n).
ConformalImage conformal_action(const Eigen::MatrixXd& g, const DefiningFunction& f,
                                const Eigen::VectorXd& y);

/// Rotation (same-sign plane) or boost (mixed-sign plane) by parameter s in plane (alpha, beta).
Eigen::MatrixXd plane_transform(int n, int alpha, int beta, double s);

/// Conformal factor Omega(xi) relative to Minkowski for curvature parameter kappa
/// (kappa = 0 gives a(xi^0); otherwise the arctan / arctanh form).
double mink_base_conformal_factor(double kappa, const ScaleExpr& a, std::span<const double> xi);
/// Exponential k = -1 form: a(ln(xi.xi)/2) / (4 sqrt(xi.xi)).
double mink_base_conformal_factor_exponential(const ScaleExpr& a, std::span<const double> xi);

/// FLRW chart coordinates (t, chi, angles) of a Minkowski point for kappa = +1 or -1:
/// t +- chi = 2 arctan((xi^0 +- |xi|)/2) (arctanh for kappa = -1).
template <class T>
std::vector<T> mink_to_flrw_chart(int kappa, std::span<const T> xi) {
    const int n = static_cast<int>(xi.size());
    T rho2(0.0);
    for (int i = 1; i < n; ++i) rho2 = rho2 + xi[i] * xi[i];
    const T rho = numeric::sqrt(rho2);
    const T p = (xi[0] + rho) * T(0.5), q = (xi[0] - rho) * T(0.5);
    T A, B;
    if (kappa == 1) {
        A = numeric::atan(p);
        B = numeric::atan(q);
    } else {
        A = numeric::atanh(p);
        B = numeric::atanh(q);
    }
    std::vector<T> x(n);
    x[0] = A + B;
    x[1] = A - B;
    // inverse nested spherical angles of xi_vec / rho
    for (int i = 2; i < n; ++i) {
        const int c = i - 1;  // spatial component index
        T tail(0.0);
        for (int j = c + 1; j < n; ++j) tail = tail + xi[j] * xi[j];
        if (i < n - 1) x[i] = numeric::atan2(numeric::sqrt(tail), xi[c]);
        else x[i] = numeric::atan2(xi[n - 1], xi[n - 2]);
    }
    return x;
}

}  // namespace nullcone::embedding
