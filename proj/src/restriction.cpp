#include "nullcone/restriction.hpp"

#include <cmath>
#include <stdexcept>

namespace nullcone::restriction {

using forms::Form;
using forms::FormField;
using forms::JetForm;
using forms::Mask;
using numeric::Jet;
using embedding::ChartJet;
using embedding::FValue;
using embedding::defining_function_value;

const char* which_name(Which w) {
    switch (w) {
        case Which::star: return "star";
        case Which::d: return "d";
        case Which::delta: return "delta";
        case Which::box: return "box";
    }
    return "?";
}

Which parse_which(const std::string& s) {
    if (s == "star") return Which::star;
    if (s == "d") return Which::d;
    if (s == "delta") return Which::delta;
    if (s == "box") return Which::box;
    throw std::invalid_argument("unknown operator '" + s + "'");
}

Eigen::MatrixXd chart_metric(const Section& s, std::span<const double> x) {
    return s.has_closed_form() ? s.closed_form_metric(x) : s.metric(x);
}

Orientation orientation(const Section& s, std::span<const double> x) {
    const ChartJet cj = s.jet(x);
    const int m = static_cast<int>(cj.y.size());
    const FValue fv = defining_function_value(s.f(), cj.y);
    std::vector<double> en(m), en1(m);
    for (int a = 0; a < m; ++a) {
        en[a] = fv.F[a] - 0.5 * (1.0 + fv.F2) * cj.y[a];
        en1[a] = fv.F[a] + 0.5 * (1.0 - fv.F2) * cj.y[a];
    }
    const Form vol = forms::blade(m, (Mask(1) << m) - 1);
    const Form w = forms::pullback(forms::interior<double>(en1, forms::interior<double>(en, vol)), cj.J);
    const double coef = w[(Mask(1) << s.n()) - 1];
    const Eigen::MatrixXd g = chart_metric(s, x);
    return {coef >= 0 ? 1.0 : -1.0, std::abs(coef), std::sqrt(std::abs(g.determinant()))};
}

namespace {

std::vector<Jet> constants(const Eigen::VectorXd& y) {
    std::vector<Jet> r(y.size());
    for (int i = 0; i < y.size(); ++i) r[i] = Jet(y[i]);
    return r;
}

double normalized(const Form& lhs, const Form& rhs) {
    return forms::max_abs(lhs - rhs) / std::max(1.0, forms::max_abs(lhs));
}

int top_degree(const JetForm& a) {
    int k = -1;
    for (Mask A = 0; A < a.size(); ++A)
        if (!forms::is_zero(a[A])) k = std::max(k, forms::degree(A));
    return k;
}

}  // namespace

intrinsic::ChartField pulled_back(const Section& s, const FormField& phi) {
    return [&s, phi](std::span<const double> x) {
        const ChartJet cj = s.jet(x);
        const auto y = constants(cj.y);
        return forms::pullback(forms::values(phi(y)), cj.J);
    };
}

Residual restriction_residual(Which which, const Section& s, const FormField& phi,
                              std::span<const double> x, const intrinsic::FdOptions& opt) {
    const ChartJet cj = s.jet(x);
    const int n = s.n();
    const forms::FieldsAt A(s.f(), cj.y, 4);
    const auto& ops = A.ops();
    const JetForm alpha = A.eval(phi);
    const auto af = pulled_back(s, phi);
    const intrinsic::MetricFn g = [&s](std::span<const double> p) { return chart_metric(s, p); };
    const double eps = orientation(s, x).eps;
    auto pb = [&](const JetForm& a) { return forms::pullback(forms::values(a), cj.J); };

    Residual r;
    switch (which) {
        case Which::star:
            r.lhs = pb(ops.star(alpha));
            r.rhs = forms::star_metric(g(x), eps, pb(A.iF(A.iD(alpha))));
            break;
        case Which::d:
            r.lhs = pb(ops.d(alpha));
            r.rhs = intrinsic::d(af, x, opt);
            break;
        case Which::delta: {
            r.lhs = pb(ops.delta(alpha));
            JetForm corr(alpha.dim);
            for (int a = 0; a <= top_degree(alpha); ++a) {
                const JetForm al = forms::degree_part(alpha, a);
                const double s1 = -2.0 * a + n + 1;
                const JetForm iD = A.iD(al);
                corr += A.LD_shift(A.iF(al), s1);
                corr += A.schouten(iD) + A.boxf * iD - A.F2 * A.LD_shift(iD, s1);
            }
            r.rhs = intrinsic::delta(af, g, eps, x, opt) - pb(corr);
            break;
        }
        case Which::box: {
            r.lhs = pb(ops.box(alpha));
            JetForm corr(alpha.dim);
            auto P = [&](const JetForm& b) { return A.schouten(b) + A.boxf * b; };
            for (int a = 0; a <= top_degree(alpha); ++a) {
                const JetForm al = forms::degree_part(alpha, a);
                const double sm = -2.0 * a + n - 1, sp = -2.0 * a + n + 1;
                const JetForm LF = A.LF(al), LD = A.LD(al), iD = A.iD(al);
                corr += A.LD_shift(LF, sm) + Jet(2.0) * ops.d(A.iF(al));
                corr += P(LD) - A.F2 * A.LD_shift(LD, sm) - Jet(2.0) * A.F2 * ops.d(iD);
                corr += ops.d(P(iD)) - P(ops.d(iD)) - ops.j(A.dF2, A.LD_shift(iD, sp));
            }
            r.rhs = intrinsic::box(af, g, eps, x, opt) + pb(corr);
            break;
        }
    }
    r.value = normalized(r.lhs, r.rhs);
    return r;
}

Residual hessian_restriction_residual(const Section& s, const ScalarField& phi,
                                      std::span<const double> x, const intrinsic::FdOptions& opt) {
    const ChartJet cj = s.jet(x);
    const int n = s.n(), m = n + 2;
    const forms::FieldsAt A(s.f(), cj.y, 2);
    const Jet p = A.eval_scalar(phi);
    Eigen::MatrixXd Hphi(m, m), Hf(m, m);
    double Dphi = 0.0, Ephi = 0.0;
    for (int a = 0; a < m; ++a) {
        const Jet pa = p.derivative(a);
        Dphi += A.D[a].value() * pa.value();
        Ephi += A.Ef[a].value() * pa.value();
        for (int b = 0; b < m; ++b) {
            Hphi(a, b) = pa.derivative(b).value();
            Hf(a, b) = A.hess[a][b].value();
        }
    }
    const intrinsic::MetricFn g = [&s](std::span<const double> q) { return chart_metric(s, q); };
    const std::function<double(std::span<const double>)> phif = [&s, &phi](std::span<const double> q) {
        return phi(constants(s.embed(q))).value();
    };
    const Eigen::MatrixXd lhs = cj.J.transpose() * Hphi * cj.J;
    const Eigen::MatrixXd rhs =
        intrinsic::hessian(phif, g, x, opt) + Dphi * cj.J.transpose() * Hf * cj.J + Ephi * g(x);

    Residual r;
    r.lhs = Form(0);
    r.rhs = Form(0);
    r.value = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff());
    return r;
}

}  // namespace nullcone::restriction
