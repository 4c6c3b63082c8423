#include "nullcone/forms.hpp"

#include <algorithm>

namespace nullcone::forms {

double pairing_diag(std::span<const double> sig, const Form& a, const Form& b) {
    double s = 0.0;
    for (Mask A = 0; A < a.size(); ++A) {
        if (a[A] == 0.0 || b[A] == 0.0) continue;
        double w = 1.0;
        for (Mask m = A; m; m &= m - 1) w *= sig[std::countr_zero(m)];
        s += w * a[A] * b[A];
    }
    return s;
}

namespace {

std::vector<int> bits(Mask A) {
    std::vector<int> r;
    for (Mask m = A; m; m &= m - 1) r.push_back(std::countr_zero(m));
    return r;
}

double minor_det(const Eigen::MatrixXd& M, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int k = static_cast<int>(rows.size());
    if (k == 0) return 1.0;
    Eigen::MatrixXd s(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s(i, j) = M(rows[i], cols[j]);
    return s.determinant();
}

}  // namespace

Form star_metric(const Eigen::MatrixXd& g, double eps, const Form& a) {
    const int m = a.dim;
    const Mask full = (Mask(1) << m) - 1;
    const Eigen::MatrixXd gi = g.inverse();
    const double vol = eps * std::sqrt(std::abs(g.determinant()));
    Form r(m);
    for (Mask B = 0; B < a.size(); ++B) {
        if (a[B] == 0.0) continue;
        const auto rb = bits(B);
        for (Mask A = 0; A < a.size(); ++A) {
            if (degree(A) != degree(B)) continue;
            const double raised = minor_det(gi, rb, bits(A));
            if (raised == 0.0) continue;
            r[full & ~A] += a[B] * raised * vol * wedge_sign(A, full & ~A);
        }
    }
    return r;
}

Form star_metric_inv(const Eigen::MatrixXd& g, double eps, const Form& a) {
    const int m = a.dim;
    const double sgn = g.determinant() > 0 ? 1.0 : -1.0;
    Form st = star_metric(g, eps, a);
    for (Mask A = 0; A < st.size(); ++A) {
        const int q = m - degree(A);
        st[A] *= sgn * (((q * (m - q)) & 1) ? -1.0 : 1.0);
    }
    return st;
}

Form pullback(const Form& a, const Eigen::MatrixXd& J) {
    const int m = static_cast<int>(J.cols());
    Form r(m);
    std::vector<std::vector<int>> cache(std::size_t(1) << m);
    for (Mask M = 0; M < r.size(); ++M) cache[M] = bits(M);
    for (Mask A = 0; A < a.size(); ++A) {
        if (a[A] == 0.0) continue;
        const int k = degree(A);
        if (k > m) continue;
        const auto ra = bits(A);
        for (Mask M = 0; M < r.size(); ++M)
            if (degree(M) == k) r[M] += a[A] * minor_det(J, ra, cache[M]);
    }
    return r;
}

double max_abs(const Form& a) {
    double m = 0.0;
    for (double v : a.c) m = std::max(m, std::abs(v));
    return m;
}

Form values(const JetForm& a) {
    Form r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) r[A] = a[A].value();
    return r;
}

}  // namespace nullcone::forms
