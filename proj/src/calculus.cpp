#include "nullcone/calculus.hpp"

#include <random>

namespace nullcone::forms {

using embedding::eta_diag;

Ambient::Ambient(int n) : n_(n), sig_(n + 2) {
    for (int a = 0; a < n + 2; ++a) sig_[a] = eta_diag(n, a);
}

JetForm Ambient::d(const JetForm& a) const {
    JetForm r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) {
        if (is_zero(a[A])) continue;
        for (int b = 0; b < a.dim; ++b) {
            if ((A >> b) & 1U) continue;
            const Jet p = a[A].derivative(b);
            if (is_zero(p)) continue;
            r[A | (Mask(1) << b)] += Jet(double(front_sign(A, b))) * p;
        }
    }
    return r;
}

JetForm Ambient::star(const JetForm& a) const { return star_diag<Jet>(sig_, a); }
JetForm Ambient::star_inv(const JetForm& a) const { return star_diag_inv<Jet>(sig_, a); }

JetForm Ambient::delta(const JetForm& a) const {
    JetForm r(a.dim);
    for (int k = 1; k <= a.dim; ++k) {
        JetForm part = degree_part(a, k);
        bool any = false;
        for (const auto& v : part.c) any = any || !is_zero(v);
        if (!any) continue;
        JetForm dk = star_inv(d(star(part)));
        r += Jet((k & 1) ? -1.0 : 1.0) * dk;
    }
    return r;
}

JetForm Ambient::box(const JetForm& a) const {
    JetForm r = d(delta(a)) + delta(d(a));
    return Jet(-1.0) * r;
}

JetForm Ambient::i(std::span<const Jet> v, const JetForm& a) const { return interior<Jet>(v, a); }
JetForm Ambient::j(std::span<const Jet> l, const JetForm& a) const { return ext<Jet>(l, a); }

VectorField Ambient::flat(std::span<const Jet> v) const {
    VectorField r(v.begin(), v.end());
    for (int a = 0; a < dim(); ++a)
        if (sig_[a] < 0) r[a] = -r[a];
    return r;
}

JetForm Ambient::j_vec(std::span<const Jet> v, const JetForm& a) const {
    const auto l = flat(v);
    return j(l, a);
}

JetForm Ambient::lie(std::span<const Jet> v, const JetForm& a) const {
    return d(i(v, a)) + i(v, d(a));
}

FieldsAt::FieldsAt(const DefiningFunction& fn, const Eigen::VectorXd& y0, int order)
    : ops_(static_cast<int>(y0.size()) - 2),
      y_(numeric::seed_jets(std::span<const double>(y0.data(), y0.size()), order)) {
    const int m = ops_.dim();
    const auto sig = ops_.sig();
    f = fn(std::span<const Jet>(y_));
    df.resize(m);
    dc.resize(m);
    F.resize(m);
    D = y_;
    hess.assign(m, std::vector<Jet>(m));
    c = Jet(0.0);
    for (int a = 0; a < m; ++a) {
        df[a] = f.derivative(a);
        dc[a] = Jet(sig[a]) * y_[a];
        F[a] = Jet(sig[a]) * df[a];
        c += Jet(0.5 * sig[a]) * y_[a] * y_[a];
    }
    F2 = Jet(0.0);
    boxf = Jet(0.0);
    for (int a = 0; a < m; ++a) {
        F2 += Jet(sig[a]) * df[a] * df[a];
        for (int b = 0; b < m; ++b) hess[a][b] = df[a].derivative(b);
        boxf += Jet(sig[a]) * hess[a][a];
    }
    dF2.resize(m);
    Ef.resize(m);
    en.resize(m);
    en1.resize(m);
    for (int a = 0; a < m; ++a) {
        dF2[a] = F2.derivative(a);
        Ef[a] = f * F[a] - F2 * D[a];
        en[a] = F[a] - Jet(0.5) * (Jet(1.0) + F2) * D[a];
        en1[a] = F[a] + Jet(0.5) * (Jet(1.0) - F2) * D[a];
    }
}

JetForm FieldsAt::schouten(const JetForm& a) const {
    return ops_.star_inv(LF(ops_.star(a))) - boxf * a;
}

JetForm FieldsAt::schouten_hessian(const JetForm& a) const {
    const int m = ops_.dim();
    const auto sig = ops_.sig();
    JetForm r = LF(a);
    // (dd f)^{ab} j_a i_b with raised indices and j_a = eta_{ab} j^b: H_e^b j^e i_b.
    for (int b = 0; b < m; ++b) {
        std::vector<Jet> eb(m, Jet(0.0));
        eb[b] = Jet(1.0);
        const JetForm ib = ops_.i(eb, a);
        std::vector<Jet> lam(m);
        for (int e = 0; e < m; ++e) lam[e] = Jet(-2.0 * sig[b]) * hess[e][b];
        r += ops_.j(lam, ib);
    }
    return r;
}

FormField random_polynomial_field(int n, int degree, std::uint64_t seed) {
    const int m = n + 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Coef {
        Mask blade;
        double c0;
        std::vector<double> c1;
        std::vector<double> c2;  // upper triangle
    };
    std::vector<Coef> coefs;
    for (Mask A = 0; A < (Mask(1) << m); ++A) {
        if (forms::degree(A) != degree) continue;
        Coef c{A, u(rng), {}, {}};
        for (int i = 0; i < m; ++i) c.c1.push_back(u(rng));
        for (int i = 0; i < m * (m + 1) / 2; ++i) c.c2.push_back(0.5 * u(rng));
        coefs.push_back(std::move(c));
    }
    return [coefs, m](std::span<const Jet> y) {
        JetForm r(m);
        for (const auto& c : coefs) {
            Jet v(c.c0);
            int k = 0;
            for (int i = 0; i < m; ++i) {
                Jet row = Jet(c.c1[i]);
                for (int j = i; j < m; ++j) row += Jet(c.c2[k++]) * y[j];
                v += row * y[i];
            }
            r[c.blade] = v;
        }
        return r;
    };
}

FormField scalar_field(std::function<Jet(std::span<const Jet>)> s, int n) {
    return [s = std::move(s), n](std::span<const Jet> y) {
        JetForm r(n + 2);
        r[0] = s(y);
        return r;
    };
}

FormField constant_field(const Form& a) {
    return [a](std::span<const Jet>) {
        JetForm r(a.dim);
        for (Mask A = 0; A < a.size(); ++A) r[A] = Jet(a[A]);
        return r;
    };
}

}  // namespace nullcone::forms
