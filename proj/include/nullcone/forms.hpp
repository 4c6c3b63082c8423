#pragma once
// Exterior algebra on an m-dimensional space with dense blade storage:
// coefficient c[mask] multiplies e^{a1} ^ ... ^ e^{ak}, a1 < ... < ak the set bits.

#include <bit>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/numeric/jet.hpp"

namespace nullcone::forms {

using Mask = unsigned;

inline int degree(Mask m) { return std::popcount(m); }

/// Sign of e^A ^ e^B relative to e^{A|B}; 0 when A and B overlap.
inline int wedge_sign(Mask A, Mask B) {
    if (A & B) return 0;
    int swaps = 0;
    for (Mask b = B; b; b &= b - 1) {
        const int bit = std::countr_zero(b);
        swaps += std::popcount(A >> (bit + 1));  // elements of A above bit
    }
    return (swaps & 1) ? -1 : 1;
}

/// Sign picked up moving e^a to the front of e^A (a in A).
inline int front_sign(Mask A, int a) {
    return (std::popcount(A & ((Mask(1) << a) - 1)) & 1) ? -1 : 1;
}

template <class S>
struct FormT {
    int dim = 0;
    std::vector<S> c;

    FormT() = default;
    explicit FormT(int m) : dim(m), c(std::size_t(1) << m, S(0.0)) {}

    std::size_t size() const { return c.size(); }
    S& operator[](Mask m) { return c[m]; }
    const S& operator[](Mask m) const { return c[m]; }

    FormT& operator+=(const FormT& o) {
        if (o.dim != dim) throw std::invalid_argument("form dimension mismatch");
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    FormT& operator-=(const FormT& o) {
        if (o.dim != dim) throw std::invalid_argument("form dimension mismatch");
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    friend FormT operator+(FormT a, const FormT& b) { return a += b; }
    friend FormT operator-(FormT a, const FormT& b) { return a -= b; }
    friend FormT operator*(const S& s, FormT a) {
        for (auto& v : a.c) v = s * v;
        return a;
    }
    friend FormT operator*(double s, FormT a)
        requires(!std::is_same_v<S, double>)
    {
        for (auto& v : a.c) v = S(s) * v;
        return a;
    }
};

using Form = FormT<double>;
using JetForm = FormT<numeric::Jet>;

inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const numeric::Jet& v) { return v.is_constant() && v.value() == 0.0; }

/// Basis blade e^A with coefficient 1.
template <class S = double>
FormT<S> blade(int m, Mask A) {
    FormT<S> f(m);
    f[A] = S(1.0);
    return f;
}

template <class S>
FormT<S> degree_part(const FormT<S>& a, int k) {
    FormT<S> r(a.dim);
    for (Mask A = 0; A < a.size(); ++A)
        if (degree(A) == k) r[A] = a[A];
    return r;
}

template <class S>
FormT<S> wedge(const FormT<S>& a, const FormT<S>& b) {
    FormT<S> r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) {
        if (is_zero(a[A])) continue;
        for (Mask B = 0; B < b.size(); ++B) {
            if ((A & B) || is_zero(b[B])) continue;
            const int s = wedge_sign(A, B);
            r[A | B] += S(double(s)) * a[A] * b[B];
        }
    }
    return r;
}

/// lambda ^ alpha for a covector lambda_a.
template <class S>
FormT<S> ext(std::span<const S> lambda, const FormT<S>& a) {
    FormT<S> r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) {
        if (is_zero(a[A])) continue;
        for (int e = 0; e < a.dim; ++e) {
            if ((A >> e) & 1U || is_zero(lambda[e])) continue;
            r[A | (Mask(1) << e)] += S(double(front_sign(A, e))) * lambda[e] * a[A];
        }
    }
    return r;
}

/// Interior product i_v for a vector v^a.
template <class S>
FormT<S> interior(std::span<const S> v, const FormT<S>& a) {
    FormT<S> r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) {
        if (is_zero(a[A])) continue;
        for (Mask b = A; b; b &= b - 1) {
            const int e = std::countr_zero(b);
            if (is_zero(v[e])) continue;
            r[A & ~(Mask(1) << e)] += S(double(front_sign(A, e))) * v[e] * a[A];
        }
    }
    return r;
}

/// Hodge star for a diagonal metric g = diag(sig), volume e^{0..m-1}:
/// alpha ^ *beta = <alpha, beta> vol.
template <class S>
FormT<S> star_diag(std::span<const double> sig, const FormT<S>& a) {
    const Mask full = (Mask(1) << a.dim) - 1;
    FormT<S> r(a.dim);
    for (Mask A = 0; A < a.size(); ++A) {
        if (is_zero(a[A])) continue;
        double s = wedge_sign(A, full & ~A);
        for (Mask b = A; b; b &= b - 1) s *= sig[std::countr_zero(b)];
        r[full & ~A] += S(s) * a[A];
    }
    return r;
}

/// Inverse of star_diag: on degree q, *^{-1} = sgn(g) (-1)^{q(m-q)} *.
template <class S>
FormT<S> star_diag_inv(std::span<const double> sig, const FormT<S>& a) {
    double sgn = 1.0;
    for (double s : sig) sgn *= s;
    FormT<S> st = star_diag(sig, a);
    for (Mask A = 0; A < st.size(); ++A) {
        const int q = a.dim - degree(A);  // degree of the input blade
        const double f = sgn * (((q * (a.dim - q)) & 1) ? -1.0 : 1.0);
        st[A] = S(f) * st[A];
    }
    return st;
}

/// Metric pairing of two forms for a diagonal metric.
double pairing_diag(std::span<const double> sig, const Form& a, const Form& b);

/// Hodge star for a general metric g with orientation sign eps:
/// vol = eps sqrt|det g| e^{0..m-1}.
Form star_metric(const Eigen::MatrixXd& g, double eps, const Form& a);
Form star_metric_inv(const Eigen::MatrixXd& g, double eps, const Form& a);

/// Pullback through a Jacobian J (D x m): m* e^A = e^{A} composed with J.
Form pullback(const Form& a, const Eigen::MatrixXd& J);

/// Largest coefficient magnitude.
double max_abs(const Form& a);

/// Constant-term values of a jet form.
Form values(const JetForm& a);

}  // namespace nullcone::forms
