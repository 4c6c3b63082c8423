#pragma once
// Differential calculus of form fields on R^{n+2} with eta = diag(+, -...-, +).
// Fields are evaluated on seeded jets so every operator composition is exact
// up to the jet order; each d / Lie derivative consumes one order.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/embedding.hpp"
#include "nullcone/forms.hpp"

namespace nullcone::forms {

using numeric::Jet;
using embedding::DefiningFunction;

using FormField = std::function<JetForm(std::span<const Jet>)>;
using VectorField = std::vector<Jet>;  // contravariant components

/// Flat operators in signature (2, n).
class Ambient {
public:
    explicit Ambient(int n);

    int n() const { return n_; }
    int dim() const { return n_ + 2; }
    std::span<const double> sig() const { return sig_; }

    JetForm d(const JetForm& a) const;
    JetForm star(const JetForm& a) const;
    JetForm star_inv(const JetForm& a) const;
    /// (-1)^a *^{-1} d * on each homogeneous part.
    JetForm delta(const JetForm& a) const;
    /// -(d delta + delta d).
    JetForm box(const JetForm& a) const;
    JetForm i(std::span<const Jet> v, const JetForm& a) const;
    /// j^lambda = lambda ^ for a covector.
    JetForm j(std::span<const Jet> lambda, const JetForm& a) const;
    /// j_v = (flat v) ^.
    JetForm j_vec(std::span<const Jet> v, const JetForm& a) const;
    JetForm lie(std::span<const Jet> v, const JetForm& a) const;

    VectorField flat(std::span<const Jet> v) const;
    VectorField sharp(std::span<const Jet> lambda) const { return flat(lambda); }

private:
    int n_;
    std::vector<double> sig_;
};

/// Jets of a defining function and the fields built from it around y0.
class FieldsAt {
public:
    FieldsAt(const DefiningFunction& f, const Eigen::VectorXd& y0, int order = 4);

    const Ambient& ops() const { return ops_; }
    std::span<const Jet> y() const { return y_; }
    JetForm eval(const FormField& phi) const { return phi(y_); }
    Jet eval_scalar(const std::function<Jet(std::span<const Jet>)>& s) const { return s(y_); }

    Jet f, F2, boxf, c;
    VectorField D, F, Ef, en, en1;
    std::vector<Jet> df, dc, dF2;
    std::vector<std::vector<Jet>> hess;  // d_alpha d_beta f

    JetForm iD(const JetForm& a) const { return ops_.i(D, a); }
    JetForm iF(const JetForm& a) const { return ops_.i(F, a); }
    JetForm jdf(const JetForm& a) const { return ops_.j(df, a); }
    JetForm jdc(const JetForm& a) const { return ops_.j(dc, a); }
    JetForm LD(const JetForm& a) const { return ops_.lie(D, a); }
    JetForm LF(const JetForm& a) const { return ops_.lie(F, a); }

    /// S^{df} = *^{-1} L_F * - box f.
    JetForm schouten(const JetForm& a) const;
    /// -2 (d d f)^{ab} j_a i_b + L_F, the Hessian route.
    JetForm schouten_hessian(const JetForm& a) const;

    JetForm T(const JetForm& a) const { return iF(iD(jdf(jdc(a)))); }
    JetForm Tc(const JetForm& a) const { return jdf(jdc(iF(iD(a)))); }
    JetForm L(const JetForm& a) const { return a - T(a); }

    /// (L_D + s) applied to a.
    JetForm LD_shift(const JetForm& a, double s) const { return LD(a) + Jet(s) * a; }

private:
    Ambient ops_;
    std::vector<Jet> y_;
};

/// Random polynomial coefficients of total degree <= 2, fixed at construction.
FormField random_polynomial_field(int n, int degree, std::uint64_t seed);

/// phi(y) scalar field as a degree-0 form field.
FormField scalar_field(std::function<Jet(std::span<const Jet>)> s, int n);

/// Constant-coefficient form field.
FormField constant_field(const Form& a);

}  // namespace nullcone::forms
