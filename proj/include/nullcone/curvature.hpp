#pragma once
// Curvature of a section from its defining function, and a chart-only oracle.
// Conventions: R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms},
// Rm(x, w, u, v) = g_{xr} R^r_{wuv}, Ric = C_{1,3} Rm, signature (+, -, ..., -).
// de Sitter (H = 1, n = 4) has scalar curvature -12 here.

#include <span>

#include <Eigen/Dense>

#include "nullcone/embedding.hpp"
#include "nullcone/forms.hpp"
#include "nullcone/intrinsic.hpp"
#include "nullcone/numeric/linalg.hpp"

namespace nullcone::curvature {

using embedding::ChartPoint;
using embedding::Section;
using numeric::Tensor4;

/// (h o k)(x,w,u,v) = h(x,u)k(w,v) + h(w,v)k(x,u) - h(w,u)k(x,v) - h(x,v)k(w,u).
Tensor4 kulkarni_nomizu(const Eigen::MatrixXd& h, const Eigen::MatrixXd& k);

/// Contraction of entries 1 and 3 with the inverse metric.
Eigen::MatrixXd contract13(const Tensor4& t, const Eigen::MatrixXd& g_inv);

struct CurvatureSet {
    std::vector<double> x;
    Eigen::MatrixXd metric;
    Tensor4 riemann;
    Eigen::MatrixXd ricci;
    double scalar = 0.0;
};

struct NfForm {
    Eigen::MatrixXd hessian_route;     // J^T (dd f) J
    Eigen::MatrixXd connection_route;  // -d_alpha f d_mu d_nu y^alpha
};

NfForm nf_form(const Section& s, std::span<const double> x);

struct AmbientScalars {
    double F2, box;
    Eigen::MatrixXd Nf, g;
    double trace_N;
    double hess_DF, hess_DD;  // (dd f)(D, F), (dd f)(D, D)
};

AmbientScalars ambient_scalars(const Section& s, std::span<const double> x);

/// Rm = -1/2 g o (F^2 g - 2 N_f), Ric, R from f alone.
CurvatureSet ambient_curvature(const Section& s, std::span<const double> x);
CurvatureSet ambient_curvature(int k, const scalefactor::ScaleExpr& a, const ChartPoint& p);

/// -n(n-1) F^2 + 2(n-1) box f, evaluated separately.
double scalar_formula(const Section& s, std::span<const double> x);

/// Levi-Civita pipeline on a metric function: FD Christoffels, FD of those.
CurvatureSet intrinsic_curvature_oracle(const intrinsic::MetricFn& g, std::span<const double> x,
                                        const intrinsic::FdOptions& opt = {});
/// Uses the closed-form FLRW metric only.
CurvatureSet intrinsic_curvature_oracle(int k, const scalefactor::ScaleExpr& a, const ChartPoint& p,
                                        const intrinsic::FdOptions& opt = {});

/// Rm - g o P with P = (Ric - R g / (2(n-1))) / (n-2).
Tensor4 weyl_part(const CurvatureSet& c);

/// Derivation of order 0: N_{mu nu} j^mu i^nu with i^nu = g^{nu l} i_l.
forms::Form derivation(const Eigen::MatrixXd& N, const Eigen::MatrixXd& g, const forms::Form& a);

struct WeitzenboeckShift {
    int degree = 0;
    double scalar = 0.0;         // coefficient of Id
    Eigen::MatrixXd derivation;  // matrix acting as a derivation
    forms::Form apply(const Eigen::MatrixXd& g, const forms::Form& a) const;
    forms::Form derivation_apply(const Eigen::MatrixXd& g, const forms::Form& a) const {
        return curvature::derivation(derivation, g, a);
    }
};

/// a(n-a)F^2 - a box f and (2a-n) N_f.
WeitzenboeckShift weitzenboeck_shift(const Section& s, int degree, std::span<const double> x);
/// Rm = g o T: -a Tr T and (2a-n) T.
WeitzenboeckShift lemma1_shift(const Eigen::MatrixXd& T, const Eigen::MatrixXd& g, int degree);
/// j^a i^b R(e_a, e_b) alpha with R(u, v) = Rm(e_c, e_d, u, v) j^c i^d.
forms::Form weitzenboeck_from_riemann(const Tensor4& rm, const Eigen::MatrixXd& g, const forms::Form& a);

}  // namespace nullcone::curvature
