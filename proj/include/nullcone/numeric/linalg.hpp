#pragma once
// Small dense linear algebra: one-sided Jacobi SVD, numerical rank and a
// rank-4 tensor with an optional symmetry tag.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nullcone::numeric {

using DenseMatrix = Eigen::MatrixXd;

struct Svd {
    Eigen::VectorXd sigma;  // descending
    Eigen::MatrixXd V;      // right singular vectors as columns, same order
};

/// One-sided (Hestenes) Jacobi SVD of an m x p matrix.
Svd jacobi_svd(const DenseMatrix& A);

/// Number of singular values above rel_tol * sigma_max; 0 for the zero matrix.
int rank_with_tolerance(const DenseMatrix& M, double rel_tol = 1e-8);

enum class Symmetry { none, riemann, kulkarni_nomizu };

class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n, Symmetry tag = Symmetry::none)
        : n_(n), tag_(tag), d_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }
    Symmetry tag() const { return tag_; }
    void set_tag(Symmetry t) { tag_ = t; }

    double& operator()(int a, int b, int c, int d) { return d_[((a * n_ + b) * n_ + c) * n_ + d]; }
    double operator()(int a, int b, int c, int d) const {
        return d_[((a * n_ + b) * n_ + c) * n_ + d];
    }

    double max_abs() const;
    Tensor4 operator-(const Tensor4& o) const;
    Tensor4 operator+(const Tensor4& o) const;
    Tensor4 operator*(double s) const;

    /// Largest violation of R_abcd = -R_bacd = -R_abdc = R_cdab, relative to max_abs.
    double riemann_defect() const;

private:
    int n_ = 0;
    Symmetry tag_ = Symmetry::none;
    std::vector<double> d_;
};

}  // namespace nullcone::numeric
