#include "nullcone/numeric/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nullcone::numeric {

Svd jacobi_svd(const DenseMatrix& A) {
    const int p = static_cast<int>(A.cols());
    Eigen::MatrixXd U = A;
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(p, p);
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < p - 1; ++i)
            for (int j = i + 1; j < p; ++j) {
                const double a = U.col(i).squaredNorm();
                const double b = U.col(j).squaredNorm();
                const double c = U.col(i).dot(U.col(j));
                if (c == 0.0 || std::abs(c) <= eps * std::sqrt(a * b)) continue;
                off = std::max(off, std::abs(c) / std::sqrt(a * b));
                const double zeta = (b - a) / (2.0 * c);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int r = 0; r < U.rows(); ++r) {
                    const double ui = U(r, i), uj = U(r, j);
                    U(r, i) = cs * ui - sn * uj;
                    U(r, j) = sn * ui + cs * uj;
                }
                for (int r = 0; r < p; ++r) {
                    const double vi = V(r, i), vj = V(r, j);
                    V(r, i) = cs * vi - sn * vj;
                    V(r, j) = sn * vi + cs * vj;
                }
            }
        if (off <= eps) break;
    }
    Eigen::VectorXd s(p);
    for (int i = 0; i < p; ++i) s(i) = U.col(i).norm();
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return s(x) > s(y); });
    Svd out{Eigen::VectorXd(p), Eigen::MatrixXd(p, p)};
    for (int i = 0; i < p; ++i) {
        out.sigma(i) = s(order[i]);
        out.V.col(i) = V.col(order[i]);
    }
    return out;
}

int rank_with_tolerance(const DenseMatrix& M, double rel_tol) {
    if (M.size() == 0) return 0;
    // Work on the orientation with fewer columns.
    const Svd s = M.cols() <= M.rows() ? jacobi_svd(M) : jacobi_svd(M.transpose());
    if (s.sigma.size() == 0 || s.sigma(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.sigma.size(); ++i)
        if (s.sigma(i) > rel_tol * s.sigma(0)) ++r;
    return r;
}

double Tensor4::max_abs() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, std::abs(v));
    return m;
}

Tensor4 Tensor4::operator-(const Tensor4& o) const {
    Tensor4 r = *this;
    for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] -= o.d_[i];
    r.tag_ = Symmetry::none;
    return r;
}

Tensor4 Tensor4::operator+(const Tensor4& o) const {
    Tensor4 r = *this;
    for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] += o.d_[i];
    if (o.tag_ != tag_) r.tag_ = Symmetry::none;
    return r;
}

Tensor4 Tensor4::operator*(double s) const {
    Tensor4 r = *this;
    for (double& v : r.d_) v *= s;
    return r;
}

double Tensor4::riemann_defect() const {
    const double scale = std::max(max_abs(), 1e-300);
    double worst = 0.0;
    const Tensor4& R = *this;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                for (int d = 0; d < n_; ++d) {
                    const double v = R(a, b, c, d);
                    worst = std::max({worst, std::abs(v + R(b, a, c, d)),
                                      std::abs(v + R(a, b, d, c)), std::abs(v - R(c, d, a, b))});
                }
    return worst / scale;
}

}  // namespace nullcone::numeric
