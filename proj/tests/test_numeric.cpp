#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "nullcone/errors.hpp"
#include "nullcone/numeric/linalg.hpp"
#include "nullcone/numeric/math.hpp"

using namespace nullcone;
using namespace nullcone::numeric;

namespace {

// Random expression trees in two variables, evaluated generically.
struct Node {
    int op = 0;  // 0 var0, 1 var1, 2 const, 3 add, 4 mul, 5 sin, 6 cos, 7 exp(x/4), 8 sqrt(1+x^2), 9 atan
    double c = 0.0;
    std::unique_ptr<Node> a, b;

    template <class T>
    T eval(const T& x, const T& y) const {
        switch (op) {
            case 0: return x;
            case 1: return y;
            case 2: return T(c);
            case 3: return a->eval(x, y) + b->eval(x, y);
            case 4: return a->eval(x, y) * b->eval(x, y);
            case 5: return numeric::sin(a->eval(x, y));
            case 6: return numeric::cos(a->eval(x, y));
            case 7: return numeric::exp(a->eval(x, y) * T(0.25));
            case 8: { T u = a->eval(x, y); return numeric::sqrt(T(1.0) + u * u); }
            default: return numeric::atan(a->eval(x, y));
        }
    }
};

std::unique_ptr<Node> random_tree(std::mt19937_64& rng, int depth) {
    auto n = std::make_unique<Node>();
    std::uniform_int_distribution<int> leaf(0, 2), inner(3, 9);
    std::uniform_real_distribution<double> cd(-1.5, 1.5);
    n->op = depth == 0 ? leaf(rng) : inner(rng);
    n->c = cd(rng);
    if (n->op >= 3) n->a = random_tree(rng, depth - 1);
    if (n->op == 3 || n->op == 4) n->b = random_tree(rng, depth - 1);
    return n;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("hyperdual: polynomial and quadratic form examples") {
    auto r = hyperdual_eval([](std::span<const HyperDual> x) { return x[0] * x[0] * x[0]; },
                            std::vector<double>{2.0});
    CHECK(r.value == doctest::Approx(8.0));
    CHECK(r.gradient(0) == doctest::Approx(12.0));
    CHECK(r.hessian(0, 0) == doctest::Approx(12.0));

    auto q = hyperdual_eval(
        [](std::span<const HyperDual> y) { return 0.5 * (y[0] * y[0] - y[1] * y[1]); },
        std::vector<double>{3.0, 1.0});
    CHECK(q.value == doctest::Approx(4.0));
    CHECK(q.gradient(0) == doctest::Approx(3.0));
    CHECK(q.gradient(1) == doctest::Approx(-1.0));
    CHECK(q.hessian(0, 0) == doctest::Approx(1.0));
    CHECK(q.hessian(1, 1) == doctest::Approx(-1.0));
    CHECK(q.hessian(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("hyperdual: sinh(t)*chi mixed partial vs central differences") {
    auto r = hyperdual_eval([](std::span<const HyperDual> x) { return numeric::sinh(x[0]) * x[1]; },
                            std::vector<double>{1.0, 2.0});
    const double h = 1e-4;
    auto f = [](double t, double c) { return std::sinh(t) * c; };
    const double fd = (f(1 + h, 2 + h) - f(1 + h, 2 - h) - f(1 - h, 2 + h) + f(1 - h, 2 - h)) / (4 * h * h);
    CHECK(std::abs(r.hessian(0, 1) - fd) < 1e-7);
    CHECK(r.hessian(0, 1) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
}

TEST_CASE("hyperdual: constants promote with zero derivatives") {
    HyperDual c(3.5);
    CHECK(c.dims() == 0);
    HyperDual x = HyperDual::variable(1.0, 0, 2);
    HyperDual p = x * c;
    CHECK(p.grad(0) == doctest::Approx(3.5));
    CHECK(p.hess(0, 0) == 0.0);
}

TEST_CASE("hyperdual: domain errors") {
    HyperDual x = HyperDual::variable(-1.0, 0, 1);
    CHECK_THROWS_AS(numeric::log(x), DomainError);
    CHECK_THROWS_AS(numeric::sqrt(x), DomainError);
    CHECK_THROWS_AS(x / HyperDual(0.0), DomainError);
}

TEST_CASE("hyperdual: 100 random compositions match central differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pd(-1.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto tree = random_tree(rng, 3);
        const double x0 = pd(rng), y0 = pd(rng);
        auto xs = seed(std::vector<double>{x0, y0});
        HyperDual r = tree->eval(xs[0], xs[1]);
        auto f = [&](double x, double y) { return tree->eval(x, y); };
        const double h = 1e-4;
        const double gx = (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h);
        const double gy = (f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h);
        const double hxx = (f(x0 + h, y0) - 2 * f(x0, y0) + f(x0 - h, y0)) / (h * h);
        const double hxy = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) +
                            f(x0 - h, y0 - h)) / (4 * h * h);
        const double gxad = r.dims() ? r.grad(0) : 0.0;
        const double gyad = r.dims() ? r.grad(1) : 0.0;
        const double hxxad = r.dims() ? r.hess(0, 0) : 0.0;
        const double hxyad = r.dims() ? r.hess(0, 1) : 0.0;
        CHECK(rel(gxad, gx) < 1e-6);
        CHECK(rel(gyad, gy) < 1e-6);
        CHECK(rel(hxxad, hxx) < 1e-6);
        CHECK(rel(hxyad, hxy) < 1e-6);
        CHECK(r.value() == doctest::Approx(f(x0, y0)).epsilon(1e-14));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("jet: agrees with hyperdual through second order and is exact beyond") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pd(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        auto tree = random_tree(rng, 3);
        const std::vector<double> p{pd(rng), pd(rng)};
        auto hx = seed(p);
        auto jx = seed_jets(p, 4);
        HyperDual h = tree->eval(hx[0], hx[1]);
        Jet j = tree->eval(jx[0], jx[1]);
        CHECK(j.value() == doctest::Approx(h.value()).epsilon(1e-14));
        if (h.dims() == 0) continue;
        for (int a = 0; a < 2; ++a) {
            int e1[2] = {0, 0};
            e1[a] = 1;
            CHECK(j.partial(e1) == doctest::Approx(h.grad(a)).epsilon(1e-12));
            for (int b = 0; b < 2; ++b) {
                int e2[2] = {0, 0};
                e2[a] += 1;
                e2[b] += 1;
                CHECK(j.partial(e2) == doctest::Approx(h.hess(a, b)).epsilon(1e-12));
            }
        }
    }
    // d^4/dx^2dy^2 of exp(x*y) at (0.3, -0.2): (2 + 4xy + x^2y^2) e^{xy}... computed by hand
    auto jx = seed_jets(std::vector<double>{0.3, -0.2}, 4);
    Jet e = numeric::exp(jx[0] * jx[1]);
    const double x = 0.3, y = -0.2, u = x * y;
    const double exact = (2.0 + 4.0 * u + u * u) * std::exp(u);
    int mi[2] = {2, 2};
    CHECK(e.partial(mi) == doctest::Approx(exact).epsilon(1e-12));
    // derivative() lowers the order by one and differentiates exactly
    Jet dx = e.derivative(0);
    CHECK(dx.order() == 3);
    CHECK(dx.value() == doctest::Approx(y * std::exp(u)).epsilon(1e-14));
}

TEST_CASE("jet: every elementary function matches its double value and hyperdual slope") {
    const Fn fns[] = {Fn::sin, Fn::cos, Fn::tan, Fn::sinh, Fn::cosh, Fn::tanh, Fn::exp,
                      Fn::log, Fn::sqrt, Fn::csc, Fn::sec, Fn::csch, Fn::sech, Fn::cot,
                      Fn::coth, Fn::atan, Fn::atanh};
    for (Fn f : fns) {
        const double x0 = 0.37;
        Jet j = apply(f, Jet::variable(x0, 0, 1, 5));
        HyperDual h = apply(f, HyperDual::variable(x0, 0, 1));
        CHECK(j.value() == doctest::Approx(apply(f, x0)).epsilon(1e-14));
        int e1[1] = {1}, e2[1] = {2}, e5[1] = {5};
        CHECK(j.partial(e1) == doctest::Approx(h.grad(0)).epsilon(1e-13));
        CHECK(j.partial(e2) == doctest::Approx(h.hess(0, 0)).epsilon(1e-13));
        // fifth derivative against a wide central difference of the fourth
        const double hstep = 1e-3;
        auto d4 = [&](double x) {
            int e4[1] = {4};
            return apply(f, Jet::variable(x, 0, 1, 4)).partial(e4);
        };
        const double fd = (d4(x0 + hstep) - d4(x0 - hstep)) / (2 * hstep);
        CHECK(rel(j.partial(e5), fd) < 1e-4);
    }
}

TEST_CASE("jet and hyperdual atan2 cover all quadrants") {
    const double pts[][2] = {{1.0, 0.5}, {-1.0, 0.5}, {-1.0, -0.5}, {0.0, 1.0}, {0.0, -2.0}};
    for (auto& p : pts) {
        auto hx = seed(std::vector<double>{p[0], p[1]});
        HyperDual h = atan2(hx[1], hx[0]);
        auto jx = seed_jets(std::vector<double>{p[0], p[1]}, 3);
        Jet j = atan2(jx[1], jx[0]);
        CHECK(h.value() == doctest::Approx(std::atan2(p[1], p[0])));
        CHECK(j.value() == doctest::Approx(std::atan2(p[1], p[0])));
        const double r2 = p[0] * p[0] + p[1] * p[1];
        CHECK(h.grad(0) == doctest::Approx(-p[1] / r2));
        int e[2] = {1, 0};
        CHECK(j.partial(e) == doctest::Approx(-p[1] / r2));
        int e2[2] = {1, 1};
        CHECK(j.partial(e2) == doctest::Approx(h.hess(0, 1)).epsilon(1e-12));
    }
}

TEST_CASE("rank: spec examples") {
    CHECK(rank_with_tolerance(Eigen::MatrixXd::Identity(5, 5), 1e-8) == 5);
    CHECK(rank_with_tolerance(Eigen::MatrixXd::Zero(4, 6), 1e-8) == 0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    Eigen::VectorXd u1(10), u2(10), v1(15), v2(15);
    for (int i = 0; i < 10; ++i) { u1(i) = nd(rng); u2(i) = nd(rng); }
    for (int i = 0; i < 15; ++i) { v1(i) = nd(rng); v2(i) = nd(rng); }
    Eigen::MatrixXd M = u1 * v1.transpose() + u2 * v2.transpose();
    CHECK(rank_with_tolerance(M, 1e-8) == 2);
}

TEST_CASE("rank: jacobi singular values match Eigen and are invariant under mixing") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 12, p = 7, r = 1 + trial % 6;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, p);
        for (int k = 0; k < r; ++k) {
            Eigen::VectorXd u(m), v(p);
            for (int i = 0; i < m; ++i) u(i) = nd(rng);
            for (int i = 0; i < p; ++i) v(i) = nd(rng);
            A += u * v.transpose();
        }
        Svd s = jacobi_svd(A);
        Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
        for (int i = 0; i < p; ++i)
            CHECK(std::abs(s.sigma(i) - ref.singularValues()(i)) < 1e-10 * ref.singularValues()(0));
        CHECK(rank_with_tolerance(A) == r);
        // permutations and orthogonal mixing
        Eigen::MatrixXd Q = Eigen::MatrixXd::Random(m, m).householderQr().householderQ();
        Eigen::PermutationMatrix<Eigen::Dynamic> P(p);
        P.setIdentity();
        std::shuffle(P.indices().data(), P.indices().data() + p, rng);
        CHECK(rank_with_tolerance(Q * A * P, 1e-8) == r);
        CHECK(rank_with_tolerance(A.transpose(), 1e-8) == r);
    }
}

TEST_CASE("tensor4: riemann defect") {
    Tensor4 R(3, Symmetry::riemann);
    R(0, 1, 0, 1) = 2.0;
    R(1, 0, 0, 1) = -2.0;
    R(0, 1, 1, 0) = -2.0;
    R(1, 0, 1, 0) = 2.0;
    CHECK(R.riemann_defect() < 1e-15);
    R(1, 0, 1, 0) = 1.0;
    CHECK(R.riemann_defect() > 0.1);
}
