#pragma once
// Truncated multivariate Taylor polynomials ("jets") of arbitrary small order.
// Used where operator compositions need more than two derivatives of the
// defining function (Lie derivatives of Lie derivatives, [d, S] terms).
//
// A jet without a layout is an exact constant and mixes with jets of any
// order; the product of two jets is truncated to the smaller order.

#include <array>
#include <climits>
#include <cstdint>
#include <span>
#include <vector>

#include "nullcone/numeric/taylor.hpp"

namespace nullcone::numeric {

struct JetLayout {
    static constexpr int kMaxVars = 8;
    static constexpr int kMaxOrder = 6;

    int vars = 0;
    int order = 0;
    std::vector<std::array<std::uint8_t, kMaxVars>> exps;  // graded, prefix-stable across orders
    struct Triple { int i, j, k; };
    std::vector<Triple> mul;
    struct DerivEntry { int src, dst; double factor; };
    std::vector<std::vector<DerivEntry>> deriv;  // per variable, into layout(vars, order-1)

    int size() const { return static_cast<int>(exps.size()); }
    int index_of(std::span<const int> e) const;

    static const JetLayout& get(int vars, int order);
};

class Jet {
public:
    Jet() = default;
    Jet(double c) : s_(c) {}  // NOLINT: implicit promotion of constants

    static Jet variable(double v, int var, int vars, int order);

    bool is_constant() const { return L_ == nullptr; }
    int order() const { return L_ ? L_->order : INT_MAX; }
    int vars() const { return L_ ? L_->vars : 0; }
    double value() const { return L_ ? c_[0] : s_; }

    /// Partial derivative of the represented function at the expansion point.
    double partial(std::span<const int> multi_index) const;

    /// d/dx_var as a jet of one lower order.
    Jet derivative(int var) const;

    /// Sum_k c[k] (x - x0)^k.
    Jet compose(std::span<const double> c) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);

    friend Jet operator-(const Jet& a);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

private:
    void truncate_to(int order);

    const JetLayout* L_ = nullptr;
    double s_ = 0.0;
    std::vector<double> c_;
};

Jet apply(Fn f, const Jet& x);
Jet pow(const Jet& x, double p);
Jet atan2(const Jet& y, const Jet& x);

/// Seeded coordinates x_i = point_i + e_i at the given order.
std::vector<Jet> seed_jets(std::span<const double> point, int order);

}  // namespace nullcone::numeric
