#pragma once
// Scale factors a(t): parsed expressions or named presets, evaluated generically
// over double / HyperDual / Jet.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nullcone/errors.hpp"
#include "nullcone/numeric/math.hpp"

namespace nullcone::scalefactor {

struct Node {
    enum class Kind { number, t, add, sub, mul, div, pow, neg, call };
    Kind kind = Kind::number;
    double number = 0.0;
    numeric::Fn fn = numeric::Fn::sin;
    std::shared_ptr<const Node> a, b;

    bool depends_on_t() const;

    template <class T>
    T eval(const T& t) const;
};

template <class T>
T int_power(const T& x, long p) {
    T base = x, r(1.0);
    unsigned long e = static_cast<unsigned long>(p < 0 ? -p : p);
    bool first = true;
    while (e) {
        if (e & 1UL) {
            r = first ? base : r * base;
            first = false;
        }
        e >>= 1UL;
        if (e) base = base * base;
    }
    if (p < 0) return T(1.0) / r;
    return r;
}

template <class T>
T Node::eval(const T& t) const {
    switch (kind) {
        case Kind::number: return T(number);
        case Kind::t: return t;
        case Kind::add: return a->eval(t) + b->eval(t);
        case Kind::sub: return a->eval(t) - b->eval(t);
        case Kind::mul: return a->eval(t) * b->eval(t);
        case Kind::div: return a->eval(t) / b->eval(t);
        case Kind::neg: return -a->eval(t);
        case Kind::call: return numeric::apply(fn, a->eval(t));
        case Kind::pow: {
            T base = a->eval(t);
            if (!b->depends_on_t()) {
                const double p = b->eval(0.0);
                if (std::floor(p) == p && std::abs(p) <= 64.0)
                    return int_power(base, static_cast<long>(p));
                return numeric::pow(base, p);
            }
            return numeric::exp(b->eval(t) * numeric::log(base));
        }
    }
    return T(0.0);
}

class ScaleExpr {
public:
    ScaleExpr() = default;
    ScaleExpr(std::shared_ptr<const Node> root, std::string source,
              std::optional<std::string> preset = std::nullopt)
        : root_(std::move(root)), source_(std::move(source)), preset_(std::move(preset)) {}

    /// a(t) without the positivity check.
    template <class T>
    T operator()(const T& t) const {
        return root_->eval(t);
    }

    /// a(t), throwing DomainError unless a(t) > 0.
    template <class T>
    T positive(const T& t) const {
        T a = root_->eval(t);
        const double v = numeric::value_of(a);
        if (!(v > 0.0))
            throw DomainError("a(t) must be positive: a(" + std::to_string(numeric::value_of(t)) +
                              ") = " + std::to_string(v) + " for " + source_);
        return a;
    }

    const Node& root() const { return *root_; }
    std::shared_ptr<const Node> root_ptr() const { return root_; }
    const std::string& source() const { return source_; }
    const std::optional<std::string>& preset() const { return preset_; }

    /// Fully parenthesized text that parses back to the same function.
    std::string print() const;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
    std::optional<std::string> preset_;
};

/// Recursive-descent parse; ParseError carries a byte offset.
ScaleExpr parse_scale_factor(std::string_view src);

struct ADerivs {
    double a, da, dda;
};

/// (a, a', a'') by one-direction HyperDual.
ADerivs eval_a(const ScaleExpr& e, double t);

/// psi' = a'/a.
double psi_dot(const ScaleExpr& e, double t);

struct Preset {
    std::string name;
    std::string expression;
    std::vector<int> k_compatible;
    double t_min, t_max;  // documented sample domain
};

const std::vector<Preset>& preset_catalog();
std::optional<Preset> find_preset(std::string_view name);
ScaleExpr preset(std::string_view name);

/// A preset name or an expression.
ScaleExpr resolve_scale(std::string_view text);

}  // namespace nullcone::scalefactor
