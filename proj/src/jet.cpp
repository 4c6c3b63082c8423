#include "nullcone/numeric/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nullcone/errors.hpp"

namespace nullcone::numeric {

namespace {

using Exp = std::array<std::uint8_t, JetLayout::kMaxVars>;

int degree(const Exp& e, int vars) {
    int d = 0;
    for (int i = 0; i < vars; ++i) d += e[i];
    return d;
}

// All exponent vectors of total degree exactly d, lexicographically descending.
void gen(int vars, int pos, int left, Exp& cur, std::vector<Exp>& out) {
    if (pos == vars - 1) {
        cur[pos] = static_cast<std::uint8_t>(left);
        out.push_back(cur);
        return;
    }
    for (int v = left; v >= 0; --v) {
        cur[pos] = static_cast<std::uint8_t>(v);
        gen(vars, pos + 1, left - v, cur, out);
    }
    cur[pos] = 0;
}

std::unique_ptr<JetLayout> build(int vars, int order) {
    auto L = std::make_unique<JetLayout>();
    L->vars = vars;
    L->order = order;
    for (int d = 0; d <= order; ++d) {
        Exp cur{};
        gen(vars, 0, d, cur, L->exps);
    }
    std::map<Exp, int> index;
    for (int i = 0; i < L->size(); ++i) index[L->exps[i]] = i;
    for (int i = 0; i < L->size(); ++i) {
        const int di = degree(L->exps[i], vars);
        for (int j = 0; j < L->size(); ++j) {
            if (di + degree(L->exps[j], vars) > order) continue;
            Exp s{};
            for (int v = 0; v < vars; ++v) s[v] = L->exps[i][v] + L->exps[j][v];
            L->mul.push_back({i, j, index.at(s)});
        }
    }
    if (order > 0) {
        L->deriv.resize(vars);
        for (int v = 0; v < vars; ++v)
            for (int i = 0; i < L->size(); ++i) {
                const Exp& e = L->exps[i];
                if (e[v] == 0) continue;
                Exp t = e;
                --t[v];
                // Lower-order layout is a prefix, so the same index map applies.
                L->deriv[v].push_back({i, index.at(t), static_cast<double>(e[v])});
            }
    }
    return L;
}

}  // namespace

int JetLayout::index_of(std::span<const int> e) const {
    for (int i = 0; i < size(); ++i) {
        bool eq = true;
        for (int v = 0; v < vars && eq; ++v) eq = (exps[i][v] == e[v]);
        if (eq) return i;
    }
    return -1;
}

const JetLayout& JetLayout::get(int vars, int order) {
    if (vars < 1 || vars > kMaxVars || order < 0 || order > kMaxOrder)
        throw std::invalid_argument("JetLayout: unsupported size");
    static std::once_flag flags[kMaxVars + 1][kMaxOrder + 1];
    static std::unique_ptr<JetLayout> table[kMaxVars + 1][kMaxOrder + 1];
    std::call_once(flags[vars][order], [&] { table[vars][order] = build(vars, order); });
    return *table[vars][order];
}

Jet Jet::variable(double v, int var, int vars, int order) {
    Jet r;
    r.L_ = &JetLayout::get(vars, order);
    r.c_.assign(r.L_->size(), 0.0);
    r.c_[0] = v;
    if (order >= 1) r.c_[1 + var] = 1.0;  // degree-1 monomials follow the constant, var 0 first
    return r;
}

double Jet::partial(std::span<const int> mi) const {
    int d = 0;
    for (int e : mi) d += e;
    if (!L_) return d == 0 ? s_ : 0.0;
    if (d > L_->order) throw std::out_of_range("Jet::partial beyond jet order");
    const int idx = L_->index_of(mi);
    double fact = 1.0;
    for (int e : mi)
        for (int q = 2; q <= e; ++q) fact *= q;
    return c_[idx] * fact;
}

Jet Jet::derivative(int var) const {
    if (!L_) return Jet(0.0);
    if (L_->order == 0) throw std::logic_error("Jet::derivative of an order-0 jet");
    Jet r;
    r.L_ = &JetLayout::get(L_->vars, L_->order - 1);
    r.c_.assign(r.L_->size(), 0.0);
    for (const auto& e : L_->deriv[var]) r.c_[e.dst] += e.factor * c_[e.src];
    return r;
}

void Jet::truncate_to(int order) {
    if (!L_ || order >= L_->order) return;
    L_ = &JetLayout::get(L_->vars, order);
    c_.resize(L_->size());
}

Jet& Jet::operator+=(const Jet& o) {
    if (!o.L_) {
        if (L_) c_[0] += o.s_; else s_ += o.s_;
        return *this;
    }
    if (!L_) {
        const double s = s_;
        *this = o;
        c_[0] += s;
        return *this;
    }
    if (L_->vars != o.L_->vars) throw std::invalid_argument("Jet: variable count mismatch");
    truncate_to(o.L_->order);
    for (int i = 0; i < L_->size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    if (!r.L_) r.s_ = -r.s_;
    else for (double& v : r.c_) v = -v;
    return r;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet operator*(const Jet& a, const Jet& b) {
    if (!a.L_ && !b.L_) return Jet(a.s_ * b.s_);
    if (!a.L_ || !b.L_) {
        const Jet& j = a.L_ ? a : b;
        const double s = a.L_ ? b.s_ : a.s_;
        Jet r = j;
        for (double& v : r.c_) v *= s;
        return r;
    }
    if (a.L_->vars != b.L_->vars) throw std::invalid_argument("Jet: variable count mismatch");
    Jet r;
    r.L_ = &JetLayout::get(a.L_->vars, std::min(a.L_->order, b.L_->order));
    r.c_.assign(r.L_->size(), 0.0);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* pr = r.c_.data();
    for (const auto& t : r.L_->mul) pr[t.k] += pa[t.i] * pb[t.j];
    return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet& Jet::operator/=(const Jet& o) {
    if (!o.L_) {
        if (o.s_ == 0.0) throw DomainError("division by zero");
        return *this *= Jet(1.0 / o.s_);
    }
    return *this *= apply(Fn::recip, o);
}

Jet Jet::compose(std::span<const double> c) const {
    if (!L_) {
        // constant argument: only c[0] survives
        return Jet(c.empty() ? 0.0 : c[0]);
    }
    Jet delta = *this;
    delta.c_[0] = 0.0;
    const int K = std::min<int>(L_->order, static_cast<int>(c.size()) - 1);
    Jet r(c[K]);
    for (int k = K - 1; k >= 0; --k) r = r * delta + Jet(c[k]);
    if (r.L_) r.truncate_to(L_->order);
    else {
        // K == 0 path: promote to this layout
        Jet p = *this;
        std::fill(p.c_.begin(), p.c_.end(), 0.0);
        p.c_[0] = r.s_;
        return p;
    }
    return r;
}

Jet apply(Fn f, const Jet& x) {
    const int K = x.is_constant() ? 0 : x.order();
    return x.compose(taylor(f, x.value(), K));
}

Jet pow(const Jet& x, double p) {
    const int K = x.is_constant() ? 0 : x.order();
    return x.compose(taylor_pow(x.value(), p, K));
}

Jet atan2(const Jet& y, const Jet& x) {
    // atan2(y, x) = theta0 + atan((x0 y - y0 x) / (x0 x + y0 y))
    const double x0 = x.value(), y0 = y.value();
    if (x0 == 0.0 && y0 == 0.0) throw DomainError("atan2 at the origin");
    const double theta0 = std::atan2(y0, x0);
    if (x.is_constant() && y.is_constant()) return Jet(theta0);
    Jet num = Jet(x0) * y - Jet(y0) * x;
    Jet den = Jet(x0) * x + Jet(y0) * y;
    return Jet(theta0) + apply(Fn::atan, num / den);
}

std::vector<Jet> seed_jets(std::span<const double> point, int order) {
    const int m = static_cast<int>(point.size());
    std::vector<Jet> x;
    x.reserve(m);
    for (int i = 0; i < m; ++i) x.push_back(Jet::variable(point[i], i, m, order));
    return x;
}

}  // namespace nullcone::numeric
