#include "nullcone/numeric/taylor.hpp"

#include <cmath>
#include <string>

#include "nullcone/errors.hpp"

namespace nullcone::numeric {
namespace {

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b) {
    Series r(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// a / b by the usual recurrence; b[0] must be nonzero.
Series div(const Series& a, const Series& b, Fn f, double x0) {
    if (b[0] == 0.0)
        throw DomainError(std::string(fn_name(f)) + " has a pole at " + std::to_string(x0));
    Series q(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = a[k];
        for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
        q[k] = s / b[0];
    }
    return q;
}

Series integrate(const Series& d, double c0) {
    Series r(d.size(), 0.0);
    r[0] = c0;
    for (std::size_t k = 1; k < d.size(); ++k) r[k] = d[k - 1] / static_cast<double>(k);
    return r;
}

Series cos_series(double x0, int order) {
    Series r(order + 1);
    double fact = 1.0;
    const double s = std::sin(x0), c = std::cos(x0);
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        r[k] = cyc[k % 4] / fact;
    }
    return r;
}

Series sinh_cosh_series(double x0, int order, bool is_sinh) {
    Series r(order + 1);
    double fact = 1.0;
    const double s = std::sinh(x0), c = std::cosh(x0);
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        bool even = (k % 2 == 0);
        r[k] = ((even == is_sinh) ? s : c) / fact;
    }
    return r;
}

Series sin_exact(double x0, int order) {
    Series r(order + 1);
    double fact = 1.0;
    const double s = std::sin(x0), c = std::cos(x0);
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        r[k] = cyc[k % 4] / fact;
    }
    return r;
}

Series one(int order) {
    Series r(order + 1, 0.0);
    r[0] = 1.0;
    return r;
}

}  // namespace

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::tan: return "tan";
        case Fn::sinh: return "sinh";
        case Fn::cosh: return "cosh";
        case Fn::tanh: return "tanh";
        case Fn::exp: return "exp";
        case Fn::log: return "ln";
        case Fn::sqrt: return "sqrt";
        case Fn::csc: return "csc";
        case Fn::sec: return "sec";
        case Fn::csch: return "csch";
        case Fn::sech: return "sech";
        case Fn::cot: return "cot";
        case Fn::coth: return "coth";
        case Fn::atan: return "atan";
        case Fn::atanh: return "atanh";
        case Fn::recip: return "recip";
    }
    return "?";
}

std::vector<double> taylor_pow(double x0, double p, int order) {
    Series r(order + 1, 0.0);
    const bool integral = std::floor(p) == p;
    if (x0 < 0.0 && !integral)
        throw DomainError("non-integer power of negative base " + std::to_string(x0));
    if (x0 == 0.0) {
        // Only non-negative integer powers are smooth at 0.
        if (!integral || p < 0.0)
            throw DomainError("power " + std::to_string(p) + " not differentiable at 0");
        const int ip = static_cast<int>(p);
        if (ip <= order) r[ip] = 1.0;
        return r;
    }
    double binom = 1.0;  // generalized binomial C(p, k)
    for (int k = 0; k <= order; ++k) {
        if (k > 0) binom *= (p - (k - 1)) / k;
        r[k] = binom * std::pow(x0, p - k);
    }
    for (double v : r)
        if (!std::isfinite(v)) throw DomainError("power overflow at " + std::to_string(x0));
    return r;
}

std::vector<double> taylor(Fn f, double x0, int order) {
    if (!std::isfinite(x0))
        throw DomainError(std::string(fn_name(f)) + " of non-finite argument");
    Series r;
    switch (f) {
        case Fn::sin: r = sin_exact(x0, order); break;
        case Fn::cos: r = cos_series(x0, order); break;
        case Fn::sinh: r = sinh_cosh_series(x0, order, true); break;
        case Fn::cosh: r = sinh_cosh_series(x0, order, false); break;
        case Fn::exp: {
            r.assign(order + 1, 0.0);
            double fact = 1.0, e = std::exp(x0);
            for (int k = 0; k <= order; ++k) {
                if (k > 0) fact *= k;
                r[k] = e / fact;
            }
            break;
        }
        case Fn::log: {
            if (x0 <= 0.0) throw DomainError("ln of non-positive argument " + std::to_string(x0));
            r.assign(order + 1, 0.0);
            r[0] = std::log(x0);
            double p = 1.0;
            for (int k = 1; k <= order; ++k) {
                p /= x0;
                r[k] = ((k % 2) ? 1.0 : -1.0) * p / k;
            }
            break;
        }
        case Fn::sqrt:
            if (x0 <= 0.0) throw DomainError("sqrt of non-positive argument " + std::to_string(x0));
            r = taylor_pow(x0, 0.5, order);
            break;
        case Fn::recip:
            if (x0 == 0.0) throw DomainError("division by zero");
            r = taylor_pow(x0, -1.0, order);
            break;
        case Fn::tan: r = div(sin_exact(x0, order), cos_series(x0, order), f, x0); break;
        case Fn::cot: r = div(cos_series(x0, order), sin_exact(x0, order), f, x0); break;
        case Fn::csc: r = div(one(order), sin_exact(x0, order), f, x0); break;
        case Fn::sec: r = div(one(order), cos_series(x0, order), f, x0); break;
        case Fn::tanh:
            r = div(sinh_cosh_series(x0, order, true), sinh_cosh_series(x0, order, false), f, x0);
            break;
        case Fn::coth:
            r = div(sinh_cosh_series(x0, order, false), sinh_cosh_series(x0, order, true), f, x0);
            break;
        case Fn::csch: r = div(one(order), sinh_cosh_series(x0, order, true), f, x0); break;
        case Fn::sech: r = div(one(order), sinh_cosh_series(x0, order, false), f, x0); break;
        case Fn::atan:
        case Fn::atanh: {
            // g' = 1/(1 +- x^2), integrate once.
            Series x(order + 1, 0.0);
            x[0] = x0;
            if (order >= 1) x[1] = 1.0;
            Series q = mul(x, x);
            const double sgn = (f == Fn::atan) ? 1.0 : -1.0;
            for (double& v : q) v *= sgn;
            q[0] += 1.0;
            if (f == Fn::atanh && std::abs(x0) >= 1.0)
                throw DomainError("atanh argument outside (-1,1): " + std::to_string(x0));
            Series d = div(one(order), q, f, x0);
            r = integrate(d, f == Fn::atan ? std::atan(x0) : std::atanh(x0));
            break;
        }
    }
    for (double v : r)
        if (!std::isfinite(v))
            throw DomainError(std::string(fn_name(f)) + " not finite at " + std::to_string(x0));
    return r;
}

double apply(Fn f, double x) { return taylor(f, x, 0)[0]; }

}  // namespace nullcone::numeric
