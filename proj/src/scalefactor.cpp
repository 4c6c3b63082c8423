#include "nullcone/scalefactor.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace nullcone::scalefactor {

using numeric::Fn;
using Kind = Node::Kind;

bool Node::depends_on_t() const {
    if (kind == Kind::t) return true;
    return (a && a->depends_on_t()) || (b && b->depends_on_t());
}

namespace {

std::shared_ptr<const Node> leaf(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->number = v;
    return n;
}

std::shared_ptr<const Node> binary(Kind k, std::shared_ptr<const Node> a,
                                   std::shared_ptr<const Node> b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct FnName {
    const char* name;
    Fn fn;
};

constexpr FnName kFunctions[] = {
    {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},   {"sinh", Fn::sinh},
    {"cosh", Fn::cosh}, {"tanh", Fn::tanh}, {"exp", Fn::exp},   {"ln", Fn::log},
    {"sqrt", Fn::sqrt}, {"csc", Fn::csc},   {"csch", Fn::csch}, {"sech", Fn::sech},
    {"cot", Fn::cot},   {"coth", Fn::coth},
};

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::shared_ptr<const Node> parse() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        auto e = expr();
        skip();
        if (pos_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::shared_ptr<const Node> expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary(Kind::add, lhs, term());
            else if (accept('-')) lhs = binary(Kind::sub, lhs, term());
            else return lhs;
        }
    }

    std::shared_ptr<const Node> term() {
        auto lhs = unary();
        for (;;) {
            if (accept('*')) lhs = binary(Kind::mul, lhs, unary());
            else if (accept('/')) lhs = binary(Kind::div, lhs, unary());
            else return lhs;
        }
    }

    std::shared_ptr<const Node> unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Kind::neg;
            n->a = unary();
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }

    std::shared_ptr<const Node> power() {
        auto base = primary();
        if (accept('^')) return binary(Kind::pow, base, unary());  // right-assoc via unary -> power
        return base;
    }

    std::shared_ptr<const Node> primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::shared_ptr<const Node> number() {
        const std::size_t start = pos_;
        bool digits = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, digits = true;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, digits = true;
        }
        if (!digits) throw ParseError("malformed number", start);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p])))
                throw ParseError("malformed exponent", pos_);
            while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
            pos_ = p;
        }
        double v = 0.0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_)
            throw ParseError("malformed number", start);
        return leaf(v);
    }

    std::shared_ptr<const Node> identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string_view id = s_.substr(start, pos_ - start);
        if (id == "t") {
            auto n = std::make_shared<Node>();
            n->kind = Kind::t;
            return n;
        }
        if (id == "pi") return leaf(M_PI);
        skip();
        const bool call = pos_ < s_.size() && s_[pos_] == '(';
        for (const auto& f : kFunctions)
            if (id == f.name) {
                if (!call) throw ParseError("expected '(' after " + std::string(id), pos_);
                ++pos_;
                auto n = std::make_shared<Node>();
                n->kind = Kind::call;
                n->fn = f.fn;
                n->a = expr();
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                return n;
            }
        if (call) throw ParseError("unknown function '" + std::string(id) + "'", start);
        throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string print_node(const Node& n) {
    switch (n.kind) {
        case Kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            return std::string("(") + buf + ")";
        }
        case Kind::t: return "t";
        case Kind::add: return "(" + print_node(*n.a) + " + " + print_node(*n.b) + ")";
        case Kind::sub: return "(" + print_node(*n.a) + " - " + print_node(*n.b) + ")";
        case Kind::mul: return "(" + print_node(*n.a) + " * " + print_node(*n.b) + ")";
        case Kind::div: return "(" + print_node(*n.a) + " / " + print_node(*n.b) + ")";
        case Kind::pow: return "(" + print_node(*n.a) + " ^ " + print_node(*n.b) + ")";
        case Kind::neg: return "(-" + print_node(*n.a) + ")";
        case Kind::call:
            for (const auto& f : kFunctions)
                if (f.fn == n.fn) return std::string(f.name) + "(" + print_node(*n.a) + ")";
    }
    return "?";
}

}  // namespace

std::string ScaleExpr::print() const { return print_node(*root_); }

ScaleExpr parse_scale_factor(std::string_view src) {
    Parser p(src);
    return ScaleExpr(p.parse(), std::string(src));
}

ADerivs eval_a(const ScaleExpr& e, double t) {
    const auto r = e(numeric::HyperDual::variable(t, 0, 1));
    const double a = r.value();
    const double da = r.dims() ? r.grad(0) : 0.0;
    const double dda = r.dims() ? r.hess(0, 0) : 0.0;
    if (!std::isfinite(a) || !std::isfinite(da) || !std::isfinite(dda))
        throw DomainError("a(t) not finite at t = " + std::to_string(t));
    return {a, da, dda};
}

double psi_dot(const ScaleExpr& e, double t) {
    const auto d = eval_a(e, t);
    if (!(d.a > 0.0)) throw DomainError("a(t) must be positive at t = " + std::to_string(t));
    return d.da / d.a;
}

const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = {
        {"einstein", "1", {-1, 0, 1}, -3.0, 3.0},
        {"ds_km1", "csch(t)", {-1}, 0.1, 3.0},
        {"ds_k0", "1/t", {0}, 0.1, 3.0},
        {"ds_kp1", "csc(t)", {1}, 0.1, M_PI - 0.1},
        {"ads_km1", "sech(t)", {-1}, -3.0, 3.0},
        {"mink_km1", "exp(-t)", {-1}, -3.0, 3.0},
        {"matter_k0", "t^2", {0}, 0.1, 3.0},
        {"radiation_k0", "t", {0}, 0.1, 3.0},
    };
    return catalog;
}

std::optional<Preset> find_preset(std::string_view name) {
    for (const auto& p : preset_catalog())
        if (p.name == name) return p;
    return std::nullopt;
}

ScaleExpr preset(std::string_view name) {
    auto p = find_preset(name);
    if (!p) throw ConfigError("unknown scale-factor preset '" + std::string(name) + "'");
    ScaleExpr e = parse_scale_factor(p->expression);
    return ScaleExpr(std::shared_ptr<const Node>(e.root_ptr()), p->expression, p->name);
}

ScaleExpr resolve_scale(std::string_view text) {
    if (find_preset(text)) return preset(text);
    return parse_scale_factor(text);
}

}  // namespace nullcone::scalefactor
