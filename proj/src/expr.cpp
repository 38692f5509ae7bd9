#include "walkerlab/expr.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "walkerlab/errors.hpp"

namespace walkerlab {

struct Expression::Node {
    Kind kind = Kind::Rational;
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value = 0.0;
    Coord coord = Coord::X1;
    Func func = Func::Sin;
    int exponent = 0;
    Expression a{NullTag{}};
    Expression b{NullTag{}};
};

namespace {

using Kind = Expression::Kind;

std::shared_ptr<const Expression::Node> zero_node() {
    static const auto z = std::make_shared<const Expression::Node>();
    return z;
}

bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_mul_overflow(a, b, &out);
}

bool checked_add(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_add_overflow(a, b, &out);
}

} // namespace

const char* coord_name(Coord c) {
    switch (c) {
    case Coord::X1: return "x1";
    case Coord::X2: return "x2";
    case Coord::XP1: return "xp1";
    case Coord::XP2: return "xp2";
    }
    return "?";
}

const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

Expression::Expression() : node_(zero_node()) {}

Expression::Expression(long long v) : Expression(rational(v, 1)) {}

Expression Expression::rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational literal with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Rational;
    n->num = num;
    n->den = den;
    return Expression(std::move(n));
}

Expression Expression::decimal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Decimal;
    n->value = v;
    return Expression(std::move(n));
}

Expression Expression::variable(Coord c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->coord = c;
    return Expression(std::move(n));
}

Expression Expression::neg(Expression a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = std::move(a);
    return Expression(std::move(n));
}

Expression Expression::binary(Kind k, Expression a, Expression b) {
    if (k != Kind::Add && k != Kind::Sub && k != Kind::Mul && k != Kind::Div)
        throw std::invalid_argument("binary: not a binary operator");
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expression(std::move(n));
}

Expression Expression::pow(Expression base, int exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->a = std::move(base);
    n->exponent = exponent;
    return Expression(std::move(n));
}

Expression Expression::call(Func f, Expression arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->a = std::move(arg);
    return Expression(std::move(n));
}

Expression::Kind Expression::kind() const { return node_->kind; }
std::int64_t Expression::num() const { return node_->num; }
std::int64_t Expression::den() const { return node_->den; }
double Expression::decimal_value() const { return node_->value; }
Coord Expression::coord() const { return node_->coord; }
Func Expression::func() const { return node_->func; }
int Expression::exponent() const { return node_->exponent; }
const Expression& Expression::lhs() const { return node_->a; }
const Expression& Expression::rhs() const { return node_->b; }

bool Expression::is_literal() const {
    return node_->kind == Kind::Rational || node_->kind == Kind::Decimal;
}

double Expression::literal_value() const {
    if (node_->kind == Kind::Rational)
        return static_cast<double>(node_->num) / static_cast<double>(node_->den);
    if (node_->kind == Kind::Decimal) return node_->value;
    throw std::logic_error("literal_value on a non-literal");
}

bool Expression::is_constant(double v) const { return is_literal() && literal_value() == v; }

bool Expression::depends_on(Coord c) const {
    switch (node_->kind) {
    case Kind::Rational:
    case Kind::Decimal: return false;
    case Kind::Variable: return node_->coord == c;
    case Kind::Neg:
    case Kind::Pow:
    case Kind::Call: return node_->a.depends_on(c);
    default: return node_->a.depends_on(c) || node_->b.depends_on(c);
    }
}

bool Expression::structurally_equal(const Expression& o) const {
    if (node_ == o.node_) return true;
    const Node& x = *node_;
    const Node& y = *o.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case Kind::Rational: return x.num == y.num && x.den == y.den;
    case Kind::Decimal: return x.value == y.value;
    case Kind::Variable: return x.coord == y.coord;
    case Kind::Neg: return x.a.structurally_equal(y.a);
    case Kind::Pow: return x.exponent == y.exponent && x.a.structurally_equal(y.a);
    case Kind::Call: return x.func == y.func && x.a.structurally_equal(y.a);
    default: return x.a.structurally_equal(y.a) && x.b.structurally_equal(y.b);
    }
}

// ---------------------------------------------------------------- evaluation

namespace {

double apply(Func f, double x) {
    double r = 0.0;
    switch (f) {
    case Func::Sin: r = std::sin(x); break;
    case Func::Cos: r = std::cos(x); break;
    case Func::Tan: {
        double c = std::cos(x);
        if (c == 0.0) throw DomainError("tan at a pole");
        r = std::sin(x) / c;
        break;
    }
    case Func::Exp: r = std::exp(x); break;
    case Func::Log:
        if (!(x > 0.0)) throw DomainError("log of non-positive value");
        r = std::log(x);
        break;
    case Func::Sinh: r = std::sinh(x); break;
    case Func::Cosh: r = std::cosh(x); break;
    case Func::Tanh: r = std::tanh(x); break;
    case Func::Sqrt:
        if (x < 0.0) throw DomainError("sqrt of negative value");
        r = std::sqrt(x);
        break;
    }
    if (!std::isfinite(r)) throw DomainError(std::string("non-finite result in ") + func_name(f));
    return r;
}

Jet apply(Func f, const Jet& x) {
    switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Tanh: return tanh(x);
    case Func::Sqrt: return sqrt(x);
    }
    return x;
}

double eval_rec(const Expression& e, const Point4& p) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Decimal: return e.literal_value();
    case Kind::Variable: return p[static_cast<int>(e.coord())];
    case Kind::Neg: return -eval_rec(e.lhs(), p);
    case Kind::Add: return eval_rec(e.lhs(), p) + eval_rec(e.rhs(), p);
    case Kind::Sub: return eval_rec(e.lhs(), p) - eval_rec(e.rhs(), p);
    case Kind::Mul: return eval_rec(e.lhs(), p) * eval_rec(e.rhs(), p);
    case Kind::Div: {
        double d = eval_rec(e.rhs(), p);
        if (d == 0.0) throw DomainError("division by zero");
        return eval_rec(e.lhs(), p) / d;
    }
    case Kind::Pow: {
        double b = eval_rec(e.lhs(), p);
        if (b == 0.0 && e.exponent() < 0) throw DomainError("zero raised to a negative power");
        double r = std::pow(b, e.exponent());
        if (!std::isfinite(r)) throw DomainError("non-finite result in power");
        return r;
    }
    case Kind::Call: return apply(e.func(), eval_rec(e.lhs(), p));
    }
    return 0.0;
}

Jet jet_rec(const Expression& e, const Point4& p, int k) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Decimal: return Jet::constant(e.literal_value(), k);
    case Kind::Variable: {
        int c = static_cast<int>(e.coord());
        return Jet::variable(c, p[c], k);
    }
    case Kind::Neg: return -jet_rec(e.lhs(), p, k);
    case Kind::Add: return jet_rec(e.lhs(), p, k) + jet_rec(e.rhs(), p, k);
    case Kind::Sub: return jet_rec(e.lhs(), p, k) - jet_rec(e.rhs(), p, k);
    case Kind::Mul: return jet_rec(e.lhs(), p, k) * jet_rec(e.rhs(), p, k);
    case Kind::Div: return jet_rec(e.lhs(), p, k) / jet_rec(e.rhs(), p, k);
    case Kind::Pow: return ipow(jet_rec(e.lhs(), p, k), e.exponent());
    case Kind::Call: return apply(e.func(), jet_rec(e.lhs(), p, k));
    }
    return Jet(k);
}

} // namespace

double Expression::eval(const Point4& p) const { return eval_rec(*this, p); }

Jet Expression::jet(const Point4& p, int order) const {
    if (order < 0 || order > kMaxOrder)
        throw OrderError("derivative order " + std::to_string(order) + " outside 0..4");
    return jet_rec(*this, p, order);
}

Jet partials_up_to(const Expression& e, const Point4& p, int k) { return e.jet(p, k); }

// ------------------------------------------------------------------ printing

namespace {

// binding strength used to decide parenthesization
int prec(const Expression& e) {
    switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Rational: return (e.den() == 1 && e.num() >= 0) ? 5 : 0;
    case Kind::Decimal: return std::signbit(e.decimal_value()) ? 0 : 5;
    default: return 5;
    }
}

std::string format_decimal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void print_rec(const Expression& e, std::string& out);

void print_child(const Expression& c, bool parens, std::string& out) {
    if (parens) out += '(';
    print_rec(c, out);
    if (parens) out += ')';
}

void print_rec(const Expression& e, std::string& out) {
    switch (e.kind()) {
    case Kind::Rational:
        out += std::to_string(e.num());
        if (e.den() != 1) {
            out += '/';
            out += std::to_string(e.den());
        }
        return;
    case Kind::Decimal: out += format_decimal(e.decimal_value()); return;
    case Kind::Variable: out += coord_name(e.coord()); return;
    case Kind::Neg:
        out += '-';
        print_child(e.lhs(), prec(e.lhs()) < 4, out);
        return;
    case Kind::Pow:
        print_child(e.lhs(), prec(e.lhs()) < 5, out);
        out += '^';
        if (e.exponent() < 0) {
            out += '(' + std::to_string(e.exponent()) + ')';
        } else {
            out += std::to_string(e.exponent());
        }
        return;
    case Kind::Call:
        out += func_name(e.func());
        out += '(';
        print_rec(e.lhs(), out);
        out += ')';
        return;
    default: {
        const int p = prec(e);
        print_child(e.lhs(), prec(e.lhs()) < p, out);
        switch (e.kind()) {
        case Kind::Add: out += " + "; break;
        case Kind::Sub: out += " - "; break;
        case Kind::Mul: out += '*'; break;
        default: out += '/'; break;
        }
        print_child(e.rhs(), prec(e.rhs()) <= p, out);
        return;
    }
    }
}

} // namespace

std::string Expression::str() const {
    std::string out;
    print_rec(*this, out);
    return out;
}

// ------------------------------------------------------------------- folding

namespace {

bool both_rational(const Expression& a, const Expression& b) {
    return a.kind() == Kind::Rational && b.kind() == Kind::Rational;
}

bool both_literal(const Expression& a, const Expression& b) { return a.is_literal() && b.is_literal(); }

} // namespace

Expression operator+(const Expression& a, const Expression& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (both_rational(a, b)) {
        std::int64_t x, y, d, n;
        if (checked_mul(a.num(), b.den(), x) && checked_mul(b.num(), a.den(), y) &&
            checked_mul(a.den(), b.den(), d) && checked_add(x, y, n))
            return Expression::rational(n, d);
    }
    if (both_literal(a, b)) return Expression::decimal(a.literal_value() + b.literal_value());
    if (b.kind() == Kind::Neg) return Expression::binary(Kind::Sub, a, b.operand());
    return Expression::binary(Kind::Add, a, b);
}

Expression operator-(const Expression& a) {
    if (a.kind() == Kind::Rational) return Expression::rational(-a.num(), a.den());
    if (a.kind() == Kind::Decimal) return Expression::decimal(-a.decimal_value());
    if (a.kind() == Kind::Neg) return a.operand();
    return Expression::neg(a);
}

Expression operator-(const Expression& a, const Expression& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (both_literal(a, b)) return a + (-b);
    if (a.structurally_equal(b)) return Expression();
    if (b.kind() == Kind::Neg) return a + b.operand();
    return Expression::binary(Kind::Sub, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
    if (a.is_zero() || b.is_zero()) return Expression();
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    if (both_rational(a, b)) {
        std::int64_t n, d;
        if (checked_mul(a.num(), b.num(), n) && checked_mul(a.den(), b.den(), d))
            return Expression::rational(n, d);
    }
    if (both_literal(a, b)) return Expression::decimal(a.literal_value() * b.literal_value());
    if (a.kind() == Kind::Neg) return -(a.operand() * b);
    if (b.kind() == Kind::Neg) return -(a * b.operand());
    return Expression::binary(Kind::Mul, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
    if (b.is_zero()) throw DomainError("division by literal zero");
    if (a.is_zero()) return Expression();
    if (b.is_constant(1.0)) return a;
    if (both_rational(a, b)) {
        std::int64_t n, d;
        if (checked_mul(a.num(), b.den(), n) && checked_mul(a.den(), b.num(), d))
            return Expression::rational(n, d);
    }
    if (both_literal(a, b)) return Expression::decimal(a.literal_value() / b.literal_value());
    return Expression::binary(Kind::Div, a, b);
}

Expression fold_pow(const Expression& a, int n) {
    if (n == 0) return Expression(1);
    if (n == 1) return a;
    if (a.is_zero() && n > 0) return Expression();
    if (a.is_constant(1.0)) return a;
    return Expression::pow(a, n);
}

Expression fold_call(Func f, const Expression& a) { return Expression::call(f, a); }

// ------------------------------------------------------------ differentiation

Expression differentiate(const Expression& e, Coord c) {
    if (!e.depends_on(c)) return Expression();
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Decimal: return Expression();
    case Kind::Variable: return Expression(e.coord() == c ? 1 : 0);
    case Kind::Neg: return -differentiate(e.operand(), c);
    case Kind::Add: return differentiate(e.lhs(), c) + differentiate(e.rhs(), c);
    case Kind::Sub: return differentiate(e.lhs(), c) - differentiate(e.rhs(), c);
    case Kind::Mul:
        return differentiate(e.lhs(), c) * e.rhs() + e.lhs() * differentiate(e.rhs(), c);
    case Kind::Div: {
        const Expression& u = e.lhs();
        const Expression& v = e.rhs();
        Expression du = differentiate(u, c);
        Expression dv = differentiate(v, c);
        if (dv.is_zero()) return du / v;
        return (du * v - u * dv) / fold_pow(v, 2);
    }
    case Kind::Pow: {
        const int n = e.exponent();
        return Expression(n) * fold_pow(e.lhs(), n - 1) * differentiate(e.lhs(), c);
    }
    case Kind::Call: {
        const Expression& u = e.operand();
        Expression du = differentiate(u, c);
        switch (e.func()) {
        case Func::Sin: return fold_call(Func::Cos, u) * du;
        case Func::Cos: return -(fold_call(Func::Sin, u) * du);
        case Func::Tan: return du / fold_pow(fold_call(Func::Cos, u), 2);
        case Func::Exp: return e * du;
        case Func::Log: return du / u;
        case Func::Sinh: return fold_call(Func::Cosh, u) * du;
        case Func::Cosh: return fold_call(Func::Sinh, u) * du;
        case Func::Tanh: return du / fold_pow(fold_call(Func::Cosh, u), 2);
        case Func::Sqrt: return du / (Expression(2) * e);
        }
    }
    }
    return Expression();
}

} // namespace walkerlab
