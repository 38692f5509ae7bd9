#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "walkerlab/jet.hpp"
#include "walkerlab/types.hpp"

namespace walkerlab {

enum class Coord : std::uint8_t { X1 = 0, X2 = 1, XP1 = 2, XP2 = 3 };
enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sinh, Cosh, Tanh, Sqrt };

const char* coord_name(Coord c);
const char* func_name(Func f);

/// Immutable expression tree over the chart coordinates x1, x2, xp1, xp2.
///
/// Copies share nodes. Construction through the static factories keeps the tree
/// exactly as given; the arithmetic operators fold trivial constants (0 + e,
/// 1 * e, literal arithmetic) and are meant for programmatic construction.
class Expression {
public:
    enum class Kind : std::uint8_t { Rational, Decimal, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

    Expression(); // rational 0
    Expression(long long v); // NOLINT: integer literal

    static Expression rational(std::int64_t num, std::int64_t den = 1);
    static Expression decimal(double v);
    static Expression variable(Coord c);
    static Expression neg(Expression a);
    static Expression binary(Kind k, Expression a, Expression b);
    static Expression pow(Expression base, int exponent);
    static Expression call(Func f, Expression arg);

    Kind kind() const;
    std::int64_t num() const;
    std::int64_t den() const;
    double decimal_value() const;
    Coord coord() const;
    Func func() const;
    int exponent() const;
    const Expression& lhs() const;
    const Expression& rhs() const;
    const Expression& operand() const { return lhs(); }

    bool is_literal() const;
    /// literal with value v (rational or decimal)
    bool is_constant(double v) const;
    bool is_zero() const { return is_constant(0.0); }
    /// numeric value when the tree is a literal
    double literal_value() const;

    bool depends_on(Coord c) const;
    bool structurally_equal(const Expression& o) const;
    friend bool operator==(const Expression& a, const Expression& b) { return a.structurally_equal(b); }

    double eval(const Point4& p) const;
    Jet jet(const Point4& p, int order) const;

    std::string str() const;

    struct Node;

private:
    struct NullTag {};
    explicit Expression(NullTag) {}
    explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

Expression parse(std::string_view text);

/// All partial derivatives up to order k at p (k <= 4).
Jet partials_up_to(const Expression& e, const Point4& p, int k);

/// Symbolic derivative with light constant folding.
Expression differentiate(const Expression& e, Coord c);

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression fold_pow(const Expression& a, int n);
Expression fold_call(Func f, const Expression& a);

inline Expression var(Coord c) { return Expression::variable(c); }

} // namespace walkerlab
