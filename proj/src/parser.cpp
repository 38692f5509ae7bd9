#include <cctype>
#include <charconv>
#include <cstring>
#include <optional>

#include "walkerlab/errors.hpp"
#include "walkerlab/expr.hpp"

namespace walkerlab {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i];
    }
    return s;
}

const std::vector<std::string>& operand_start() {
    static const std::vector<std::string> v{"number", "variable", "function", "'('", "'-'"};
    return v;
}

std::optional<Coord> lookup_coord(std::string_view id) {
    if (id == "x1" || id == "u1") return Coord::X1;
    if (id == "x2" || id == "u2") return Coord::X2;
    if (id == "xp1" || id == "up1") return Coord::XP1;
    if (id == "xp2" || id == "up2") return Coord::XP2;
    return std::nullopt;
}

std::optional<Func> lookup_func(std::string_view id) {
    static const std::pair<const char*, Func> table[] = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
        {"exp", Func::Exp},   {"log", Func::Log},   {"sinh", Func::Sinh},
        {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"sqrt", Func::Sqrt},
    };
    for (const auto& [name, f] : table)
        if (id == name) return f;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expression run() {
        Expression e = expression();
        skip_ws();
        if (pos_ != s_.size()) {
            fail({"operator", "end of input"}, "unexpected character '" + std::string(1, s_[pos_]) + "'");
        }
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) {
        throw ParseError(pos_, std::move(expected),
                         "syntax error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expression expression() {
        Expression lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expression::binary(Expression::Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = Expression::binary(Expression::Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expression term() {
        Expression lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expression::binary(Expression::Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                Expression rhs = unary();
                if (is_int_literal(lhs) && is_int_literal(rhs) && rhs.num() != 0) {
                    lhs = Expression::rational(lhs.num(), rhs.num());
                } else {
                    lhs = Expression::binary(Expression::Kind::Div, lhs, rhs);
                }
            } else {
                return lhs;
            }
        }
    }

    static bool is_int_literal(const Expression& e) {
        return e.kind() == Expression::Kind::Rational && e.den() == 1;
    }

    Expression unary() {
        if (accept('-')) return Expression::neg(unary());
        return power();
    }

    Expression power() {
        Expression base = primary();
        while (accept('^')) base = Expression::pow(base, exponent());
        return base;
    }

    int exponent() {
        skip_ws();
        bool paren = accept('(');
        skip_ws();
        int sign = 1;
        if (accept('-')) {
            sign = -1;
        } else {
            accept('+');
        }
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) {
            pos_ = start;
            fail({"integer exponent"}, "exponent of '^' must be an integer literal");
        }
        int v = 0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        (void)p;
        if (ec != std::errc()) {
            pos_ = start;
            fail({"integer exponent"}, "exponent out of range");
        }
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
            fail({"integer exponent"}, "exponent of '^' must be an integer literal");
        }
        if (paren && !accept(')')) fail({"')'"}, "missing ')' after exponent");
        return sign * v;
    }

    Expression primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail(operand_start(), "unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expression e = expression();
            if (!accept(')')) fail({"')'", "operator"}, "missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(operand_start(), "unexpected character '" + std::string(1, c) + "'");
    }

    Expression number() {
        const std::size_t start = pos_;
        bool is_decimal = false;
        auto digits = [&] {
            std::size_t b = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return pos_ - b;
        };
        std::size_t int_digits = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            is_decimal = true;
            ++pos_;
            if (digits() == 0 && int_digits == 0) {
                pos_ = start;
                fail({"number"}, "malformed number");
            }
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = save + 1;
                fail({"digit"}, "malformed exponent in number");
            }
            is_decimal = true;
        }
        const char* b = s_.data() + start;
        const char* e = s_.data() + pos_;
        if (is_decimal) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || p != e) {
                pos_ = start;
                fail({"number"}, "decimal literal out of range");
            }
            return Expression::decimal(v);
        }
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) {
            pos_ = start;
            fail({"number"}, "integer literal out of range");
        }
        return Expression::rational(v, 1);
    }

    Expression identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string_view id = s_.substr(start, pos_ - start);
        if (auto c = lookup_coord(id)) return Expression::variable(*c);
        if (auto f = lookup_func(id)) {
            if (!accept('(')) fail({"'('"}, "function '" + std::string(id) + "' needs an argument in parentheses");
            Expression arg = expression();
            if (!accept(')')) fail({"')'", "operator"}, "missing ')'");
            return Expression::call(*f, arg);
        }
        throw UnknownIdentifierError(start, std::string(id));
    }
};

} // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : Error(expected.empty() ? what : what + " (expected: " + join(expected) + ")"),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(std::size_t offset, std::string name)
    : ParseError(offset, {"x1", "x2", "xp1", "xp2", "u1", "u2", "up1", "up2", "function"},
                 "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)) {}

Expression parse(std::string_view text) { return Parser(text).run(); }

} // namespace walkerlab
