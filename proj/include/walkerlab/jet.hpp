#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "walkerlab/types.hpp"

namespace walkerlab {

using MultiIndex = std::array<int, 4>;

/// Truncated Taylor polynomial in the four chart coordinates about a base point.
///
/// Coefficients are stored in graded-lexicographic order, one slot per
/// multi-index alpha with |alpha| <= order. The coefficient c_alpha relates to
/// the partial derivative by  d^alpha f = alpha! * c_alpha.
///
/// Arithmetic between jets of different order truncates to the smaller one.
class Jet {
public:
    static constexpr int kSlots = 70;

    Jet() = default;
    explicit Jet(int order);

    static Jet constant(double v, int order = kMaxOrder);
    static Jet variable(int coord, double at, int order);

    int order() const { return order_; }
    double value() const { return c_[0]; }

    double coeff(const MultiIndex& alpha) const;
    double& coeff_ref(const MultiIndex& alpha);
    std::span<const double> coeffs() const { return {c_.data(), static_cast<std::size_t>(size())}; }
    double raw(int slot) const { return c_[slot]; }
    double& raw(int slot) { return c_[slot]; }
    int size() const;

    /// d^alpha f at the base point.
    double partial(const MultiIndex& alpha) const;
    double d(int i) const;
    double d(int i, int j) const;

    /// Exact derivative as a jet of order - 1.
    Jet derivative(int coord) const;
    Jet truncated(int order) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s) { c_[0] += s; return *this; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator-(const Jet& a);

    bool is_finite() const;

    friend void fma_into(Jet& acc, const Jet& a, const Jet& b, double scale);

private:
    int order_ = 0;
    std::array<double, kSlots> c_{};
};

/// Multiply-accumulate: acc += a * b (avoids a temporary).
void fma_into(Jet& acc, const Jet& a, const Jet& b, double scale = 1.0);

Jet reciprocal(const Jet& x);
Jet ipow(const Jet& x, int n);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet tanh(const Jet& x);
Jet sqrt(const Jet& x);

namespace jet_tables {

int slots_for_order(int order);
int degree(int slot);
const MultiIndex& exponents(int slot);
int index_of(const MultiIndex& alpha);
double factorial_weight(int slot); // alpha!

} // namespace jet_tables

} // namespace walkerlab
