#include "walkerlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "walkerlab/errors.hpp"

namespace walkerlab {

namespace {

struct Tables {
    std::array<MultiIndex, Jet::kSlots> exps{};
    std::array<int, Jet::kSlots> deg{};
    std::array<double, Jet::kSlots> fact{};
    std::array<int, 625> lookup{};
    std::array<int, kMaxOrder + 2> count{};
    // product triples (i, j, k) with deg(i) + deg(j) = deg(k), grouped by deg(k)
    struct Triple { std::uint8_t i, j, k; };
    std::vector<Triple> triples;
    std::array<std::size_t, kMaxOrder + 2> triple_end{};
    // derivative map: for coord v and slot s of the result, source slot
    std::array<std::array<int, Jet::kSlots>, 4> dsrc{};

    Tables() {
        lookup.fill(-1);
        int n = 0;
        for (int d = 0; d <= kMaxOrder; ++d) {
            for (int a = d; a >= 0; --a)
                for (int b = d - a; b >= 0; --b)
                    for (int c = d - a - b; c >= 0; --c) {
                        int e = d - a - b - c;
                        exps[n] = {a, b, c, e};
                        deg[n] = d;
                        fact[n] = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) *
                                  std::tgamma(c + 1.0) * std::tgamma(e + 1.0);
                        lookup[key(exps[n])] = n;
                        ++n;
                    }
            count[d] = n;
        }
        for (int d = 0; d <= kMaxOrder; ++d) {
            for (int k = 0; k < Jet::kSlots; ++k) {
                if (deg[k] != d) continue;
                for (int i = 0; i < Jet::kSlots; ++i) {
                    if (deg[i] > d) break;
                    MultiIndex rest{};
                    bool ok = true;
                    for (int v = 0; v < 4; ++v) {
                        rest[v] = exps[k][v] - exps[i][v];
                        if (rest[v] < 0) ok = false;
                    }
                    if (!ok) continue;
                    int j = lookup[key(rest)];
                    triples.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                                       static_cast<std::uint8_t>(k)});
                }
            }
            triple_end[d] = triples.size();
        }
        for (int v = 0; v < 4; ++v)
            for (int s = 0; s < Jet::kSlots; ++s) {
                if (deg[s] >= kMaxOrder) {
                    dsrc[v][s] = -1;
                    continue;
                }
                MultiIndex up = exps[s];
                ++up[v];
                dsrc[v][s] = lookup[key(up)];
            }
    }

    static int key(const MultiIndex& a) { return ((a[0] * 5 + a[1]) * 5 + a[2]) * 5 + a[3]; }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

void check_order(int order) {
    if (order < 0 || order > kMaxOrder)
        throw OrderError("derivative order " + std::to_string(order) + " outside 0..4");
}

// Compose a univariate series sum_n d[n] h^n with h = x - x(0), truncated.
Jet compose(const Jet& x, const std::array<double, kMaxOrder + 1>& d) {
    const int K = x.order();
    Jet h = x;
    h.raw(0) = 0.0;
    Jet r = Jet::constant(d[K], K);
    for (int n = K - 1; n >= 0; --n) {
        r = r * h;
        r.raw(0) += d[n];
    }
    return r;
}

void require_finite(const Jet& r, const char* what) {
    if (!r.is_finite()) throw DomainError(std::string("non-finite result in ") + what);
}

} // namespace

namespace jet_tables {

int slots_for_order(int order) { return tables().count[order]; }
int degree(int slot) { return tables().deg[slot]; }
const MultiIndex& exponents(int slot) { return tables().exps[slot]; }
int index_of(const MultiIndex& alpha) {
    for (int a : alpha)
        if (a < 0 || a > kMaxOrder) return -1;
    return tables().lookup[Tables::key(alpha)];
}
double factorial_weight(int slot) { return tables().fact[slot]; }

} // namespace jet_tables

Jet::Jet(int order) : order_(order) { check_order(order); }

Jet Jet::constant(double v, int order) {
    Jet j(order);
    j.c_[0] = v;
    return j;
}

Jet Jet::variable(int coord, double at, int order) {
    Jet j(order);
    j.c_[0] = at;
    if (order > 0) j.c_[1 + coord] = 1.0;
    return j;
}

int Jet::size() const { return tables().count[order_]; }

double Jet::coeff(const MultiIndex& alpha) const {
    int s = jet_tables::index_of(alpha);
    if (s < 0 || tables().deg[s] > order_) throw OrderError("multi-index beyond jet order");
    return c_[s];
}

double& Jet::coeff_ref(const MultiIndex& alpha) {
    int s = jet_tables::index_of(alpha);
    if (s < 0 || tables().deg[s] > order_) throw OrderError("multi-index beyond jet order");
    return c_[s];
}

double Jet::partial(const MultiIndex& alpha) const {
    int s = jet_tables::index_of(alpha);
    if (s < 0 || tables().deg[s] > order_) throw OrderError("multi-index beyond jet order");
    return c_[s] * tables().fact[s];
}

double Jet::d(int i) const {
    MultiIndex a{};
    ++a[i];
    return partial(a);
}

double Jet::d(int i, int j) const {
    MultiIndex a{};
    ++a[i];
    ++a[j];
    return partial(a);
}

Jet Jet::derivative(int coord) const {
    if (order_ == 0) throw OrderError("derivative of an order-0 jet");
    const auto& t = tables();
    Jet r(order_ - 1);
    const int n = r.size();
    for (int s = 0; s < n; ++s) {
        int src = t.dsrc[coord][s];
        r.c_[s] = (t.exps[s][coord] + 1) * c_[src];
    }
    return r;
}

Jet Jet::truncated(int order) const {
    check_order(order);
    if (order > order_) throw OrderError("cannot raise jet order by truncation");
    Jet r(order);
    std::copy_n(c_.begin(), r.size(), r.c_.begin());
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.order_ < order_) order_ = o.order_;
    const int n = size();
    for (int s = 0; s < n; ++s) c_[s] += o.c_[s];
    for (int s = n; s < kSlots; ++s) c_[s] = 0.0;
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.order_ < order_) order_ = o.order_;
    const int n = size();
    for (int s = 0; s < n; ++s) c_[s] -= o.c_[s];
    for (int s = n; s < kSlots; ++s) c_[s] = 0.0;
    return *this;
}

Jet& Jet::operator*=(double s) {
    const int n = size();
    for (int k = 0; k < n; ++k) c_[k] *= s;
    return *this;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    r *= -1.0;
    return r;
}

void fma_into(Jet& acc, const Jet& a, const Jet& b, double scale) {
    const int K = std::min({acc.order_, a.order_, b.order_});
    if (K < acc.order_) {
        for (int s = tables().count[K]; s < Jet::kSlots; ++s) acc.c_[s] = 0.0;
        acc.order_ = K;
    }
    const auto& t = tables();
    const std::size_t end = t.triple_end[K];
    for (std::size_t q = 0; q < end; ++q) {
        const auto& tr = t.triples[q];
        acc.c_[tr.k] += scale * a.c_[tr.i] * b.c_[tr.j];
    }
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    fma_into(r, a, b);
    return r;
}

Jet reciprocal(const Jet& x) {
    const double x0 = x.value();
    if (x0 == 0.0) throw DomainError("division by zero");
    std::array<double, kMaxOrder + 1> d{};
    double p = 1.0 / x0;
    for (int n = 0; n <= kMaxOrder; ++n) {
        d[n] = (n % 2 == 0 ? 1.0 : -1.0) * p;
        p /= x0;
    }
    Jet r = compose(x, d);
    require_finite(r, "division");
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet ipow(const Jet& x, int n) {
    if (n == 0) return Jet::constant(1.0, x.order());
    if (n < 0) {
        if (x.value() == 0.0) throw DomainError("zero raised to a negative power");
        return ipow(reciprocal(x), -n);
    }
    Jet result = Jet::constant(1.0, x.order());
    Jet base = x;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    require_finite(result, "power");
    return result;
}

Jet exp(const Jet& x) {
    std::array<double, kMaxOrder + 1> d{};
    const double e = std::exp(x.value());
    double f = 1.0;
    for (int n = 0; n <= kMaxOrder; ++n) {
        if (n > 0) f *= n;
        d[n] = e / f;
    }
    Jet r = compose(x, d);
    require_finite(r, "exp");
    return r;
}

Jet log(const Jet& x) {
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw DomainError("log of non-positive value");
    std::array<double, kMaxOrder + 1> d{};
    d[0] = std::log(x0);
    double p = x0;
    for (int n = 1; n <= kMaxOrder; ++n) {
        d[n] = (n % 2 == 1 ? 1.0 : -1.0) / (n * p);
        p *= x0;
    }
    return compose(x, d);
}

namespace {

// sin/cos style series: derivatives cycle with period 4 (sign) or 2 (hyperbolic)
std::array<double, kMaxOrder + 1> trig_coeffs(double s, double c, bool hyperbolic, bool start_with_sin) {
    std::array<double, kMaxOrder + 1> d{};
    double f = 1.0;
    for (int n = 0; n <= kMaxOrder; ++n) {
        if (n > 0) f *= n;
        double v;
        if (hyperbolic) {
            v = ((n % 2 == 0) == start_with_sin) ? s : c;
        } else {
            // derivatives of sin: sin, cos, -sin, -cos
            const int k = (n + (start_with_sin ? 0 : 1)) % 4;
            v = (k == 0) ? s : (k == 1) ? c : (k == 2) ? -s : -c;
        }
        d[n] = v / f;
    }
    return d;
}

} // namespace

Jet sin(const Jet& x) {
    return compose(x, trig_coeffs(std::sin(x.value()), std::cos(x.value()), false, true));
}

Jet cos(const Jet& x) {
    return compose(x, trig_coeffs(std::sin(x.value()), std::cos(x.value()), false, false));
}

Jet tan(const Jet& x) { return sin(x) / cos(x); }

Jet sinh(const Jet& x) {
    Jet r = compose(x, trig_coeffs(std::sinh(x.value()), std::cosh(x.value()), true, true));
    require_finite(r, "sinh");
    return r;
}

Jet cosh(const Jet& x) {
    Jet r = compose(x, trig_coeffs(std::sinh(x.value()), std::cosh(x.value()), true, false));
    require_finite(r, "cosh");
    return r;
}

Jet tanh(const Jet& x) { return sinh(x) / cosh(x); }

Jet sqrt(const Jet& x) {
    const double x0 = x.value();
    if (x0 < 0.0) throw DomainError("sqrt of negative value");
    if (x0 == 0.0 && x.order() > 0) throw DomainError("sqrt is not differentiable at 0");
    std::array<double, kMaxOrder + 1> d{};
    // binomial(1/2, n) * x0^(1/2 - n)
    double binom = 1.0;
    double p = std::sqrt(x0);
    for (int n = 0; n <= kMaxOrder; ++n) {
        d[n] = binom * p;
        binom *= (0.5 - n) / (n + 1);
        if (x0 != 0.0) p /= x0;
    }
    return compose(x, d);
}

bool Jet::is_finite() const {
    const int n = size();
    for (int s = 0; s < n; ++s)
        if (!std::isfinite(c_[s])) return false;
    return true;
}

} // namespace walkerlab
