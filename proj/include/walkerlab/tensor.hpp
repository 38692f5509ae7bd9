#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "walkerlab/jet.hpp"
#include "walkerlab/types.hpp"

namespace walkerlab {

/// Dense tensor over the index range {0..N-1} with a variance signature.
///
/// Components are stored with the first index most significant. The
/// signature only records counts; index order is (upper..., lower...).
template <class T, int N = kDim>
class BasicTensor {
public:
    BasicTensor() = default;
    BasicTensor(int up, int down, const T& fill = T())
        : up_(up), down_(down), data_(ipow(N, up + down), fill) {}

    int up() const { return up_; }
    int down() const { return down_; }
    int rank() const { return up_ + down_; }
    std::size_t size() const { return data_.size(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    template <class... I>
    T& operator()(I... idx) { return data_[offset(idx...)]; }
    template <class... I>
    const T& operator()(I... idx) const { return data_[offset(idx...)]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    Point4 point{};

private:
    int up_ = 0;
    int down_ = 0;
    std::vector<T> data_;

    static std::size_t ipow(int b, int e) {
        std::size_t r = 1;
        while (e-- > 0) r *= static_cast<std::size_t>(b);
        return r;
    }

    template <class... I>
    std::size_t offset(I... idx) const {
        if (sizeof...(I) != static_cast<std::size_t>(up_ + down_))
            throw std::out_of_range("tensor index count does not match rank");
        std::size_t o = 0;
        ((o = o * N + static_cast<std::size_t>(idx)), ...);
        return o;
    }
};

using TensorValue = BasicTensor<double>;
using JetTensor = BasicTensor<Jet>;

/// Max absolute component.
inline double max_abs(const TensorValue& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::fmax(m, std::fabs(v));
    return m;
}

inline TensorValue values_of(const JetTensor& t) {
    TensorValue r(t.up(), t.down());
    r.point = t.point;
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].value();
    return r;
}

} // namespace walkerlab
