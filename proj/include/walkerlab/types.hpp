#pragma once

#include <array>

namespace walkerlab {

using Point4 = std::array<double, 4>;
using Point2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline constexpr int kDim = 4;
inline constexpr int kMaxOrder = 4;

} // namespace walkerlab
