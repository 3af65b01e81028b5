#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hypereig {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Zero-based vertex labels; external text formats are one-based.
using MultiIndex = std::vector<int>;

inline constexpr double kDefaultEqualityTol = 1e-12;

}  // namespace hypereig
