#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace optrec {

/// A point in R^N. Complex spaces are handled by interleaving real and
/// imaginary parts into a real vector of twice the length.
using Point = std::vector<double>;

/// Quantized measurement key: one integer bucket per coordinate of y.
using GroupKey = std::vector<long long>;

inline bool point_is_finite(const Point& p) {
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void validate_point(const Point& p, const char* what = "point") {
    if (p.empty())
        throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
    if (!point_is_finite(p))
        throw std::invalid_argument(std::string(what) + ": entries must be finite");
}

inline GroupKey quantize(const Point& y, double tol) {
    GroupKey k(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        k[i] = static_cast<long long>(std::floor(y[i] / tol + 0.5));
    return k;
}

}  // namespace optrec
