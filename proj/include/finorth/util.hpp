#pragma once

#include <cmath>

namespace finorth {

inline constexpr double pi = 3.14159265358979323846;

// floor((n+1)/2); with half_floor below, their difference is (1-(-1)^n)/2.
inline int half_ceil(int n) { return (n + 1) / 2; }
inline int half_floor(int n) { return n / 2; }

// 0 for even n, 1 for odd n.
inline int parity(int n) { return n & 1; }

// (-1)^n without calling pow.
inline double sign_pow(int n) { return (n & 1) ? -1.0 : 1.0; }

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
    if (x > 0.5) return false;
    double r = std::round(x);
    return r <= 0.0 && std::abs(x - r) <= tol * std::max(1.0, std::abs(x));
}

inline bool is_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}

// Value of a Fourier transform at one s.  For even-parity inputs the
// transform is real; for odd-parity inputs it is purely imaginary.
struct TransformValue {
    double re = 0.0;
    double im = 0.0;

    double abs() const { return std::hypot(re, im); }
};

inline TransformValue operator+(TransformValue a, TransformValue b) {
    return {a.re + b.re, a.im + b.im};
}
inline TransformValue operator*(double c, TransformValue v) {
    return {c * v.re, c * v.im};
}

} // namespace finorth
