#pragma once

// Exact rational-arithmetic oracles used by the tests: coefficient expansion
// of the symmetric polynomial class and partial sums of hypergeometric
// series, both independent of the double-precision code paths they check.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

inline Rational binom(int n, int k) {
    Rational v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// Ascending coefficients of the symmetric class polynomial for exact
// parameters (p, q, r, s).
inline std::vector<Rational> symmetric_coeffs(const Rational& p, const Rational& q,
                                              const Rational& r, const Rational& s, int n) {
    const int m = n / 2;
    const int e = (n % 2 == 0) ? -1 : 1; // (-1)^{n+1}
    std::vector<Rational> prod(m + 1);
    prod[0] = 1;
    for (int i = 0; i < m; ++i) {
        Rational den = Rational(2 * i + e + 2) * q + s;
        Rational num = Rational(2 * i + e + 2 * m) * p + r;
        prod[i + 1] = prod[i] * num / den;
    }
    std::vector<Rational> coeffs(n + 1, Rational(0));
    for (int k = 0; k <= m; ++k) coeffs[n - 2 * k] = binom(m, k) * prod[m - k];
    return coeffs;
}

inline std::vector<Rational> monic(std::vector<Rational> coeffs) {
    Rational lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;
    return coeffs;
}

// Partial sum of pFq over the first `terms` terms (or through the
// termination index, whichever is smaller is up to the caller).
inline Rational pfq_partial(const std::vector<Rational>& num, const std::vector<Rational>& den,
                            const Rational& z, int terms) {
    Rational sum = 0;
    Rational term = 1;
    for (int k = 0; k < terms; ++k) {
        sum += term;
        Rational ratio = z / (k + 1);
        for (const auto& a : num) ratio *= a + k;
        for (const auto& b : den) ratio /= b + k;
        term *= ratio;
    }
    return sum;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace oracle
