#pragma once

#include <vector>

#include "finorth/errors.hpp"

namespace finorth::specfun {

// Gamma function for real non-pole arguments, Lanczos approximation with
// reflection for z < 1/2.  Throws PoleError at 0, -1, -2, ...
double gamma(double z);

// log Gamma(z) for z > 0.  Throws DomainError otherwise.
double log_gamma(double z);

// 1/Gamma(z); entire, equal to 0 at nonpositive integers.
double rgamma(double z);

// log|Gamma(z)| together with the sign of Gamma(z), valid at any non-pole
// real argument (reflection below 1/2).
struct SignedLog {
    double log = 0.0;
    int sign = 1; // -1, 0, +1; sign 0 means the overall value is exactly 0
};
SignedLog log_abs_gamma(double z);

// Ascending factorial (r)_k = r (r+1) ... (r+k-1); (r)_0 = 1.
double pochhammer(double r, int k);

// Beta function, l1 > 0 and l2 > 0.
double beta(double l1, double l2);

// sin(pi*x) computed with exact argument reduction at integers.
double sin_pi(double x);

struct SeriesDiagnostics {
    int terms_used = 1;
    double max_term_magnitude = 1.0;
    // max |term| / |result|, clamped to >= 1; large values flag cancellation.
    double cancellation_ratio = 1.0;
};

// Parameters of a generalized hypergeometric series pFq.  Construction
// validates that no denominator parameter reaches a nonpositive integer
// before the series terminates.
class HyperSeries {
public:
    HyperSeries(std::vector<double> numerator, std::vector<double> denominator);

    const std::vector<double>& numerator_params() const { return num_; }
    const std::vector<double>& denominator_params() const { return den_; }

    bool terminating() const { return termination_ >= 0; }
    // Index K of the last nonzero term for a terminating series, -1 otherwise.
    int termination_index() const { return termination_; }

private:
    std::vector<double> num_;
    std::vector<double> den_;
    int termination_ = -1;
};

struct HypResult {
    double value = 0.0;
    SeriesDiagnostics diag;
};

// Sum the series at argument z.  Terminating series are summed exactly over
// their finite support; non-terminating ones until two consecutive terms are
// below 1e-16 relative to the running sum, capped at 10000 terms
// (ConvergenceError).  p = q+1 requires |z| < 1 unless terminating; p > q+1
// is rejected unless terminating (DomainError).
HypResult hyp(const HyperSeries& series, double z);

// Convenience wrappers for the two shapes used throughout.
HypResult hyp_1f2(double a, double b1, double b2, double z);
HypResult hyp_0f2(double b1, double b2, double z);

} // namespace finorth::specfun
