#pragma once

#include "finorth/errors.hpp"
#include "finorth/specfun.hpp"
#include "finorth/sympoly.hpp"
#include "finorth/util.hpp"

namespace finorth::fourier {

using sympoly::BParamSource;

// Parameters of the A-side transformed function family (degree n plus the
// four reals p1..p4).  Construction checks that the Pochhammer denominators
// of the finite k-sum never vanish.
struct FnASpec {
    int n = 0;
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;

    FnASpec(int n_, double p1_, double p2_, double p3_, double p4_);
};

// B-side analogue (degree n plus q1, q2); denominator validation depends on
// the chosen coefficient parameterization, so it happens at evaluation.
struct FnBSpec {
    int n = 0;
    double q1 = 0, q2 = 0;
};

// Function value with series diagnostics; `untrusted` is set when the
// cancellation ratio exceeds 1e8.
struct FnValue {
    double value = 0.0;
    specfun::SeriesDiagnostics diag;
    bool untrusted = false;
};

// Closed-form Fourier transform of |x|^{n-2k-2*alpha} (1+x^2)^{-beta}:
// Gamma prefactors times (-is)^{n mod 2} times a 1F2 in s^2/4.  Real for
// even n, purely imaginary for odd n.
TransformValue kernel_a(double s, double alpha, double beta, int n, int k);

// Closed-form Fourier transform of |x|^{n-2k-2a} exp(-1/(2x^2)): a power of
// two and a Gamma factor times (-is)^{n mod 2} times a 0F2 in s^2/8.
TransformValue kernel_b(double s, double a, int n, int k);

// The A-side symmetric special function: finite k-sum of 1F2 values with the
// parity prefactor x^{n mod 2}.
double fn_a(const FnASpec& spec, double x);
FnValue fn_a_full(const FnASpec& spec, double x);

// The B-side symmetric special function: finite k-sum of 0F2 values.  The
// coefficient parameterization follows `source` (printed vs derived).
double fn_b(const FnBSpec& spec, double x, BParamSource source = BParamSource::printed);
FnValue fn_b_full(const FnBSpec& spec, double x, BParamSource source = BParamSource::printed);

// Scalar prefactors linking fn_a / fn_b to the transforms of the weighted
// polynomials; may be negative.  Throws PoleError at Gamma poles.
double prefactor_a(int n, double alpha, double beta);
double prefactor_b(int n, double a);

// Entire reciprocals of the prefactors (0 where the prefactor has a pole).
double rprefactor_a(int n, double alpha, double beta);
double rprefactor_b(int n, double a);

// Transform of |x|^{-2 alpha} (1+x^2)^{-beta} A_n^{(c,d)}(x): prefactor_a
// times (-i)^{n mod 2} times fn_a(s; alpha, beta, c, d).
TransformValue transform_a_closed(int n, double alpha, double beta, double c, double d,
                                  double s);

// Same value assembled the long way: polynomial coefficients against
// kernel_a.  Used as an internal consistency check.
TransformValue transform_a_kernel_sum(int n, double alpha, double beta, double c, double d,
                                      double s);

// Transform of |x|^{-2a} exp(-1/(2x^2)) B_n^{(b)}(x) and its kernel-sum twin.
TransformValue transform_b_closed(int n, double a, double b, double s,
                                  BParamSource source = BParamSource::printed);
TransformValue transform_b_kernel_sum(int n, double a, double b, double s,
                                      BParamSource source = BParamSource::printed);

// Theoretical squared-norm right sides of the two pairing orthogonality
// relations, computed in log space with sign tracking.  Denominator Gamma
// poles give exact zeros (reciprocal-Gamma semantics); numerator poles throw
// PoleError.  ConstraintError unless the advisory parameter constraints hold
// or override is set.
double theorem1_rhs(int n, double alpha, double beta, double p, double q,
                    bool override_constraints = false);
double theorem2_rhs(int n, double a, double b, bool override_constraints = false);

} // namespace finorth::fourier
