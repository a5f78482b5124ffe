#pragma once

#include <functional>
#include <vector>

#include "finorth/errors.hpp"
#include "finorth/util.hpp"

namespace finorth::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

enum class DecayClass { polynomial, super_exponential };

// An integrand on the real line (or half line) together with the tail and
// origin metadata the oscillatory engine needs to pick a strategy.
struct Integrand {
    std::function<double(double)> f;
    double singular_exponent_at_zero = 0.0; // f ~ |x|^sigma near 0, sigma > -1
    DecayClass decay_class = DecayClass::polynomial;
    double polynomial_decay_rate = 2.0; // |f| ~ |x|^{-rate} for polynomial tails

    Integrand(std::function<double(double)> fn, double sigma,
              DecayClass decay = DecayClass::polynomial, double rate = 2.0);

    // Same, but samples the evaluator tail and rejects grossly inconsistent
    // rate metadata.
    static Integrand checked(std::function<double(double)> fn, double sigma,
                             DecayClass decay, double rate);
};

// Double-exponential (exp-sinh) quadrature over [0, inf).  tol is relative
// with tol*abs_scale as the absolute floor; level cap 12, NonConvergence
// beyond it.
QuadResult integrate_semi(const Integrand& f, double tol, double abs_scale = 1.0);

// Same over the whole line, split at 0 so origin singularities sit at a map
// endpoint.
QuadResult integrate_line(const Integrand& f, double tol, double abs_scale = 1.0);

// tanh-sinh rule on [a, b]; tolerant of integrable endpoint singularities.
QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            double tol, double abs_scale = 1.0);

enum class Parity { even, odd };

struct FourierResult {
    TransformValue value;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Fourier transform int e^{-isx} f(x) dx of a function of definite parity:
// even f gives 2 int_0^inf cos(sx) f dx (real), odd f gives
// -2i int_0^inf sin(sx) f dx (imaginary).  Polynomial-decay tails are
// integrated between consecutive oscillator zeros and the alternating
// partial sums accelerated by iterated Aitken; super-exponential tails are
// truncated at a sampled bound.  abs_floor is the absolute accuracy below
// which the value is considered settled regardless of its relative error
// (transforms deep in their decay regime underflow any relative target).
// Throws ParityViolation if sampled values contradict the declared parity,
// NonConvergence on failure.
FourierResult fourier_numeric_full(const Integrand& f, Parity parity, double s, double tol,
                                   double abs_floor = 0.0);
TransformValue fourier_numeric(const Integrand& f, Parity parity, double s, double tol,
                               double abs_floor = 0.0);

// Iterated Aitken delta-squared limit of a sequence of partial sums; the
// error estimate reflects inter-level agreement.  Exposed for tests.
double aitken_extrapolate(const std::vector<double>& partial_sums, double* err_estimate);

} // namespace finorth::quad
