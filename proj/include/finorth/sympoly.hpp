#pragma once

#include <string>
#include <vector>

#include "finorth/errors.hpp"

namespace finorth::sympoly {

// Coefficients (p, q, r, s) of the symmetric Pearson-type weight; the four
// reals fully determine the symmetric polynomial class below.
struct SymParams {
    double p = 0, q = 0, r = 0, s = 0;
};

// A symmetric polynomial of degree n: coefficients in ascending power order,
// with entries of opposite parity identically zero, so P(-x) = (-1)^n P(x).
class SymPoly {
public:
    SymPoly(int degree, std::vector<double> ascending_coeffs);

    int degree() const { return degree_; }
    int parity() const { return degree_ & 1; }
    bool monic() const { return coeffs_.back() == 1.0; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double leading() const { return coeffs_.back(); }

    double operator()(double x) const;

    // Coefficient-level derivative (exact).
    std::vector<double> derivative_coeffs() const;

    // log|P(x)| and sign, stable for |x| far outside [1e-60, 1e60] where the
    // dominant monomial is used directly.
    struct LogAbs {
        double log;
        int sign;
    };
    LogAbs log_abs_eval(double x) const;

private:
    int degree_;
    std::vector<double> coeffs_;
};

// Expansion of the symmetric polynomial class from its four weight
// parameters; coefficients are built by accumulating the product ratio
// incrementally.  The leading coefficient is generally not 1.
SymPoly symmetric_poly(const SymParams& params, int n);

// Divide by the leading coefficient.  DegenerateError if it vanishes.
SymPoly monic(const SymPoly& poly);

// Weight |x|^{-2a} (1+x^2)^{-b} on the real line.
struct FamilyAParams {
    double a = 0, b = 0;
};

// Weight |x|^{-2a} exp(-1/x^2) on the real line.
struct FamilyBParams {
    double a = 0;
};

struct ValidationItem {
    std::string name;
    bool pass;
    std::string detail;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationItem> items;

    std::string failures() const;
};

// Per-constraint pass/fail for orthogonality up to degree max_degree; never
// throws.
ValidationReport validate(const FamilyAParams& params, int max_degree);
ValidationReport validate(const FamilyBParams& params, int max_degree);

SymParams family_a_sym_params(const FamilyAParams& params); // (1, 1, -2a-2b+2, -2a)
SymParams family_b_sym_params(const FamilyBParams& params); // (1, 0, -2a+2, 2)

// Monic family polynomials built from the symmetric-class expansion.
// ConstraintError if validation fails and override is not set.
SymPoly family_a(const FamilyAParams& params, int n, bool override_validation = false);
SymPoly family_b(const FamilyBParams& params, int n, bool override_validation = false);

// Independent construction of family A through its terminating 2F1
// representation; used as a cross-check against the expansion route.
SymPoly family_a_hyp(const FamilyAParams& params, int n, bool override_validation = false);

// The printed hypergeometric form of family B and the parameterization
// derived from the series expansion disagree for n >= 2; both are exposed and
// the ODE residual arbitrates.  `derived` uses lower parameter
// a - 2*floor(n/2) + (-1)^n/2, `printed` uses a + (-1)^n/2.
enum class BParamSource { printed, derived };
SymPoly family_b_hyp(const FamilyBParams& params, int n, BParamSource source,
                     bool override_validation = false);

// Residual of the symmetric Sturm-Liouville equation
//   x^2 (p x^2 + q) P'' + x (r x^2 + s) P' - (n (r + (n-1) p) x^2
//     + (1 - (-1)^n) s / 2) P
// at the point x, with exact coefficient differentiation.
double ode_residual(const SymParams& params, const SymPoly& poly, double x);

// Norm-product factors of the two families.
double cj_a(double a, double b, int j);
double cj_b(double a, int j);

// Squared norms: (-1)^n prod_j c_j times the base weight integral, computed
// in log space with sign tracking.
double norm_sq_a(double a, double b, int n, bool override_validation = false);
double norm_sq_b(double a, int n, bool override_validation = false);

} // namespace finorth::sympoly
