#include "finorth/sympoly.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "finorth/specfun.hpp"
#include "finorth/util.hpp"

namespace finorth::sympoly {

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return std::round(v);
}

void check_or_throw(const ValidationReport& report, const char* what) {
    if (!report.pass) {
        std::ostringstream os;
        os << what << " validation failed: " << report.failures();
        throw ConstraintError(os.str());
    }
}

} // namespace

SymPoly::SymPoly(int degree, std::vector<double> ascending_coeffs)
    : degree_(degree), coeffs_(std::move(ascending_coeffs)) {
    if (degree_ < 0 || coeffs_.size() != static_cast<size_t>(degree_) + 1)
        throw DomainError("SymPoly: coefficient count must be degree + 1");
    for (int j = 0; j <= degree_; ++j) {
        if (((j ^ degree_) & 1) && coeffs_[j] != 0.0)
            throw DomainError("SymPoly: nonzero coefficient of opposite parity");
    }
}

double SymPoly::operator()(double x) const {
    double v = 0.0;
    for (int j = degree_; j >= 0; --j) v = v * x + coeffs_[j];
    return v;
}

std::vector<double> SymPoly::derivative_coeffs() const {
    if (degree_ == 0) return {0.0};
    std::vector<double> d(degree_);
    for (int j = 1; j <= degree_; ++j) d[j - 1] = j * coeffs_[j];
    return d;
}

SymPoly::LogAbs SymPoly::log_abs_eval(double x) const {
    double ax = std::abs(x);
    if (ax >= 1e-60 && ax <= 1e60) {
        double v = (*this)(x);
        if (v == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }
    // dominant monomial: highest power for large |x|, lowest for small
    int j = degree_;
    if (ax < 1.0) {
        j = parity();
        while (j <= degree_ && coeffs_[j] == 0.0) j += 2;
        if (j > degree_) return {-std::numeric_limits<double>::infinity(), 0};
    }
    double c = coeffs_[j];
    int sign = (c > 0 ? 1 : -1) * ((j % 2 == 1 && x < 0) ? -1 : 1);
    return {std::log(std::abs(c)) + j * std::log(ax), sign};
}

SymPoly symmetric_poly(const SymParams& params, int n) {
    const int m = half_floor(n);
    const double e = sign_pow(n + 1); // (-1)^{n+1}

    // cumulative products of the ratio terms
    std::vector<double> prod(m + 1);
    prod[0] = 1.0;
    for (int i = 0; i < m; ++i) {
        double den = (2.0 * i + e + 2.0) * params.q + params.s;
        if (den == 0.0) {
            std::ostringstream os;
            os << "symmetric_poly: vanishing product denominator at i = " << i;
            throw SingularParamError(os.str());
        }
        double num = (2.0 * i + e + 2.0 * m) * params.p + params.r;
        prod[i + 1] = prod[i] * (num / den);
    }

    std::vector<double> coeffs(n + 1, 0.0);
    for (int k = 0; k <= m; ++k) coeffs[n - 2 * k] = binom(m, k) * prod[m - k];
    return SymPoly(n, std::move(coeffs));
}

SymPoly monic(const SymPoly& poly) {
    double lead = poly.leading();
    if (lead == 0.0) throw DegenerateError("monic: leading coefficient vanishes");
    std::vector<double> c = poly.coeffs();
    for (double& v : c) v /= lead;
    c.back() = 1.0;
    return SymPoly(poly.degree(), std::move(c));
}

std::string ValidationReport::failures() const {
    std::string out;
    for (const auto& item : items) {
        if (item.pass) continue;
        if (!out.empty()) out += "; ";
        out += item.name + " (" + item.detail + ")";
    }
    return out;
}

ValidationReport validate(const FamilyAParams& params, int max_degree) {
    ValidationReport report;
    auto add = [&](std::string name, bool pass, std::string detail) {
        report.pass = report.pass && pass;
        report.items.push_back({std::move(name), pass, std::move(detail)});
    };
    std::ostringstream os;
    os << "need N <= a+b-1/2, have N = " << max_degree << ", a+b-1/2 = "
       << params.a + params.b - 0.5;
    add("degree_bound", max_degree <= params.a + params.b - 0.5 + 1e-12, os.str());
    add("a_bound", params.a < 0.5, "need a < 1/2");
    add("b_positive", params.b > 0.0, "need b > 0");
    add("evenness", is_integer(params.a), "need 2a to be an even integer");
    return report;
}

ValidationReport validate(const FamilyBParams& params, int max_degree) {
    ValidationReport report;
    auto add = [&](std::string name, bool pass, std::string detail) {
        report.pass = report.pass && pass;
        report.items.push_back({std::move(name), pass, std::move(detail)});
    };
    std::ostringstream os;
    os << "need N <= a-1/2, have N = " << max_degree << ", a-1/2 = " << params.a - 0.5;
    add("degree_bound", max_degree <= params.a - 0.5 + 1e-12, os.str());
    add("evenness", is_integer(params.a), "need 2a to be an even integer");
    return report;
}

SymParams family_a_sym_params(const FamilyAParams& params) {
    return {1.0, 1.0, -2.0 * params.a - 2.0 * params.b + 2.0, -2.0 * params.a};
}

SymParams family_b_sym_params(const FamilyBParams& params) {
    return {1.0, 0.0, -2.0 * params.a + 2.0, 2.0};
}

SymPoly family_a(const FamilyAParams& params, int n, bool override_validation) {
    if (!override_validation) check_or_throw(validate(params, n), "family_a");
    return monic(symmetric_poly(family_a_sym_params(params), n));
}

SymPoly family_b(const FamilyBParams& params, int n, bool override_validation) {
    if (!override_validation) check_or_throw(validate(params, n), "family_b");
    return monic(symmetric_poly(family_b_sym_params(params), n));
}

SymPoly family_a_hyp(const FamilyAParams& params, int n, bool override_validation) {
    if (!override_validation) check_or_throw(validate(params, n), "family_a_hyp");
    const int m = half_floor(n);
    const double upper = params.a + 0.5 - half_ceil(n);
    const double lower = params.a + params.b - n + 0.5;
    std::vector<double> coeffs(n + 1, 0.0);
    double term = 1.0; // (-m)_k (upper)_k (-1)^k / ((lower)_k k!)
    for (int k = 0;; ++k) {
        coeffs[n - 2 * k] = term;
        if (k == m) break;
        double den = lower + k;
        if (den == 0.0)
            throw SingularParamError("family_a_hyp: vanishing Pochhammer denominator");
        term *= -(-m + k) * (upper + k) / (den * (k + 1.0));
    }
    return SymPoly(n, std::move(coeffs));
}

SymPoly family_b_hyp(const FamilyBParams& params, int n, BParamSource source,
                     bool override_validation) {
    if (!override_validation) check_or_throw(validate(params, n), "family_b_hyp");
    const int m = half_floor(n);
    double lower = params.a + 0.5 * sign_pow(n);
    if (source == BParamSource::derived) lower -= 2.0 * m;
    std::vector<double> coeffs(n + 1, 0.0);
    double term = 1.0; // (-m)_k / ((lower)_k k!), argument +1/x^2
    for (int k = 0;; ++k) {
        coeffs[n - 2 * k] = term;
        if (k == m) break;
        double den = lower + k;
        if (den == 0.0)
            throw SingularParamError("family_b_hyp: vanishing Pochhammer denominator");
        term *= (-m + k) / (den * (k + 1.0));
    }
    return SymPoly(n, std::move(coeffs));
}

double ode_residual(const SymParams& params, const SymPoly& poly, double x) {
    const int n = poly.degree();
    auto d1 = poly.derivative_coeffs();
    SymPoly p1(n == 0 ? 0 : n - 1, std::move(d1));
    std::vector<double> d2 = p1.derivative_coeffs();
    double f = poly(x);
    double f1 = p1(x);
    double f2 = 0.0;
    for (int j = static_cast<int>(d2.size()) - 1; j >= 0; --j) f2 = f2 * x + d2[j];

    double x2 = x * x;
    double lambda = n * (params.r + (n - 1) * params.p);
    double s_term = 0.5 * (1.0 - sign_pow(n)) * params.s;
    return x2 * (params.p * x2 + params.q) * f2 + x * (params.r * x2 + params.s) * f1 -
           (lambda * x2 + s_term) * f;
}

double cj_a(double a, double b, int j) {
    double odd = 1.0 - sign_pow(j); // 0 for even j, 2 for odd j
    double den = (2.0 * j - 2.0 * a - 2.0 * b + 1.0) * (2.0 * j - 2.0 * a - 2.0 * b - 1.0);
    if (den == 0.0) throw SingularParamError("cj_a: vanishing denominator");
    return (j - odd * a) * (j - odd * a - 2.0 * b) / den;
}

double cj_b(double a, int j) {
    double den = (2.0 * j - 2.0 * a + 1.0) * (2.0 * j - 2.0 * a - 1.0);
    if (den == 0.0) throw SingularParamError("cj_b: vanishing denominator");
    return (-2.0 * sign_pow(j) * (j - a) - 2.0 * a) / den;
}

double norm_sq_a(double a, double b, int n, bool override_validation) {
    if (!override_validation) check_or_throw(validate(FamilyAParams{a, b}, n), "norm_sq_a");
    double log_mag = 0.0;
    int sign = (n % 2 == 0) ? 1 : -1;
    for (int j = 1; j <= n; ++j) {
        double c = cj_a(a, b, j);
        if (c == 0.0) return 0.0;
        log_mag += std::log(std::abs(c));
        if (c < 0) sign = -sign;
    }
    auto g1 = specfun::log_abs_gamma(b + a - 0.5);
    auto g2 = specfun::log_abs_gamma(0.5 - a);
    auto g3 = specfun::log_abs_gamma(b);
    sign *= g1.sign * g2.sign * g3.sign;
    return sign * std::exp(log_mag + g1.log + g2.log - g3.log);
}

double norm_sq_b(double a, int n, bool override_validation) {
    if (!override_validation) check_or_throw(validate(FamilyBParams{a}, n), "norm_sq_b");
    double log_mag = 0.0;
    int sign = (n % 2 == 0) ? 1 : -1;
    for (int j = 1; j <= n; ++j) {
        double c = cj_b(a, j);
        if (c == 0.0) return 0.0;
        log_mag += std::log(std::abs(c));
        if (c < 0) sign = -sign;
    }
    auto g = specfun::log_abs_gamma(a - 0.5);
    sign *= g.sign;
    return sign * std::exp(log_mag + g.log);
}

} // namespace finorth::sympoly
