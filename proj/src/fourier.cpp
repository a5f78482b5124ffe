#include "finorth/fourier.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace finorth::fourier {

namespace {

using specfun::gamma;
using specfun::hyp_0f2;
using specfun::hyp_1f2;
using specfun::log_abs_gamma;
using specfun::rgamma;
using specfun::SignedLog;

void check_pochhammer_chain(double base, int len, const char* what) {
    for (int i = 0; i < len; ++i) {
        if (base + i == 0.0) {
            std::ostringstream os;
            os << what << ": Pochhammer denominator (" << base << ")_k vanishes at k = "
               << i + 1;
            throw SingularParamError(os.str());
        }
    }
}

TransformValue with_parity(int n, double s, double magnitude) {
    // even n: real; odd n: (-is) prefactor makes it purely imaginary
    if (n % 2 == 0) return {magnitude, 0.0};
    return {0.0, -s * magnitude};
}

// Signed log-space accumulator for products of Gamma factors and rationals.
struct LogProduct {
    double log = 0.0;
    int sign = 1;
    bool zero = false;

    void mul_gamma(double z) {
        SignedLog g = log_abs_gamma(z);
        log += g.log;
        sign *= g.sign;
    }
    // divide by Gamma(z); a pole makes the whole product an exact zero
    void div_gamma(double z) {
        if (is_nonpositive_integer(z)) {
            zero = true;
            return;
        }
        SignedLog g = log_abs_gamma(z);
        log -= g.log;
        sign *= g.sign;
    }
    void mul(double v) {
        if (v == 0.0) {
            zero = true;
            return;
        }
        log += std::log(std::abs(v));
        if (v < 0) sign = -sign;
    }
    void div(double v) { mul(1.0 / v); }
    void mul_pow2(double e) { log += e * 0.6931471805599453; }

    double value() const { return zero ? 0.0 : sign * std::exp(log); }
};

} // namespace

FnASpec::FnASpec(int n_, double p1_, double p2_, double p3_, double p4_)
    : n(n_), p1(p1_), p2(p2_), p3(p3_), p4(p4_) {
    if (n < 0) throw DomainError("FnASpec: degree must be nonnegative");
    const int m = half_floor(n);
    check_pochhammer_chain(p3 + p4 - n + 0.5, m, "FnASpec");
    check_pochhammer_chain(0.5 + p1 - half_ceil(n), m, "FnASpec");
}

TransformValue kernel_a(double s, double alpha, double beta, int n, int k) {
    const int M = half_ceil(n);
    const double g1 = gamma(0.5 - alpha - k + M);
    const double g2 = gamma(beta + alpha + k - 0.5 - M);
    const double lower2 = 1.5 - beta - alpha - k + M;
    auto h = hyp_1f2(0.5 - alpha - k + M, 1.0 - 0.5 * sign_pow(n), lower2, s * s / 4.0);
    return with_parity(n, s, g1 * g2 / gamma(beta) * h.value);
}

TransformValue kernel_b(double s, double a, int n, int k) {
    const int M = half_ceil(n);
    const double e = a + k - 0.5 - M;
    const double g = gamma(e);
    auto h = hyp_0f2(1.0 - 0.5 * sign_pow(n), 1.5 - a - k + M, s * s / 8.0);
    return with_parity(n, s, std::exp2(e) * g * h.value);
}

namespace {

FnValue fn_sum(int n, double x, int m,
               const std::function<double(int)>& coeff_step_ratio,
               const std::function<specfun::HypResult(int)>& inner) {
    // coeff_step_ratio(k) maps T_k -> T_{k+1}; T_0 = 1
    FnValue out;
    double sum = 0.0, carry = 0.0;
    double max_term = 0.0;
    int terms = 0;
    double t = 1.0;
    for (int k = 0;; ++k) {
        auto h = inner(k);
        double contrib = t * h.value;
        double y = contrib - carry;
        double tmp = sum + y;
        carry = (tmp - sum) - y;
        sum = tmp;
        max_term = std::max(max_term, std::abs(t) * h.diag.max_term_magnitude);
        terms += h.diag.terms_used;
        if (k == m) break;
        t *= coeff_step_ratio(k);
    }
    double par = (n % 2 == 0) ? 1.0 : x;
    out.value = par * sum;
    out.diag.terms_used = terms;
    out.diag.max_term_magnitude = max_term;
    out.diag.cancellation_ratio =
        (sum == 0.0) ? (max_term > 0.0 ? std::numeric_limits<double>::infinity() : 1.0)
                     : std::max(1.0, max_term / std::abs(sum));
    out.untrusted = out.diag.cancellation_ratio > 1e8;
    return out;
}

} // namespace

FnValue fn_a_full(const FnASpec& spec, double x) {
    const int n = spec.n, m = half_floor(n), M = half_ceil(n);
    const double z = x * x / 4.0;
    const double lower1 = 1.0 - 0.5 * sign_pow(n);
    auto ratio = [&](int k) {
        return (-m + k) * (spec.p3 + 0.5 - M + k) * (spec.p1 + spec.p2 - 0.5 - M + k) /
               ((spec.p3 + spec.p4 - n + 0.5 + k) * (0.5 + spec.p1 - M + k) * (k + 1.0));
    };
    auto inner = [&](int k) {
        return hyp_1f2(0.5 - spec.p1 - k + M, lower1, 1.5 - spec.p1 - spec.p2 - k + M, z);
    };
    return fn_sum(n, x, m, ratio, inner);
}

double fn_a(const FnASpec& spec, double x) { return fn_a_full(spec, x).value; }

FnValue fn_b_full(const FnBSpec& spec, double x, BParamSource source) {
    const int n = spec.n, m = half_floor(n), M = half_ceil(n);
    if (n < 0) throw DomainError("FnBSpec: degree must be nonnegative");
    double den_base = spec.q2 + 0.5 * sign_pow(n);
    if (source == BParamSource::derived) den_base -= 2.0 * m;
    check_pochhammer_chain(den_base, m, "fn_b");
    const double z = x * x / 8.0;
    const double lower1 = 1.0 - 0.5 * sign_pow(n);
    auto ratio = [&](int k) {
        return 2.0 * (-m + k) * (spec.q1 - 0.5 - M + k) / ((den_base + k) * (k + 1.0));
    };
    auto inner = [&](int k) { return hyp_0f2(lower1, 1.5 - spec.q1 - k + M, z); };
    return fn_sum(n, x, m, ratio, inner);
}

double fn_b(const FnBSpec& spec, double x, BParamSource source) {
    return fn_b_full(spec, x, source).value;
}

double prefactor_a(int n, double alpha, double beta) {
    const int M = half_ceil(n);
    return gamma(0.5 - alpha + M) * gamma(beta + alpha - 0.5 - M) / gamma(beta);
}

double prefactor_b(int n, double a) {
    const int M = half_ceil(n);
    return gamma(a - 0.5 - M) * std::exp2(a - 0.5 - M);
}

double rprefactor_a(int n, double alpha, double beta) {
    const int M = half_ceil(n);
    return rgamma(0.5 - alpha + M) * rgamma(beta + alpha - 0.5 - M) * gamma(beta);
}

double rprefactor_b(int n, double a) {
    const int M = half_ceil(n);
    return rgamma(a - 0.5 - M) * std::exp2(-(a - 0.5 - M));
}

TransformValue transform_a_closed(int n, double alpha, double beta, double c, double d,
                                  double s) {
    FnASpec spec(n, alpha, beta, c, d);
    double v = prefactor_a(n, alpha, beta) * fn_a(spec, s);
    // (-i)^{n mod 2} turns the real series value into the imaginary part
    if (n % 2 == 0) return {v, 0.0};
    return {0.0, -v};
}

TransformValue transform_a_kernel_sum(int n, double alpha, double beta, double c, double d,
                                      double s) {
    const int m = half_floor(n), M = half_ceil(n);
    check_pochhammer_chain(c + d - n + 0.5, m, "transform_a_kernel_sum");
    TransformValue acc;
    double coeff = 1.0; // (-m)_k (c+1/2-M)_k (-1)^k / ((c+d-n+1/2)_k k!)
    for (int k = 0;; ++k) {
        acc = acc + coeff * kernel_a(s, alpha, beta, n, k);
        if (k == m) break;
        coeff *= -(-m + k) * (c + 0.5 - M + k) / ((c + d - n + 0.5 + k) * (k + 1.0));
    }
    return acc;
}

TransformValue transform_b_closed(int n, double a, double b, double s, BParamSource source) {
    double v = prefactor_b(n, a) * fn_b(FnBSpec{n, a, b}, s, source);
    if (n % 2 == 0) return {v, 0.0};
    return {0.0, -v};
}

TransformValue transform_b_kernel_sum(int n, double a, double b, double s,
                                      BParamSource source) {
    const int m = half_floor(n);
    double den_base = b + 0.5 * sign_pow(n);
    if (source == BParamSource::derived) den_base -= 2.0 * m;
    check_pochhammer_chain(den_base, m, "transform_b_kernel_sum");
    TransformValue acc;
    double coeff = 1.0; // (-m)_k / ((den_base)_k k!)
    for (int k = 0;; ++k) {
        acc = acc + coeff * kernel_b(s, a, n, k);
        if (k == m) break;
        coeff *= (-m + k) / ((den_base + k) * (k + 1.0));
    }
    return acc;
}

double theorem1_rhs(int n, double alpha, double beta, double p, double q,
                    bool override_constraints) {
    if (!override_constraints) {
        std::ostringstream os;
        bool ok = true;
        auto need = [&](bool cond, const char* what) {
            if (!cond) {
                if (!ok) os << "; ";
                os << what;
                ok = false;
            }
        };
        need(n <= p + q - 0.5 + 1e-12, "need n <= p+q-1/2");
        need(p < 0.5, "need p < 1/2");
        need(is_integer(p), "need 2p to be an even integer");
        need(q > beta && beta > 0.0, "need q > beta > 0");
        need(alpha > 0.0 && alpha < 0.5, "need 0 < alpha < 1/2");
        need(alpha + beta > 0.5, "need alpha + beta > 1/2");
        if (!ok) throw ConstraintError("theorem1_rhs: " + os.str());
    }

    const int M = half_ceil(n);
    LogProduct lp;
    for (int j = 1; j <= n; ++j) {
        double odd = 1.0 - sign_pow(j);
        lp.mul(-j + odd * p);
        lp.mul(j - odd * p - 2.0 * q);
        lp.div((2.0 * j - 2.0 * p - 2.0 * q + 1.0) * (2.0 * j - 2.0 * p - 2.0 * q - 1.0));
        if (lp.zero) return 0.0;
    }
    lp.mul_gamma(beta);
    lp.mul_gamma(q - beta);
    lp.mul_gamma(p + q - 0.5);
    lp.mul_gamma(0.5 - p);
    lp.div_gamma(q);
    lp.div_gamma(0.5 - alpha + M);
    lp.div_gamma(alpha + beta - 0.5 - M);
    lp.div_gamma(alpha - p + 0.5 + M);
    lp.div_gamma(p + q - alpha - beta - 0.5 - M);
    return lp.value();
}

double theorem2_rhs(int n, double a, double b, bool override_constraints) {
    if (!override_constraints) {
        std::ostringstream os;
        bool ok = true;
        auto need = [&](bool cond, const char* what) {
            if (!cond) {
                if (!ok) os << "; ";
                os << what;
                ok = false;
            }
        };
        need(n <= b - 0.5 + 1e-12, "need n <= b-1/2");
        need(is_integer(b), "need 2b to be an even integer");
        need(a > 0.5 && a < b - 0.5, "need 1/2 < a < b-1/2");
        if (!ok) throw ConstraintError("theorem2_rhs: " + os.str());
    }

    const int M = half_ceil(n);
    LogProduct lp;
    lp.mul_pow2(-b + 1.0 + 2.0 * M);
    for (int j = 1; j <= n; ++j) {
        lp.mul(2.0 * sign_pow(j) * (j - b) + 2.0 * b);
        lp.div((2.0 * j - 2.0 * b + 1.0) * (2.0 * j - 2.0 * b - 1.0));
        if (lp.zero) return 0.0;
    }
    lp.mul_gamma(b - 0.5);
    lp.div_gamma(a - 0.5 - M);
    lp.div_gamma(b - a - 0.5 - M);
    return lp.value();
}

} // namespace finorth::fourier
