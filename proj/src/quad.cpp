#include "finorth/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace finorth::quad {

namespace {

constexpr double kLambda = 1.5707963267948966; // pi/2 map constant
constexpr int kMaxLevel = 12;
constexpr double kTMax = 6.5;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// node tables
// ---------------------------------------------------------------------------

struct SemiNode {
    double t;
    double x; // exp(lambda sinh t)
    double w; // lambda cosh(t) x
};

struct SemiLevel {
    std::vector<SemiNode> pos; // t > 0, ascending
    std::vector<SemiNode> neg; // t < 0, ascending |t|
};

SemiNode make_semi_node(double t) {
    double u = kLambda * std::sinh(t);
    double x = std::exp(u);
    return {t, x, kLambda * std::cosh(t) * x};
}

const std::vector<SemiLevel>& semi_tables() {
    static const std::vector<SemiLevel> tables = [] {
        std::vector<SemiLevel> out(kMaxLevel + 1);
        for (int t = 1; t <= static_cast<int>(kTMax); ++t) {
            out[0].pos.push_back(make_semi_node(t));
            out[0].neg.push_back(make_semi_node(-t));
        }
        for (int level = 1; level <= kMaxLevel; ++level) {
            double h = std::ldexp(1.0, -level);
            for (long j = 1;; j += 2) {
                double t = j * h;
                if (t > kTMax) break;
                out[level].pos.push_back(make_semi_node(t));
                out[level].neg.push_back(make_semi_node(-t));
            }
        }
        return out;
    }();
    return tables;
}

struct FiniteNode {
    double t;
    double c; // complement 1 - |y|, y = tanh(lambda sinh t)
    double w; // lambda cosh t / cosh^2(lambda sinh t)
};

struct FiniteLevel {
    std::vector<FiniteNode> nodes; // t > 0 side only; used symmetrically
};

FiniteNode make_finite_node(double t) {
    double u = kLambda * std::sinh(t);
    double e = std::exp(-2.0 * u); // u >= 0 here
    double c = 2.0 * e / (1.0 + e);
    double w = kLambda * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    return {t, c, w};
}

const std::vector<FiniteLevel>& finite_tables() {
    static const std::vector<FiniteLevel> tables = [] {
        std::vector<FiniteLevel> out(kMaxLevel + 1);
        for (int t = 1; t <= static_cast<int>(kTMax); ++t)
            out[0].nodes.push_back(make_finite_node(t));
        for (int level = 1; level <= kMaxLevel; ++level) {
            double h = std::ldexp(1.0, -level);
            for (long j = 1;; j += 2) {
                double t = j * h;
                if (t > kTMax) break;
                out[level].nodes.push_back(make_finite_node(t));
            }
        }
        return out;
    }();
    return tables;
}

// Gauss-Legendre nodes on [-1, 1], computed once by Newton iteration.
struct GlNode {
    double y;
    double w;
};

constexpr int kGlOrder = 24;

const std::array<GlNode, kGlOrder>& gl_nodes() {
    static const std::array<GlNode, kGlOrder> nodes = [] {
        std::array<GlNode, kGlOrder> out{};
        const int n = kGlOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) {
                    p0 = 1.0;
                    p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    break;
                }
            }
            out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return out;
    }();
    return nodes;
}

// ---------------------------------------------------------------------------
// level-wise trapezoid engines
// ---------------------------------------------------------------------------

struct LevelSums {
    double sum = 0.0;
    double l1 = 0.0;
};

// Sweep one side of an exp-sinh level from the center outwards, stopping
// once terms are negligible against the running L1 mass.
template <typename Eval>
void sweep_semi_side(const std::vector<SemiNode>& side, Eval&& eval, LevelSums& acc) {
    int consecutive_small = 0;
    for (const auto& node : side) {
        double term = eval(node.x) * node.w;
        if (!std::isfinite(term)) term = 0.0;
        acc.sum += term;
        double a = std::abs(term);
        acc.l1 += a;
        if (a <= 1e-19 * (acc.l1 + 1e-300)) {
            if (++consecutive_small >= 3 && std::abs(node.t) >= 2.0) break;
        } else {
            consecutive_small = 0;
        }
    }
}

struct EngineResult {
    double value = 0.0;
    double err = kInf;
    double l1 = 0.0;
    bool converged = false;
    int levels = 0;
};

template <typename Eval>
EngineResult run_semi(Eval&& eval, double tol, double abs_scale) {
    const auto& tables = semi_tables();
    double integral = 0.0;
    double prev = 0.0;
    double l1 = 0.0;
    double err = kInf;
    EngineResult res;
    for (int level = 0; level <= kMaxLevel; ++level) {
        double h = std::ldexp(1.0, -level);
        LevelSums acc;
        if (level == 0) {
            acc.sum = eval(1.0) * kLambda; // t = 0 node: x = 1, w = lambda
            if (!std::isfinite(acc.sum)) acc.sum = 0.0;
            acc.l1 = std::abs(acc.sum);
        }
        sweep_semi_side(tables[level].pos, eval, acc);
        sweep_semi_side(tables[level].neg, eval, acc);
        if (level == 0) {
            integral = h * acc.sum;
            l1 = h * acc.l1;
        } else {
            integral = 0.5 * integral + h * acc.sum;
            l1 = 0.5 * l1 + h * acc.l1;
        }
        if (level >= 3) {
            err = std::abs(integral - prev);
            double thr = tol * std::max(std::abs(integral), abs_scale);
            // refuse to certify below the rounding mass of the node sums
            if (thr >= 4e-15 * l1 && err <= thr) {
                res = {integral, err, l1, true, level};
                return res;
            }
        }
        prev = integral;
    }
    res = {integral, err, l1, false, kMaxLevel};
    return res;
}

template <typename Eval>
EngineResult run_finite(Eval&& eval_xc, double a, double b, double tol, double abs_scale) {
    // eval_xc(x) where x is computed from the stored complements so endpoint
    // neighborhoods keep full resolution
    const auto& tables = finite_tables();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    auto eval_node = [&](const FiniteNode& node, LevelSums& acc, int& cs) {
        // right side: x = b - half*c ; left side: x = a + half*c
        for (int side = 0; side < 2; ++side) {
            double x = side == 0 ? b - half * node.c : a + half * node.c;
            double term = eval_xc(x) * node.w;
            if (!std::isfinite(term)) term = 0.0;
            acc.sum += term;
            double m = std::abs(term);
            acc.l1 += m;
            if (m <= 1e-19 * (acc.l1 + 1e-300)) ++cs;
            else cs = 0;
        }
    };

    double integral = 0.0, prev = 0.0, l1 = 0.0, err = kInf;
    for (int level = 0; level <= kMaxLevel; ++level) {
        double h = std::ldexp(1.0, -level);
        LevelSums acc;
        if (level == 0) {
            acc.sum = eval_xc(mid) * kLambda;
            if (!std::isfinite(acc.sum)) acc.sum = 0.0;
            acc.l1 = std::abs(acc.sum);
        }
        int cs = 0;
        for (const auto& node : tables[level].nodes) {
            eval_node(node, acc, cs);
            if (cs >= 6 && node.t >= 2.0) break;
        }
        if (level == 0) {
            integral = h * acc.sum;
            l1 = h * acc.l1;
        } else {
            integral = 0.5 * integral + h * acc.sum;
            l1 = 0.5 * l1 + h * acc.l1;
        }
        if (level >= 3) {
            err = std::abs(integral - prev);
            double thr = tol * std::max(std::abs(integral), abs_scale / half);
            if (thr >= 4e-15 * l1 && err <= thr)
                return {half * integral, half * err, half * l1, true, level};
        }
        prev = integral;
    }
    return {half * integral, half * err, half * l1, false, kMaxLevel};
}

[[noreturn]] void throw_nonconvergence(const char* what, double value, double err) {
    std::ostringstream os;
    os << what << ": level cap reached, value ~ " << value << ", error estimate " << err;
    throw NonConvergence(os.str());
}

} // namespace

// ---------------------------------------------------------------------------
// Integrand
// ---------------------------------------------------------------------------

Integrand::Integrand(std::function<double(double)> fn, double sigma, DecayClass decay,
                     double rate)
    : f(std::move(fn)), singular_exponent_at_zero(sigma), decay_class(decay),
      polynomial_decay_rate(rate) {
    if (!(sigma > -1.0))
        throw DomainError("Integrand: singular exponent at zero must exceed -1");
}

Integrand Integrand::checked(std::function<double(double)> fn, double sigma,
                             DecayClass decay, double rate) {
    Integrand out(std::move(fn), sigma, decay, rate);
    double x1 = 89.0, x2 = 5743.0;
    double v1 = std::abs(out.f(x1)), v2 = std::abs(out.f(x2));
    if (decay == DecayClass::polynomial) {
        if (v1 > 1e-280 && v2 > 1e-280) {
            double est = -(std::log(v2) - std::log(v1)) / (std::log(x2) - std::log(x1));
            if (std::abs(est - rate) > 1.0) {
                std::ostringstream os;
                os << "Integrand: sampled tail rate " << est
                   << " inconsistent with declared rate " << rate;
                throw DomainError(os.str());
            }
        }
    } else {
        // super-exponential: must fall away faster than any modest power
        double y1 = 6.0, y2 = 18.0;
        double w1 = std::abs(out.f(y1)), w2 = std::abs(out.f(y2));
        if (w1 > 1e-280 && w2 > w1 * std::pow(y1 / y2, 8.0)) {
            throw DomainError("Integrand: tail decays too slowly for super_exponential class");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// integrate_*
// ---------------------------------------------------------------------------

QuadResult integrate_semi(const Integrand& f, double tol, double abs_scale) {
    long evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f.f(x);
    };
    EngineResult r = run_semi(eval, tol, abs_scale);
    if (!r.converged) throw_nonconvergence("integrate_semi", r.value, r.err);
    return {r.value, r.err, evals, true};
}

QuadResult integrate_line(const Integrand& f, double tol, double abs_scale) {
    long evals = 0;
    auto eval_pos = [&](double x) {
        ++evals;
        return f.f(x);
    };
    auto eval_neg = [&](double x) {
        ++evals;
        return f.f(-x);
    };
    EngineResult rp = run_semi(eval_pos, tol, abs_scale);
    EngineResult rn = run_semi(eval_neg, tol, abs_scale);
    if (!rp.converged || !rn.converged)
        throw_nonconvergence("integrate_line", rp.value + rn.value, rp.err + rn.err);
    return {rp.value + rn.value, rp.err + rn.err, evals, true};
}

QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            double tol, double abs_scale) {
    if (!(b > a)) throw DomainError("integrate_finite: need b > a");
    long evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f(x);
    };
    EngineResult r = run_finite(eval, a, b, tol, abs_scale);
    if (!r.converged) throw_nonconvergence("integrate_finite", r.value, r.err);
    return {r.value, r.err, evals, true};
}

// ---------------------------------------------------------------------------
// Aitken extrapolation
// ---------------------------------------------------------------------------

double aitken_extrapolate(const std::vector<double>& partial_sums, double* err_estimate) {
    const auto& s = partial_sums;
    if (s.empty()) {
        if (err_estimate) *err_estimate = kInf;
        return 0.0;
    }
    if (s.size() < 3) {
        if (err_estimate)
            *err_estimate = s.size() == 2 ? std::abs(s[1] - s[0]) : kInf;
        return s.back();
    }

    // keep the table narrow: late partial sums carry the asymptotic regime
    std::vector<double> cur(s.end() - std::min<size_t>(s.size(), 36), s.end());
    double best = cur.back();
    double best_err = std::abs(cur[cur.size() - 1] - cur[cur.size() - 2]);
    double prev_v = best;

    while (cur.size() >= 3) {
        std::vector<double> nxt(cur.size() - 2);
        for (size_t i = 0; i + 2 < cur.size(); ++i) {
            double d1 = cur[i + 1] - cur[i];
            double d2 = cur[i + 2] - cur[i + 1];
            double den = d2 - d1;
            double scale = std::abs(cur[i + 2]) + std::abs(d1) + std::abs(d2);
            if (std::abs(den) <= 1e-15 * scale + 1e-300)
                nxt[i] = cur[i + 2];
            else
                nxt[i] = cur[i + 2] - d2 * (d2 / den); // ratio first: d2^2 can overflow
        }
        double v = nxt.back();
        double err = std::abs(v - prev_v);
        if (nxt.size() >= 2) err = std::max(err * 0.25, std::abs(v - nxt[nxt.size() - 2]) * 0.5);
        if (err <= best_err) {
            best = v;
            best_err = err;
        } else if (err > 16.0 * best_err && best_err < kInf) {
            break; // entering the noise regime
        }
        prev_v = v;
        cur = std::move(nxt);
    }
    if (err_estimate) *err_estimate = best_err;
    return best;
}

// ---------------------------------------------------------------------------
// oscillatory transforms
// ---------------------------------------------------------------------------

namespace {

enum class Osc { cos, sin };

void check_parity(const Integrand& f, Parity parity) {
    static const double samples[] = {0.7371, 1.6180, 2.4142};
    for (double x : samples) {
        double a = f.f(x), b = f.f(-x);
        double scale = std::max(std::abs(a), std::abs(b));
        if (scale == 0.0 || !std::isfinite(scale)) continue;
        double mismatch = parity == Parity::even ? std::abs(a - b) : std::abs(a + b);
        if (mismatch > 1e-12 * scale) {
            std::ostringstream os;
            os << "declared " << (parity == Parity::even ? "even" : "odd")
               << " parity violated at x = " << x;
            throw ParityViolation(os.str());
        }
    }
}

// One arch of the oscillator against the envelope, Gauss-Legendre in the
// phase variable.  cos arch j covers phase [(j-1/2)pi, (j+1/2)pi], sin arch j
// covers [j pi, (j+1) pi]; either equals (-1)^j times a fixed-sign kernel.
template <typename Eval>
double arch_integral(Eval&& eval, Osc osc, double s, long j) {
    const auto& nodes = gl_nodes();
    double sum = 0.0;
    if (osc == Osc::cos) {
        for (const auto& node : nodes) {
            double u = 0.5 * node.y; // in (-1/2, 1/2)
            sum += node.w * 0.5 * std::cos(pi * u) * eval((j + u) * pi / s);
        }
    } else {
        for (const auto& node : nodes) {
            double u = 0.5 * (node.y + 1.0); // in (0, 1)
            sum += node.w * 0.5 * std::sin(pi * u) * eval((j + u) * pi / s);
        }
    }
    double v = (pi / s) * sum;
    return (j % 2 == 0) ? v : -v;
}

struct HalfLineResult {
    double value = 0.0;
    double err = kInf;
    bool converged = false;
};

// int_0^inf osc(sx) f(x) dx for polynomially decaying f: head piece over the
// first partial period by tanh-sinh, then arch-by-arch alternating sums
// accelerated with iterated Aitken.
template <typename Eval>
HalfLineResult osc_polynomial(Eval&& eval, Osc osc, double s, double tol, double abs_floor) {
    const double head_end = (osc == Osc::cos) ? pi / (2.0 * s) : pi / s;
    auto headf = [&](double x) {
        return (osc == Osc::cos ? std::cos(s * x) : std::sin(s * x)) * eval(x);
    };
    EngineResult head = run_finite(headf, 0.0, head_end, std::min(tol, 1e-11), 1.0);

    std::vector<double> partial;
    partial.reserve(256);
    partial.push_back(head.value);
    double running = head.value;
    double l1 = std::abs(head.value);

    const long max_arches = 800;
    double best = running, best_err = kInf;
    double prev_val = running;
    int stable = 0;

    for (long j = 1; j <= max_arches; ++j) {
        double arch = arch_integral(eval, osc, s, j);
        if (!std::isfinite(arch)) arch = 0.0;
        running += arch;
        l1 += std::abs(arch);
        partial.push_back(running);

        if (j >= 8 && j % 4 == 0) {
            double err = kInf;
            double val = aitken_extrapolate(partial, &err);
            double thr = tol * std::max(std::abs(val), 1e-3 * l1);
            thr = std::max({thr, 2e-16 * l1, abs_floor});
            double agree = std::abs(val - prev_val);
            prev_val = val;
            if (err <= thr && agree <= 4.0 * thr) {
                if (++stable >= 2) return {val, std::max(err, head.err), true};
            } else {
                stable = 0;
            }
            if (err < best_err) {
                best = val;
                best_err = err;
            }
        }
    }
    return {best, best_err, false};
}

// Super-exponentially decaying f: find a cutoff X beyond which the envelope
// is negligible, then sum whole arches up to X directly.
template <typename Eval>
HalfLineResult osc_superexp(Eval&& eval, Osc osc, double s, double tol) {
    double scale0 = 0.0;
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0})
        scale0 = std::max(scale0, std::abs(eval(x)));
    if (scale0 == 0.0) scale0 = 1.0;
    double cutoff = 1.0;
    while (cutoff < 1e6) {
        double m = std::max(std::abs(eval(cutoff)), std::abs(eval(0.93 * cutoff)));
        if (m < tol * scale0 * 1e-3) break;
        cutoff *= 2.0;
    }

    const double head_end = (osc == Osc::cos) ? pi / (2.0 * s) : pi / s;
    auto headf = [&](double x) {
        return (osc == Osc::cos ? std::cos(s * x) : std::sin(s * x)) * eval(x);
    };
    if (head_end >= cutoff) {
        EngineResult r = run_finite(headf, 0.0, cutoff, tol, 1.0);
        return {r.value, r.err, r.converged};
    }
    EngineResult head = run_finite(headf, 0.0, head_end, std::min(tol, 1e-11), 1.0);
    double total = head.value;
    double carry = 0.0;
    long arches = static_cast<long>(std::ceil((cutoff - head_end) * s / pi)) + 1;
    for (long j = 1; j <= arches; ++j) {
        double term = arch_integral(eval, osc, s, j);
        double y = term - carry;
        double t = total + y;
        carry = (t - total) - y;
        total = t;
    }
    double tail = std::abs(eval(cutoff)) * std::min(2.0 / s, cutoff);
    return {total, head.err + tail, true};
}

} // namespace

FourierResult fourier_numeric_full(const Integrand& f, Parity parity, double s, double tol,
                                   double abs_floor) {
    check_parity(f, parity);

    FourierResult out;
    long evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f.f(x);
    };

    if (s == 0.0) {
        if (parity == Parity::odd) {
            out.converged = true;
            return out;
        }
        QuadResult r = integrate_line(f, tol);
        out.value.re = r.value;
        out.abs_error_estimate = r.abs_error_estimate;
        out.evaluations = r.evaluations;
        out.converged = r.converged;
        return out;
    }

    const double as = std::abs(s);
    const Osc osc = (parity == Parity::even) ? Osc::cos : Osc::sin;
    HalfLineResult r = (f.decay_class == DecayClass::polynomial)
                           ? osc_polynomial(eval, osc, as, tol, 0.5 * abs_floor)
                           : osc_superexp(eval, osc, as, tol);
    if (!r.converged)
        throw_nonconvergence("fourier_numeric", 2.0 * r.value, 2.0 * r.err);

    if (parity == Parity::even) {
        out.value.re = 2.0 * r.value;
    } else {
        out.value.im = -2.0 * r.value;
        if (s < 0.0) out.value.im = -out.value.im;
    }
    out.abs_error_estimate = 2.0 * r.err;
    out.evaluations = evals;
    out.converged = true;
    return out;
}

TransformValue fourier_numeric(const Integrand& f, Parity parity, double s, double tol,
                               double abs_floor) {
    return fourier_numeric_full(f, parity, s, tol, abs_floor).value;
}

} // namespace finorth::quad
