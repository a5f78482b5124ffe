#include "finorth/verify.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "finorth/fourier.hpp"
#include "finorth/quad.hpp"
#include "finorth/specfun.hpp"

namespace finorth::verify {

namespace {

using quad::DecayClass;
using quad::Integrand;
using quad::Parity;
using sympoly::FamilyAParams;
using sympoly::FamilyBParams;
using sympoly::SymPoly;

double get_param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw DomainError("missing parameter: " + key);
    return it->second;
}

double get_param_or(const std::map<std::string, double>& params, const std::string& key,
                    double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(jobs, static_cast<int>(count));
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// safe weighted-polynomial evaluators
// ---------------------------------------------------------------------------

double log1p_sq(double x) {
    double ax = std::abs(x);
    return ax > 1e8 ? 2.0 * std::log(ax) : std::log1p(x * x);
}

// log of |x|^{-2a} (1+x^2)^{-b}
double log_weight_a(double a, double b, double x) {
    return -2.0 * a * std::log(std::abs(x)) - b * log1p_sq(x);
}

// log of |x|^{-2a} exp(-scale/x^2); scale = 1 for the orthogonality weight,
// scale = 1/2 for the single-function factor
double log_weight_b(double a, double scale, double x) {
    double x2 = x * x;
    double inv = scale / x2; // +inf for tiny x is fine: minus infinity log-weight
    return -2.0 * a * std::log(std::abs(x)) - inv;
}

// weight(x) * P1(x) * P2(x), stable at extreme |x| through a log-space path
std::function<double(double)> weighted_product(std::function<double(double)> log_weight,
                                               SymPoly p1, SymPoly p2) {
    return [log_weight = std::move(log_weight), p1 = std::move(p1),
            p2 = std::move(p2)](double x) -> double {
        if (x == 0.0) return 0.0;
        double ax = std::abs(x);
        double lw = log_weight(x);
        if (ax >= 1e-40 && ax <= 1e40 && lw > -690.0 && lw < 690.0)
            return std::exp(lw) * p1(x) * p2(x);
        auto e1 = p1.log_abs_eval(x);
        auto e2 = p2.log_abs_eval(x);
        if (e1.sign == 0 || e2.sign == 0) return 0.0;
        double total = lw + e1.log + e2.log;
        if (total < -745.0) return 0.0;
        return e1.sign * e2.sign * std::exp(std::min(total, 709.0));
    };
}

SymPoly unit_poly() { return SymPoly(0, {1.0}); }

Integrand integrand_a_pair(double a_total, double b_total, SymPoly p1, SymPoly p2) {
    int deg = p1.degree() + p2.degree();
    double sigma = -2.0 * a_total + parity(p1.degree()) + parity(p2.degree());
    double rate = 2.0 * a_total + 2.0 * b_total - deg;
    auto f = weighted_product(
        [a_total, b_total](double x) { return log_weight_a(a_total, b_total, x); },
        std::move(p1), std::move(p2));
    return Integrand(std::move(f), sigma, DecayClass::polynomial, rate);
}

Integrand integrand_a_single(double alpha, double beta, SymPoly p) {
    double sigma = -2.0 * alpha + parity(p.degree());
    double rate = 2.0 * alpha + 2.0 * beta - p.degree();
    auto f = weighted_product([alpha, beta](double x) { return log_weight_a(alpha, beta, x); },
                              std::move(p), unit_poly());
    return Integrand(std::move(f), sigma, DecayClass::polynomial, rate);
}

Integrand integrand_b_pair(double a_total, SymPoly p1, SymPoly p2) {
    int deg = p1.degree() + p2.degree();
    double rate = 2.0 * a_total - deg;
    auto f = weighted_product([a_total](double x) { return log_weight_b(a_total, 1.0, x); },
                              std::move(p1), std::move(p2));
    return Integrand(std::move(f), 0.0, DecayClass::polynomial, rate);
}

Integrand integrand_b_single(double a, SymPoly p) {
    double rate = 2.0 * a - p.degree();
    auto f = weighted_product([a](double x) { return log_weight_b(a, 0.5, x); },
                              std::move(p), unit_poly());
    return Integrand(std::move(f), 0.0, DecayClass::polynomial, rate);
}

// ---------------------------------------------------------------------------
// report plumbing
// ---------------------------------------------------------------------------

Matrix zeros(int n) { return Matrix(n, std::vector<double>(n, 0.0)); }

struct EntryList {
    std::vector<std::pair<int, int>> pairs; // n <= m
    explicit EntryList(int size) {
        for (int n = 0; n < size; ++n)
            for (int m = n; m < size; ++m) pairs.emplace_back(n, m);
    }
};

void finalize_deviations(GramReport& report, double diag_scale_floor) {
    const int size = report.max_degree + 1;
    report.abs_dev = zeros(size);
    report.rel_dev = zeros(size);
    // per-row scale: |theoretical diagonal| with a floor at the matrix scale
    std::vector<double> scale(size, 0.0);
    double max_diag = 0.0;
    for (int n = 0; n < size; ++n) max_diag = std::max(max_diag, std::abs(report.theoretical[n][n]));
    if (max_diag == 0.0) max_diag = diag_scale_floor;
    for (int n = 0; n < size; ++n) {
        scale[n] = std::abs(report.theoretical[n][n]);
        if (scale[n] < 1e-300) scale[n] = max_diag;
    }
    for (int n = 0; n < size; ++n) {
        for (int m = 0; m < size; ++m) {
            double num = report.numeric[n][m];
            double theo = report.theoretical[n][m];
            double ad = std::abs(num - theo);
            report.abs_dev[n][m] = ad;
            double s = std::sqrt(scale[n] * scale[m]);
            report.rel_dev[n][m] = (n == m && std::abs(theo) > 1e-300)
                                       ? ad / std::abs(theo)
                                       : ad / s;
            if (report.status[n][m] == EntryStatus::diverged ||
                report.status[n][m] == EntryStatus::untrusted)
                continue;
            report.status[n][m] = (report.rel_dev[n][m] <= report.tol)
                                      ? EntryStatus::match
                                      : EntryStatus::mismatch;
        }
    }
}

} // namespace

std::string to_string(RelationId id) {
    switch (id) {
        case RelationId::eq9: return "eq9";
        case RelationId::eq17: return "eq17";
        case RelationId::thm1: return "thm1";
        case RelationId::thm2: return "thm2";
    }
    return "?";
}

std::string to_string(GramMode mode) {
    switch (mode) {
        case GramMode::weight_direct: return "weight-direct";
        case GramMode::closed_form: return "closed-form";
        case GramMode::numeric_transform: return "numeric-transform";
    }
    return "?";
}

std::string to_string(EntryStatus status) {
    switch (status) {
        case EntryStatus::match: return "match";
        case EntryStatus::mismatch: return "mismatch";
        case EntryStatus::untrusted: return "untrusted";
        case EntryStatus::diverged: return "diverged";
    }
    return "?";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::agree: return "agree";
        case Verdict::analytic_part_only: return "analytic-part-only";
        case Verdict::diverge: return "diverge";
    }
    return "?";
}

RelationId relation_from_string(const std::string& name) {
    if (name == "eq9") return RelationId::eq9;
    if (name == "eq17") return RelationId::eq17;
    if (name == "thm1") return RelationId::thm1;
    if (name == "thm2") return RelationId::thm2;
    throw DomainError("unknown relation: " + name);
}

bool GramReport::all_match() const {
    for (const auto& row : status)
        for (auto s : row)
            if (s != EntryStatus::match) return false;
    return true;
}

GramReport gram_weight_direct(RelationId relation, const std::map<std::string, double>& params,
                              int max_degree, double tol, const Options& opts) {
    if (relation != RelationId::eq9 && relation != RelationId::eq17)
        throw DomainError("gram_weight_direct handles relations eq9 and eq17");
    const bool is_a = relation == RelationId::eq9;
    const int size = max_degree + 1;

    GramReport report;
    report.relation = relation;
    report.mode = GramMode::weight_direct;
    report.params = params;
    report.max_degree = max_degree;
    report.tol = tol;
    report.numeric = zeros(size);
    report.theoretical = zeros(size);
    report.status.assign(size, std::vector<EntryStatus>(size, EntryStatus::match));

    std::vector<SymPoly> polys;
    std::vector<double> norms(size);
    double a = get_param(params, "a");
    double b = is_a ? get_param(params, "b") : 0.0;
    for (int n = 0; n < size; ++n) {
        if (is_a) {
            polys.push_back(sympoly::family_a({a, b}, n, opts.override_validation));
            norms[n] = sympoly::norm_sq_a(a, b, n, opts.override_validation);
        } else {
            polys.push_back(sympoly::family_b({a}, n, opts.override_validation));
            norms[n] = sympoly::norm_sq_b(a, n, opts.override_validation);
        }
        report.theoretical[n][n] = norms[n];
    }

    EntryList entries(size);
    parallel_for(entries.pairs.size(), opts.jobs, [&](size_t i) {
        auto [n, m] = entries.pairs[i];
        if ((n + m) % 2 == 1) {
            report.numeric[n][m] = report.numeric[m][n] = 0.0; // exact by parity
            return;
        }
        Integrand f = is_a ? integrand_a_pair(a, b, polys[n], polys[m])
                           : integrand_b_pair(a, polys[n], polys[m]);
        double scale = std::sqrt(std::abs(norms[n] * norms[m]));
        try {
            auto r = quad::integrate_line(f, opts.quad_tol, std::max(scale, 1e-6));
            report.numeric[n][m] = report.numeric[m][n] = r.value;
        } catch (const NonConvergence&) {
            report.status[n][m] = report.status[m][n] = EntryStatus::diverged;
        }
    });

    finalize_deviations(report, 1.0);
    return report;
}

PairingParams PairingParams::theorem1(double alpha, double beta, double p, double q) {
    PairingParams out;
    out.alpha = alpha;
    out.beta = beta;
    out.l = p - alpha;
    out.u = q - beta;
    out.c = out.v = p;
    out.d = out.w = q;
    return out;
}

void PairingParams::validate() const {
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); };
    if (!close(c, v) || !close(d, w) || !close(c, alpha + l) || !close(d, beta + u))
        throw ConstraintError("pairing requires c = v = alpha + l and d = w = beta + u");
}

BPairing BPairing::theorem2(double a, double b) { return {a, b - a, b}; }

void BPairing::validate() const {
    if (std::abs(b - (a + c)) > 1e-12 * std::max(1.0, std::abs(b)))
        throw ConstraintError("B pairing requires b = a + c");
}

namespace {

struct ParsevalSides {
    double left, right, left_err, right_err;
};

// left = int g h dx; right = (1/2pi) int F(g) conj(F(h)) ds computed with
// numeric transforms.
ParsevalSides parseval_sides(const Integrand& combined, const Integrand& g, Parity pg,
                             const Integrand& h, Parity ph, double tol, const Options& opts) {
    auto left = quad::integrate_line(combined, opts.quad_tol, 1e-3);

    auto transform_product = [&](double s) {
        auto fg = quad::fourier_numeric_full(g, pg, s, opts.inner_tol, 1e-15).value;
        auto fh = quad::fourier_numeric_full(h, ph, s, opts.inner_tol, 1e-15).value;
        return fg.re * fh.re + fg.im * fh.im; // Re of F(g) conj(F(h))
    };
    Integrand outer(transform_product, -0.5, DecayClass::polynomial, 2.0);
    auto right = quad::integrate_semi(outer, std::min(tol, opts.outer_tol), 1.0);
    return {left.value, right.value / pi, left.abs_error_estimate,
            right.abs_error_estimate / pi};
}

ParsevalReport finish_parseval(const std::string& description, const ParsevalSides& sides) {
    ParsevalReport out;
    out.description = description;
    out.left = sides.left;
    out.right = sides.right;
    out.left_err = sides.left_err;
    out.right_err = sides.right_err;
    double scale = std::max({std::abs(sides.left), std::abs(sides.right), 1e-12});
    out.rel_deviation = std::abs(sides.left - sides.right) / scale;
    return out;
}

} // namespace

ParsevalReport parseval_pair(const PairingParams& pairing, int n, int m, double tol,
                             const Options& opts) {
    pairing.validate();
    SymPoly pn = sympoly::family_a({pairing.c, pairing.d}, n, opts.override_validation);
    SymPoly pm = sympoly::family_a({pairing.v, pairing.w}, m, opts.override_validation);
    Integrand combined =
        integrand_a_pair(pairing.alpha + pairing.l, pairing.beta + pairing.u, pn, pm);
    Integrand g = integrand_a_single(pairing.alpha, pairing.beta, pn);
    Integrand h = integrand_a_single(pairing.l, pairing.u, pm);
    std::ostringstream os;
    os << "A pair: alpha=" << pairing.alpha << " beta=" << pairing.beta << " l=" << pairing.l
       << " u=" << pairing.u << " c=" << pairing.c << " d=" << pairing.d << " n=" << n
       << " m=" << m;
    auto sides = parseval_sides(combined, g, parity(n) ? Parity::odd : Parity::even, h,
                                parity(m) ? Parity::odd : Parity::even, tol, opts);
    return finish_parseval(os.str(), sides);
}

ParsevalReport parseval_pair(const BPairing& pairing, int n, int m, double tol,
                             const Options& opts) {
    pairing.validate();
    SymPoly pn = sympoly::family_b({pairing.b}, n, opts.override_validation);
    SymPoly pm = sympoly::family_b({pairing.b}, m, opts.override_validation);
    Integrand combined = integrand_b_pair(pairing.a + pairing.c, pn, pm);
    Integrand u = integrand_b_single(pairing.a, pn);
    Integrand v = integrand_b_single(pairing.c, pm);
    std::ostringstream os;
    os << "B pair: a=" << pairing.a << " c=" << pairing.c << " b=" << pairing.b << " n=" << n
       << " m=" << m;
    auto sides = parseval_sides(combined, u, parity(n) ? Parity::odd : Parity::even, v,
                                parity(m) ? Parity::odd : Parity::even, tol, opts);
    return finish_parseval(os.str(), sides);
}

GramReport gram_fn(RelationId relation, const std::map<std::string, double>& params,
                   int max_degree, GramMode mode, double tol, const Options& opts) {
    if (relation != RelationId::thm1 && relation != RelationId::thm2)
        throw DomainError("gram_fn handles relations thm1 and thm2");
    if (mode == GramMode::weight_direct)
        throw DomainError("gram_fn modes are closed_form and numeric_transform");
    const bool is_thm1 = relation == RelationId::thm1;
    const int size = max_degree + 1;

    GramReport report;
    report.relation = relation;
    report.mode = mode;
    report.params = params;
    report.max_degree = max_degree;
    report.tol = tol;
    report.numeric = zeros(size);
    report.theoretical = zeros(size);
    report.status.assign(size, std::vector<EntryStatus>(size, EntryStatus::match));

    double alpha = 0, beta = 0, p = 0, q = 0, a = 0, b = 0, c = 0;
    if (is_thm1) {
        alpha = get_param(params, "alpha");
        beta = get_param(params, "beta");
        p = get_param(params, "p");
        q = get_param(params, "q");
        // advisory constraint check (throws ConstraintError unless override)
        fourier::theorem1_rhs(max_degree, alpha, beta, p, q, opts.override_validation);
    } else {
        a = get_param(params, "a");
        b = get_param(params, "b");
        c = b - a;
        fourier::theorem2_rhs(max_degree, a, b, opts.override_validation);
    }

    std::vector<SymPoly> polys;
    for (int n = 0; n < size; ++n)
        polys.push_back(is_thm1 ? sympoly::family_a({p, q}, n, opts.override_validation)
                                : sympoly::family_b({b}, n, opts.override_validation));

    for (int n = 0; n < size; ++n)
        report.theoretical[n][n] = is_thm1 ? fourier::theorem1_rhs(n, alpha, beta, p, q, true)
                                           : fourier::theorem2_rhs(n, a, b, true);

    if (mode == GramMode::numeric_transform) {
        report.parseval_integrals = zeros(size);
        EntryList entries(size);
        parallel_for(entries.pairs.size(), opts.jobs, [&](size_t i) {
            auto [n, m] = entries.pairs[i];
            if ((n + m) % 2 == 1) return; // exact zero by parity
            Integrand g = is_thm1 ? integrand_a_single(alpha, beta, polys[n])
                                  : integrand_b_single(a, polys[n]);
            Integrand h = is_thm1 ? integrand_a_single(p - alpha, q - beta, polys[m])
                                  : integrand_b_single(c, polys[m]);
            Parity pg = parity(n) ? Parity::odd : Parity::even;
            Parity ph = parity(m) ? Parity::odd : Parity::even;
            auto transform_product = [&](double s) {
                auto fg = quad::fourier_numeric_full(g, pg, s, opts.inner_tol, 1e-15).value;
                auto fh = quad::fourier_numeric_full(h, ph, s, opts.inner_tol, 1e-15).value;
                return fg.re * fh.re + fg.im * fh.im;
            };
            Integrand outer(transform_product, -0.5, DecayClass::polynomial, 2.0);
            try {
                auto r = quad::integrate_semi(outer, opts.outer_tol, 1.0);
                double parseval = r.value / pi; // (1/2pi) over the full line
                double entry = is_thm1 ? parseval * fourier::rprefactor_a(n, alpha, beta) *
                                             fourier::rprefactor_a(m, p - alpha, q - beta)
                                       : parseval * fourier::rprefactor_b(n, a) *
                                             fourier::rprefactor_b(m, c);
                report.parseval_integrals[n][m] = report.parseval_integrals[m][n] = parseval;
                report.numeric[n][m] = report.numeric[m][n] = entry;
            } catch (const NonConvergence&) {
                report.status[n][m] = report.status[m][n] = EntryStatus::diverged;
            }
        });
    } else {
        report.truncation_bound = opts.closed_form_bound;
        const double S = opts.closed_form_bound;
        EntryList entries(size);
        parallel_for(entries.pairs.size(), opts.jobs, [&](size_t i) {
            auto [n, m] = entries.pairs[i];
            if ((n + m) % 2 == 1) return;
            try {
                std::function<double(double)> product;
                bool untrusted = false;
                if (is_thm1) {
                    fourier::FnASpec fn(n, alpha, beta, p, q);
                    fourier::FnASpec fm(m, p - alpha, q - beta, p, q);
                    product = [&, fn, fm](double s) {
                        return fourier::fn_a(fn, s) * fourier::fn_a(fm, s);
                    };
                    auto dn = fourier::fn_a_full(fn, S);
                    auto dm = fourier::fn_a_full(fm, S);
                    untrusted = dn.untrusted || dm.untrusted;
                } else {
                    fourier::FnBSpec fn{n, a, b};
                    fourier::FnBSpec fm{m, c, b};
                    product = [&, fn, fm](double s) {
                        return fourier::fn_b(fn, s, opts.b_source) *
                               fourier::fn_b(fm, s, opts.b_source);
                    };
                    auto dn = fourier::fn_b_full(fn, S, opts.b_source);
                    auto dm = fourier::fn_b_full(fm, S, opts.b_source);
                    untrusted = dn.untrusted || dm.untrusted;
                }
                // growth detection: compare envelope magnitude across the tail
                double m1 = std::abs(product(0.50 * S));
                double m2 = std::abs(product(0.75 * S));
                double m3 = std::abs(product(0.98 * S));
                bool growing = m3 > 4.0 * m2 && m2 > 4.0 * m1 && m3 > 1.0;
                auto r = quad::integrate_finite(product, 0.0, S, opts.outer_tol, 1.0);
                double entry = r.value / pi;
                report.numeric[n][m] = report.numeric[m][n] = entry;
                if (growing) {
                    report.status[n][m] = report.status[m][n] = EntryStatus::diverged;
                } else if (untrusted) {
                    report.status[n][m] = report.status[m][n] = EntryStatus::untrusted;
                }
            } catch (const Error&) {
                report.status[n][m] = report.status[m][n] = EntryStatus::diverged;
            }
        });
    }

    finalize_deviations(report, 1.0);
    return report;
}

std::vector<double> default_s_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(0.25 * i);
    return grid;
}

TransformCheck transform_compare(char kind, int n, const std::map<std::string, double>& params,
                                 const std::vector<double>& s_grid, double tol,
                                 const Options& opts) {
    TransformCheck check;
    check.kind = kind;
    check.n = n;
    check.params = params;
    check.s_grid = s_grid;
    check.tol = tol;
    check.closed_values.resize(s_grid.size());
    check.numeric_values.resize(s_grid.size());
    check.abs_dev.assign(s_grid.size(), 0.0);
    check.point_notes.assign(s_grid.size(), "");

    Integrand numeric_integrand = [&]() -> Integrand {
        if (kind == 'A') {
            double alpha = get_param(params, "alpha");
            double beta = get_param(params, "beta");
            double cc = get_param_or(params, "c", alpha);
            double dd = get_param_or(params, "d", beta);
            SymPoly pn = sympoly::family_a({cc, dd}, n, true);
            return integrand_a_single(alpha, beta, pn);
        }
        double a = get_param(params, "a");
        double b = get_param_or(params, "b", a);
        SymPoly pn = sympoly::family_b({b}, n, true);
        return integrand_b_single(a, pn);
    }();
    Parity par = parity(n) ? Parity::odd : Parity::even;

    size_t failures = 0;
    for (size_t i = 0; i < s_grid.size(); ++i) {
        double s = s_grid[i];
        bool point_ok = true;
        try {
            if (kind == 'A') {
                double alpha = get_param(params, "alpha");
                double beta = get_param(params, "beta");
                double cc = get_param_or(params, "c", alpha);
                double dd = get_param_or(params, "d", beta);
                auto full = fourier::fn_a_full(fourier::FnASpec(n, alpha, beta, cc, dd), s);
                double v = fourier::prefactor_a(n, alpha, beta) * full.value;
                check.closed_values[i] = (n % 2 == 0) ? TransformValue{v, 0.0}
                                                      : TransformValue{0.0, -v};
                if (full.untrusted) check.point_notes[i] = "untrusted: closed-form cancellation";
            } else {
                double a = get_param(params, "a");
                double b = get_param_or(params, "b", a);
                auto full =
                    fourier::fn_b_full(fourier::FnBSpec{n, a, b}, s, opts.b_source);
                double v = fourier::prefactor_b(n, a) * full.value;
                check.closed_values[i] = (n % 2 == 0) ? TransformValue{v, 0.0}
                                                      : TransformValue{0.0, -v};
                if (full.untrusted) check.point_notes[i] = "untrusted: closed-form cancellation";
            }
        } catch (const Error& e) {
            check.point_notes[i] = std::string("closed form failed: ") + e.what();
            point_ok = false;
        }
        try {
            check.numeric_values[i] = quad::fourier_numeric(numeric_integrand, par, s,
                                                            std::min(tol * 1e-2, 1e-9));
        } catch (const Error& e) {
            if (!check.point_notes[i].empty()) check.point_notes[i] += "; ";
            check.point_notes[i] += std::string("numeric transform failed: ") + e.what();
            point_ok = false;
        }
        if (!point_ok) {
            ++failures;
            continue;
        }
        double dre = check.closed_values[i].re - check.numeric_values[i].re;
        double dim = check.closed_values[i].im - check.numeric_values[i].im;
        check.abs_dev[i] = std::hypot(dre, dim);
    }

    // verdict: agree when every evaluable point is inside tol; otherwise
    // analytic-part-only when the small-s regime still matches at 1e-3 while
    // the deviation grows with s; otherwise diverge.
    double max_rel = 0.0, small_s_rel = 0.0;
    double first_dev = -1.0, last_dev = 0.0;
    for (size_t i = 0; i < s_grid.size(); ++i) {
        if (!check.point_notes[i].empty() &&
            check.point_notes[i].find("failed") != std::string::npos)
            continue;
        double scale = std::max({check.closed_values[i].abs(), check.numeric_values[i].abs(),
                                 1e-300});
        double rel = check.abs_dev[i] / scale;
        max_rel = std::max(max_rel, rel);
        if (s_grid[i] <= 0.5) small_s_rel = std::max(small_s_rel, rel);
        if (first_dev < 0.0) first_dev = check.abs_dev[i];
        last_dev = check.abs_dev[i];
    }
    if (failures == s_grid.size()) {
        check.verdict = Verdict::diverge;
    } else if (max_rel <= tol && failures == 0) {
        check.verdict = Verdict::agree;
    } else if (small_s_rel <= 1e-3 && last_dev > first_dev) {
        check.verdict = Verdict::analytic_part_only;
    } else {
        check.verdict = Verdict::diverge;
    }
    return check;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : m) out.push_back(row);
    return out;
}

} // namespace

nlohmann::json to_json(const GramReport& report) {
    nlohmann::json j;
    j["relation"] = to_string(report.relation);
    j["mode"] = to_string(report.mode);
    j["params"] = report.params;
    j["N"] = report.max_degree;
    j["tol"] = report.tol;
    j["numeric"] = matrix_json(report.numeric);
    j["theoretical"] = matrix_json(report.theoretical);
    j["abs_dev"] = matrix_json(report.abs_dev);
    j["rel_dev"] = matrix_json(report.rel_dev);
    nlohmann::json status = nlohmann::json::array();
    for (const auto& row : report.status) {
        nlohmann::json r = nlohmann::json::array();
        for (auto s : row) r.push_back(to_string(s));
        status.push_back(r);
    }
    j["status"] = status;
    j["all_match"] = report.all_match();
    if (!report.parseval_integrals.empty())
        j["parseval_integrals"] = matrix_json(report.parseval_integrals);
    if (report.mode == GramMode::closed_form) j["truncation_bound"] = report.truncation_bound;
    return j;
}

nlohmann::json to_json(const ParsevalReport& report) {
    nlohmann::json j;
    j["description"] = report.description;
    j["left"] = report.left;
    j["right"] = report.right;
    j["rel_deviation"] = report.rel_deviation;
    j["left_err"] = report.left_err;
    j["right_err"] = report.right_err;
    return j;
}

nlohmann::json to_json(const TransformCheck& check) {
    nlohmann::json j;
    j["kind"] = std::string(1, check.kind);
    j["n"] = check.n;
    j["params"] = check.params;
    j["tol"] = check.tol;
    j["verdict"] = to_string(check.verdict);
    nlohmann::json points = nlohmann::json::array();
    for (size_t i = 0; i < check.s_grid.size(); ++i) {
        nlohmann::json p;
        p["s"] = check.s_grid[i];
        p["closed_re"] = check.closed_values[i].re;
        p["closed_im"] = check.closed_values[i].im;
        p["numeric_re"] = check.numeric_values[i].re;
        p["numeric_im"] = check.numeric_values[i].im;
        p["abs_dev"] = check.abs_dev[i];
        if (!check.point_notes[i].empty()) p["note"] = check.point_notes[i];
        points.push_back(p);
    }
    j["points"] = points;
    return j;
}

} // namespace finorth::verify
