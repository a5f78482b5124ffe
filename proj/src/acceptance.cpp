#include "finorth/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "finorth/fourier.hpp"
#include "finorth/quad.hpp"
#include "finorth/specfun.hpp"
#include "finorth/sympoly.hpp"
#include "finorth/util.hpp"
#include "finorth/verify.hpp"

namespace finorth::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

int resolve_jobs(const Config& config) {
    if (config.jobs > 0) return config.jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

CheckResult timed_check(const std::string& id, double budget_ms,
                        const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.id = id;
    auto start = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.runtime_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() -
                                                                              start)
            .count();
    if (r.runtime_ms > budget_ms) {
        r.pass = false;
        std::ostringstream os;
        os << r.detail << (r.detail.empty() ? "" : "; ") << "runtime budget " << budget_ms
           << " ms exceeded";
        r.detail = os.str();
    }
    return r;
}

double rel_dev(double value, double target) {
    double scale = std::max({std::abs(value), std::abs(target), 1e-300});
    return std::abs(value - target) / scale;
}

// -- criterion 1: polynomial layer exactness --------------------------------

void check_poly_exact(CheckResult& r) {
    // expected monic coefficients, frozen from the exact rational expansion
    const std::vector<std::vector<double>> expected = {
        {1.0}, {0.0, 1.0}, {-0.2, 0.0, 1.0}, {0.0, -1.0, 0.0, 1.0}};
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        auto poly = sympoly::family_a({0.0, 4.0}, n);
        for (int j = 0; j <= n; ++j)
            worst = std::max(worst, std::abs(poly.coeffs()[j] - expected[n][j]));
    }
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-12;
    r.pass = worst <= r.tol;
    std::ostringstream os;
    os << "max coefficient deviation " << worst;
    r.detail = os.str();
}

// -- criterion 2: ODE residuals ----------------------------------------------

void check_ode_residual(CheckResult& r) {
    double worst = 0.0;
    auto scan = [&](const sympoly::SymParams& sp, const sympoly::SymPoly& poly) {
        double cmax = 0.0;
        for (double c : poly.coeffs()) cmax = std::max(cmax, std::abs(c));
        for (int i = 0; i < 20; ++i) {
            double x = -3.0 + 6.0 * (i + 0.5) / 20.0;
            double res = sympoly::ode_residual(sp, poly, x);
            double scale = cmax * std::pow(1.0 + std::abs(x), poly.degree() + 2);
            worst = std::max(worst, std::abs(res) / scale);
        }
    };
    for (double a : {0.0, -1.0, -2.0, -3.0, -4.0}) {
        for (double boff : {7.0, 8.0, 9.0, 10.0, 11.0}) {
            sympoly::FamilyAParams params{a, boff - a}; // keep a+b-1/2 >= 6
            auto sp = sympoly::family_a_sym_params(params);
            for (int n = 0; n <= 6; ++n) scan(sp, sympoly::family_a(params, n));
        }
    }
    for (double a : {7.0, 8.0, 9.0, 10.0, 11.0}) {
        sympoly::FamilyBParams params{a};
        auto sp = sympoly::family_b_sym_params(params);
        for (int n = 0; n <= 6; ++n) scan(sp, sympoly::family_b(params, n));
    }
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-9;
    r.pass = worst <= r.tol;
    std::ostringstream os;
    os << "max scaled residual " << worst;
    r.detail = os.str();
}

// -- criteria 3/4: weight-direct Gram matrices -------------------------------

// even moments of the two weights, through the Beta/Gamma oracle
double moment_oracle_a(double b, int two_j) {
    return specfun::beta(two_j / 2 + 0.5, b - two_j / 2 - 0.5);
}
double moment_oracle_b(int two_j) { return specfun::gamma(3.5 - two_j / 2); }

double diag_from_moments(const sympoly::SymPoly& poly,
                         const std::function<double(int)>& moment) {
    const auto& c = poly.coeffs();
    double sum = 0.0;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < c.size(); ++j) {
            if (c[i] == 0.0 || c[j] == 0.0) continue;
            sum += c[i] * c[j] * moment(static_cast<int>(i + j));
        }
    return sum;
}

void check_gram_eq9(CheckResult& r, const Config& config) {
    verify::Options opts;
    opts.quad_tol = config.quad_tol;
    opts.jobs = resolve_jobs(config);
    auto report = verify::gram_weight_direct(verify::RelationId::eq9, {{"a", 0.0}, {"b", 4.0}},
                                             3, 1e-8, opts);
    const double frozen[4] = {5.0 * pi / 16.0, pi / 16.0, pi / 20.0, pi / 4.0};
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        auto poly = sympoly::family_a({0.0, 4.0}, n);
        double oracle = diag_from_moments(poly, [&](int j) { return moment_oracle_a(4.0, j); });
        worst = std::max(worst, rel_dev(oracle, frozen[n]));
        worst = std::max(worst, rel_dev(report.numeric[n][n], frozen[n]));
    }
    bool ok = report.all_match() && worst <= 1e-8;
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-8;
    r.pass = ok;
    std::ostringstream os;
    os << "max diagonal deviation " << worst << (report.all_match() ? "" : "; entry mismatch");
    r.detail = os.str();
}

void check_gram_eq17(CheckResult& r, const Config& config) {
    verify::Options opts;
    opts.quad_tol = config.quad_tol;
    opts.jobs = resolve_jobs(config);
    auto report =
        verify::gram_weight_direct(verify::RelationId::eq17, {{"a", 4.0}}, 3, 1e-8, opts);
    const double sq = std::sqrt(pi);
    const double frozen[4] = {specfun::gamma(3.5), 3.0 * sq / 4.0, sq / 5.0, 2.0 * sq / 3.0};
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        auto poly = sympoly::family_b({4.0}, n);
        double oracle = diag_from_moments(poly, moment_oracle_b);
        worst = std::max(worst, rel_dev(oracle, frozen[n]));
        worst = std::max(worst, rel_dev(report.numeric[n][n], frozen[n]));
    }
    bool ok = report.all_match() && worst <= 1e-8;
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-8;
    r.pass = ok;
    std::ostringstream os;
    os << "max diagonal deviation " << worst << (report.all_match() ? "" : "; entry mismatch");
    r.detail = os.str();
}

// -- criterion 5: Parseval identity ------------------------------------------

void check_parseval(CheckResult& r, const Config& config) {
    verify::Options opts;
    opts.quad_tol = config.quad_tol;
    opts.jobs = resolve_jobs(config);
    double worst = 0.0;
    std::ostringstream os;

    verify::PairingParams plain;
    plain.alpha = 0.0;
    plain.beta = 2.0;
    plain.l = 0.0;
    plain.u = 2.0;
    plain.c = plain.v = 0.0;
    plain.d = plain.w = 4.0;
    auto p1 = verify::parseval_pair(plain, 0, 0, 1e-6, opts);
    worst = std::max(worst, p1.rel_deviation);
    worst = std::max(worst, rel_dev(p1.left, 5.0 * pi / 16.0));

    auto p2 = verify::parseval_pair(plain, 0, 1, 1e-6, opts);
    worst = std::max(worst, p2.rel_deviation);

    auto thm1 = verify::PairingParams::theorem1(0.25, 2.0, 0.0, 4.0);
    for (int n = 0; n <= 2; ++n) {
        auto p = verify::parseval_pair(thm1, n, n, 1e-6, opts);
        worst = std::max(worst, p.rel_deviation);
        worst = std::max(worst, rel_dev(p.left, sympoly::norm_sq_a(0.0, 4.0, n)));
    }

    auto thm2 = verify::BPairing::theorem2(1.5, 4.0);
    auto p6 = verify::parseval_pair(thm2, 1, 1, 1e-6, opts);
    worst = std::max(worst, p6.rel_deviation);
    worst = std::max(worst, rel_dev(p6.left, sympoly::norm_sq_b(4.0, 1)));

    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-6;
    r.pass = worst <= r.tol;
    os << "max relative deviation over 6 pairs " << worst;
    r.detail = os.str();
}

// -- criteria 6/7: theorem Gram matrices, numeric-transform mode --------------

void check_thm_numeric(CheckResult& r, const Config& config, bool thm1) {
    verify::Options opts;
    opts.quad_tol = config.quad_tol;
    opts.jobs = resolve_jobs(config);
    std::map<std::string, double> params =
        thm1 ? std::map<std::string, double>{{"alpha", 0.25}, {"beta", 2.0}, {"p", 0.0}, {"q", 4.0}}
             : std::map<std::string, double>{{"a", 1.5}, {"b", 4.0}};
    auto report = verify::gram_fn(thm1 ? verify::RelationId::thm1 : verify::RelationId::thm2,
                                  params, 3, verify::GramMode::numeric_transform, 1e-6, opts);
    double worst = 0.0;
    for (const auto& row : report.rel_dev)
        for (double d : row) worst = std::max(worst, d);

    // the Parseval-equivalent content: raw s-integrals reproduce the
    // weight-direct Gram values
    double worst_parseval = 0.0;
    for (int n = 0; n <= 3; ++n) {
        double want = thm1 ? sympoly::norm_sq_a(0.0, 4.0, n) : sympoly::norm_sq_b(4.0, n);
        worst_parseval = std::max(worst_parseval,
                                  rel_dev(report.parseval_integrals[n][n], want));
        for (int m = 0; m <= 3; ++m) {
            if (m == n) continue;
            double scale = std::sqrt(std::abs(
                (thm1 ? sympoly::norm_sq_a(0.0, 4.0, n) : sympoly::norm_sq_b(4.0, n)) *
                (thm1 ? sympoly::norm_sq_a(0.0, 4.0, m) : sympoly::norm_sq_b(4.0, m))));
            worst_parseval =
                std::max(worst_parseval, std::abs(report.parseval_integrals[n][m]) / scale);
        }
    }

    bool ok = report.all_match() && worst <= 1e-6 && worst_parseval <= 1e-6;
    r.value = std::max(worst, worst_parseval);
    r.expected = 0.0;
    r.tol = 1e-6;
    r.pass = ok;
    std::ostringstream os;
    os << "max entry deviation " << worst << ", max Parseval-side deviation " << worst_parseval
       << (report.all_match() ? "" : "; entry mismatch");
    r.detail = os.str();
}

// -- criterion 8: transform oracle calibration --------------------------------

void check_fourier_calibration(CheckResult& r) {
    quad::Integrand f([](double x) { return 1.0 / (1.0 + x * x); }, 0.0,
                      quad::DecayClass::polynomial, 2.0);
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        auto v = quad::fourier_numeric(f, quad::Parity::even, s, 1e-10);
        worst = std::max(worst, rel_dev(v.re, pi * std::exp(-s)));
    }
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-8;
    r.pass = worst <= r.tol;
    std::ostringstream os;
    os << "max relative deviation vs pi*exp(-|s|): " << worst;
    r.detail = os.str();
}

// -- criterion 9: internal consistency of the closed forms --------------------

void check_closed_consistency(CheckResult& r) {
    double worst = 0.0;
    auto compare = [&](const TransformValue& x, const TransformValue& y) {
        double scale = std::max({x.abs(), y.abs(), 1e-300});
        worst = std::max(worst, std::hypot(x.re - y.re, x.im - y.im) / scale);
    };
    for (int n = 0; n <= 4; ++n) {
        for (double s = 0.0; s <= 3.0 + 1e-9; s += 0.5) {
            compare(fourier::transform_a_closed(n, 0.25, 2.0, 0.0, 4.0, s),
                    fourier::transform_a_kernel_sum(n, 0.25, 2.0, 0.0, 4.0, s));
            for (auto src : {sympoly::BParamSource::printed, sympoly::BParamSource::derived}) {
                compare(fourier::transform_b_closed(n, 4.0, 4.0, s, src),
                        fourier::transform_b_kernel_sum(n, 4.0, 4.0, s, src));
            }
        }
    }
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-10;
    r.pass = worst <= r.tol;
    std::ostringstream os;
    os << "max relative gap between closed form and kernel sum: " << worst;
    r.detail = os.str();
}

// -- criterion 10: findings completeness ---------------------------------------

void check_findings(CheckResult& r, std::vector<std::string>& findings) {
    auto check = verify::transform_compare('A', 0, {{"alpha", 0.0}, {"beta", 1.0}},
                                           verify::default_s_grid(), 1e-6);
    bool verdict_ok = check.verdict != verify::Verdict::agree;
    double worst = 0.0;
    for (size_t i = 0; i < check.s_grid.size(); ++i) {
        double s = check.s_grid[i];
        worst = std::max(worst, rel_dev(check.closed_values[i].re, pi * std::cosh(s)));
        worst = std::max(worst, rel_dev(check.numeric_values[i].re, pi * std::exp(-s)));
    }
    r.value = worst;
    r.expected = 0.0;
    r.tol = 1e-6;
    r.pass = verdict_ok && worst <= r.tol;
    std::ostringstream os;
    os << "verdict=" << verify::to_string(check.verdict)
       << ", max deviation from the two reference curves " << worst;
    r.detail = os.str();

    std::ostringstream finding;
    finding << "transform_compare kind=A n=0 alpha=0 beta=1: verdict="
            << verify::to_string(check.verdict)
            << "; closed form follows pi*cosh(s), numeric transform follows pi*exp(-|s|)";
    for (size_t i = 0; i < check.s_grid.size(); i += 4) {
        finding << "; s=" << check.s_grid[i] << ": closed=" << check.closed_values[i].re
                << " numeric=" << check.numeric_values[i].re;
    }
    findings.push_back(finding.str());
}

} // namespace

SuiteResult run_suite(const Config& config) {
    SuiteResult out;
    out.checks.push_back(timed_check("poly_exact", 1000.0, check_poly_exact));
    out.checks.push_back(timed_check("ode_residual", 5000.0, check_ode_residual));
    out.checks.push_back(timed_check("gram_eq9", 30000.0,
                                     [&](CheckResult& r) { check_gram_eq9(r, config); }));
    out.checks.push_back(timed_check("gram_eq17", 30000.0,
                                     [&](CheckResult& r) { check_gram_eq17(r, config); }));
    out.checks.push_back(timed_check("parseval", 300000.0,
                                     [&](CheckResult& r) { check_parseval(r, config); }));
    out.checks.push_back(timed_check(
        "thm1_numeric", 600000.0, [&](CheckResult& r) { check_thm_numeric(r, config, true); }));
    out.checks.push_back(timed_check(
        "thm2_numeric", 600000.0, [&](CheckResult& r) { check_thm_numeric(r, config, false); }));
    out.checks.push_back(timed_check("fourier_calibration", 10000.0, check_fourier_calibration));
    out.checks.push_back(timed_check("closed_consistency", 10000.0, check_closed_consistency));
    out.checks.push_back(timed_check("findings_transform_compare", 10000.0,
                                     [&](CheckResult& r) { check_findings(r, out.findings); }));
    return out;
}

std::vector<CheckResult> run_all(const Config& config) { return run_suite(config).checks; }

nlohmann::json report_json(const SuiteResult& result, const Config& config) {
    nlohmann::json j;
    j["schema_version"] = "1.0";
    j["command"] = "report";
    j["params"] = {{"quad_tol", config.quad_tol}, {"jobs", config.jobs}};
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks) {
        nlohmann::json e;
        e["id"] = c.id;
        e["status"] = c.pass ? "pass" : "fail";
        e["value"] = c.value;
        e["expected"] = c.expected;
        e["tol"] = c.tol;
        e["runtime_ms"] = c.runtime_ms;
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["findings"] = result.findings;
    return j;
}

} // namespace finorth::acceptance
