#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "finorth/acceptance.hpp"
#include "finorth/errors.hpp"
#include "finorth/fourier.hpp"
#include "finorth/quad.hpp"
#include "finorth/sympoly.hpp"
#include "finorth/verify.hpp"

namespace {

using finorth::ConstraintError;
using finorth::DomainError;
using finorth::Error;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// grid syntax: "start:stop:step" or a single value
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto p1 = text.find(':');
    if (p1 == std::string::npos) {
        out.push_back(std::stod(text));
        return out;
    }
    auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string::npos) throw DomainError("grid must be start:stop:step or a value");
    double start = std::stod(text.substr(0, p1));
    double stop = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    double step = std::stod(text.substr(p2 + 1));
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw DomainError("grid bounds must be finite");
    if (!(step > 0.0) || stop < start) throw DomainError("grid requires step > 0 and stop >= start");
    for (long i = 0;; ++i) {
        double v = start + i * step;
        if (v > stop + 1e-12 * std::max(1.0, std::abs(stop))) break;
        out.push_back(v);
        if (i > 1000000) throw DomainError("grid too large");
    }
    return out;
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        if (body.empty() || body.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << body;
}

finorth::sympoly::BParamSource parse_source(const std::string& name) {
    if (name == "printed") return finorth::sympoly::BParamSource::printed;
    if (name == "derived") return finorth::sympoly::BParamSource::derived;
    throw DomainError("source must be printed or derived");
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string family, fn;
    double a = 0, b = 0;
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
    double q1 = 0, q2 = 0;
    int n = 0;
    std::string x_spec = "0";
    std::string source = "printed";
    bool override_validation = false;
};

int run_eval(const EvalArgs& args) {
    std::vector<double> xs = parse_grid(args.x_spec);
    std::vector<double> values;
    if (!args.family.empty()) {
        finorth::sympoly::SymPoly poly = args.family == "A"
            ? finorth::sympoly::family_a({args.a, args.b}, args.n, args.override_validation)
            : finorth::sympoly::family_b({args.a}, args.n, args.override_validation);
        for (double x : xs) values.push_back(poly(x));
    } else if (args.fn == "A") {
        finorth::fourier::FnASpec spec(args.n, args.p1, args.p2, args.p3, args.p4);
        for (double x : xs) values.push_back(finorth::fourier::fn_a(spec, x));
    } else if (args.fn == "B") {
        finorth::fourier::FnBSpec spec{args.n, args.q1, args.q2};
        auto src = parse_source(args.source);
        for (double x : xs) values.push_back(finorth::fourier::fn_b(spec, x, src));
    } else {
        throw DomainError("eval requires --family A|B or --fn A|B");
    }
    for (double v : values) std::cout << fmt17(v) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct GramArgs {
    std::string relation;
    std::map<std::string, double> params;
    int max_degree = 3;
    double tol = 0.0; // 0 = per-mode default
    std::string mode = "";
    std::string out;
    bool override_validation = false;
    int jobs = 0;
    double closed_bound = 10.0;
};

int run_gram(const GramArgs& args) {
    auto relation = finorth::verify::relation_from_string(args.relation);
    bool weight_relation = relation == finorth::verify::RelationId::eq9 ||
                           relation == finorth::verify::RelationId::eq17;
    std::string mode = args.mode;
    if (mode.empty()) mode = weight_relation ? "weight" : "numeric";
    if (weight_relation && mode != "weight")
        throw DomainError("relations eq9/eq17 use --mode weight");
    if (!weight_relation && mode == "weight")
        throw DomainError("relations thm1/thm2 use --mode numeric or closed");

    finorth::verify::Options opts;
    opts.override_validation = args.override_validation;
    opts.jobs = args.jobs > 0 ? args.jobs : 1;
    opts.closed_form_bound = args.closed_bound;

    double tol = args.tol > 0.0 ? args.tol : (weight_relation ? 1e-8 : 1e-6);

    finorth::verify::GramReport report =
        weight_relation
            ? finorth::verify::gram_weight_direct(relation, args.params, args.max_degree, tol,
                                                  opts)
            : finorth::verify::gram_fn(relation, args.params, args.max_degree,
                                       mode == "numeric"
                                           ? finorth::verify::GramMode::numeric_transform
                                           : finorth::verify::GramMode::closed_form,
                                       tol, opts);

    auto j = finorth::verify::to_json(report);
    j["schema_version"] = "1.0";
    j["command"] = "gram";
    write_output(args.out, j.dump(2));
    return report.all_match() ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------

struct FourierArgs {
    std::string kind;
    int n = 0;
    std::map<std::string, double> params;
    std::string s_spec = "0:3:0.25";
    double tol = 1e-6;
    std::string format = "csv";
    std::string out;
    std::string source = "printed";
};

int run_fourier(const FourierArgs& args) {
    if (args.kind != "A" && args.kind != "B") throw DomainError("--kind must be A or B");
    std::vector<double> grid = parse_grid(args.s_spec);
    finorth::verify::Options opts;
    opts.b_source = parse_source(args.source);
    auto check =
        finorth::verify::transform_compare(args.kind[0], args.n, args.params, grid, args.tol, opts);

    if (args.format == "json") {
        auto j = finorth::verify::to_json(check);
        j["schema_version"] = "1.0";
        j["command"] = "fourier";
        write_output(args.out, j.dump(2));
    } else if (args.format == "csv") {
        std::string body = "s,closed_re,closed_im,numeric_re,numeric_im,abs_dev\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            body += fmt17(check.s_grid[i]) + "," + fmt17(check.closed_values[i].re) + "," +
                    fmt17(check.closed_values[i].im) + "," + fmt17(check.numeric_values[i].re) +
                    "," + fmt17(check.numeric_values[i].im) + "," + fmt17(check.abs_dev[i]) +
                    "\n";
        }
        write_output(args.out, body);
    } else {
        throw DomainError("--format must be csv or json");
    }

    size_t failed_points = 0;
    for (const auto& note : check.point_notes)
        if (note.find("failed") != std::string::npos) ++failed_points;
    return failed_points == grid.size() && !grid.empty() ? kExitNumeric : kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    double tol = 1e-10;
    std::string out;
    int jobs = 0;
};

int run_report(const ReportArgs& args) {
    finorth::acceptance::Config config;
    config.quad_tol = args.tol;
    config.jobs = args.jobs;
    auto result = finorth::acceptance::run_suite(config);
    write_output(args.out, finorth::acceptance::report_json(result, config).dump(2));
    for (const auto& c : result.checks)
        if (!c.pass) return kExitMismatch;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite symmetric orthogonal families: evaluation and verification"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate a polynomial or transformed function");
    eval->add_option("--family", eval_args.family, "polynomial family (A or B)");
    eval->add_option("--fn", eval_args.fn, "transformed function family (A or B)");
    eval->add_option("--a", eval_args.a, "family parameter a");
    eval->add_option("--b", eval_args.b, "family parameter b");
    eval->add_option("--n", eval_args.n, "degree")->required();
    eval->add_option("--p1", eval_args.p1, "fn A parameter p1");
    eval->add_option("--p2", eval_args.p2, "fn A parameter p2");
    eval->add_option("--p3", eval_args.p3, "fn A parameter p3");
    eval->add_option("--p4", eval_args.p4, "fn A parameter p4");
    eval->add_option("--q1", eval_args.q1, "fn B parameter q1");
    eval->add_option("--q2", eval_args.q2, "fn B parameter q2");
    eval->add_option("--x", eval_args.x_spec, "evaluation point or grid start:stop:step")
        ->required();
    eval->add_option("--source", eval_args.source, "fn B coefficient source (printed|derived)");
    eval->add_flag("--override", eval_args.override_validation, "skip parameter validation");

    GramArgs gram_args;
    auto* gram = app.add_subcommand("gram", "orthogonality Gram matrix report");
    gram->add_option("--relation", gram_args.relation, "eq9|eq17|thm1|thm2")->required();
    gram->add_option("--N", gram_args.max_degree, "maximum degree")->required();
    gram->add_option("--tol", gram_args.tol, "entry tolerance")->check(CLI::PositiveNumber);
    gram->add_option("--mode", gram_args.mode, "weight|numeric|closed");
    gram->add_option("--out", gram_args.out, "output JSON path (default stdout)");
    gram->add_option("--jobs", gram_args.jobs, "parallel workers");
    gram->add_option("--S", gram_args.closed_bound, "closed-form truncation bound");
    gram->add_flag("--override", gram_args.override_validation, "skip parameter validation");
    double g_a = 0, g_b = 0, g_alpha = 0, g_beta = 0, g_p = 0, g_q = 0;
    auto* ga = gram->add_option("--a", g_a, "parameter a");
    auto* gb = gram->add_option("--b", g_b, "parameter b");
    auto* galpha = gram->add_option("--alpha", g_alpha, "parameter alpha");
    auto* gbeta = gram->add_option("--beta", g_beta, "parameter beta");
    auto* gp = gram->add_option("--p", g_p, "parameter p");
    auto* gq = gram->add_option("--q", g_q, "parameter q");

    FourierArgs fourier_args;
    auto* fourier = app.add_subcommand("fourier", "closed-form vs numeric transform comparison");
    fourier->add_option("--kind", fourier_args.kind, "A or B")->required();
    fourier->add_option("--n", fourier_args.n, "degree")->required();
    fourier->add_option("--s", fourier_args.s_spec, "s grid start:stop:step or a value");
    fourier->add_option("--tol", fourier_args.tol, "agreement tolerance")->check(CLI::PositiveNumber);
    fourier->add_option("--format", fourier_args.format, "csv|json");
    fourier->add_option("--out", fourier_args.out, "output path (default stdout)");
    fourier->add_option("--source", fourier_args.source, "fn B coefficient source");
    double f_a = 0, f_b = 0, f_alpha = 0, f_beta = 0, f_c = 0, f_d = 0;
    auto* fa = fourier->add_option("--a", f_a, "parameter a");
    auto* fb = fourier->add_option("--b", f_b, "parameter b");
    auto* falpha = fourier->add_option("--alpha", f_alpha, "parameter alpha");
    auto* fbeta = fourier->add_option("--beta", f_beta, "parameter beta");
    auto* fc = fourier->add_option("--c", f_c, "polynomial parameter c");
    auto* fd = fourier->add_option("--d", f_d, "polynomial parameter d");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "run the full verification suite");
    report->add_option("--tol", report_args.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
    report->add_option("--out", report_args.out, "output JSON path (default stdout)");
    report->add_option("--jobs", report_args.jobs, "parallel workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*eval) return run_eval(eval_args);
        if (*gram) {
            if (*ga) gram_args.params["a"] = g_a;
            if (*gb) gram_args.params["b"] = g_b;
            if (*galpha) gram_args.params["alpha"] = g_alpha;
            if (*gbeta) gram_args.params["beta"] = g_beta;
            if (*gp) gram_args.params["p"] = g_p;
            if (*gq) gram_args.params["q"] = g_q;
            return run_gram(gram_args);
        }
        if (*fourier) {
            if (*fa) fourier_args.params["a"] = f_a;
            if (*fb) fourier_args.params["b"] = f_b;
            if (*falpha) fourier_args.params["alpha"] = f_alpha;
            if (*fbeta) fourier_args.params["beta"] = f_beta;
            if (*fc) fourier_args.params["c"] = f_c;
            if (*fd) fourier_args.params["d"] = f_d;
            return run_fourier(fourier_args);
        }
        if (*report) return run_report(report_args);
    } catch (const ConstraintError& e) {
        std::cerr << "constraint error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
