#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "finorth/errors.hpp"
#include "finorth/sympoly.hpp"
#include "finorth/util.hpp"

namespace finorth::verify {

enum class RelationId { eq9, eq17, thm1, thm2 };
enum class GramMode { weight_direct, closed_form, numeric_transform };
enum class EntryStatus { match, mismatch, untrusted, diverged };
enum class Verdict { agree, analytic_part_only, diverge };

std::string to_string(RelationId id);
std::string to_string(GramMode mode);
std::string to_string(EntryStatus status);
std::string to_string(Verdict verdict);
RelationId relation_from_string(const std::string& name);

struct Options {
    bool override_validation = false;
    int jobs = 1;
    double quad_tol = 1e-10;    // weight-direct quadrature tolerance
    double outer_tol = 1e-8;    // s-integral tolerance (Parseval, theorem modes)
    double inner_tol = 1e-9;    // per-s numeric transform tolerance
    double closed_form_bound = 10.0; // truncation [-S, S] for closed-form mode
    sympoly::BParamSource b_source = sympoly::BParamSource::printed;
};

using Matrix = std::vector<std::vector<double>>;

struct GramReport {
    RelationId relation;
    GramMode mode;
    std::map<std::string, double> params;
    int max_degree = 0;
    double tol = 0.0;
    Matrix numeric, theoretical, abs_dev, rel_dev;
    std::vector<std::vector<EntryStatus>> status;
    // numeric-transform mode: raw (1/2pi) Parseval s-integrals before the
    // prefactor scaling; empty otherwise.
    Matrix parseval_integrals;
    double truncation_bound = 0.0; // closed-form mode only

    bool all_match() const;
};

// Gram matrix of the weighted polynomial inner products against the
// theoretical diagonal, entries by direct quadrature of weight * P_n * P_m.
// Entry-level quadrature failures are recorded as `diverged`, not thrown.
GramReport gram_weight_direct(RelationId relation, const std::map<std::string, double>& params,
                              int max_degree, double tol, const Options& opts = {});

// Gram matrix of the transformed function families, either through numeric
// Fourier transforms and Parseval s-integrals (numeric_transform) or by
// integrating the printed closed forms over a truncated domain (closed_form).
GramReport gram_fn(RelationId relation, const std::map<std::string, double>& params,
                   int max_degree, GramMode mode, double tol, const Options& opts = {});

// Exponent/polynomial parameters of one A-side pair.  The paired-weight
// identity requires c = v = alpha + l and d = w = beta + u.
struct PairingParams {
    double alpha = 0, beta = 0; // first function exponents
    double l = 0, u = 0;        // second function exponents
    double c = 0, d = 0;        // first polynomial parameters
    double v = 0, w = 0;        // second polynomial parameters

    static PairingParams theorem1(double alpha, double beta, double p, double q);
    void validate() const; // ConstraintError on a broken pairing
};

// B-side pair: exponents a and c with shared polynomial parameter b = a + c.
struct BPairing {
    double a = 0, c = 0, b = 0;

    static BPairing theorem2(double a, double b);
    void validate() const;
};

struct ParsevalReport {
    std::string description;
    double left = 0.0;
    double right = 0.0;
    double rel_deviation = 0.0;
    double left_err = 0.0;
    double right_err = 0.0;
};

ParsevalReport parseval_pair(const PairingParams& pairing, int n, int m, double tol,
                             const Options& opts = {});
ParsevalReport parseval_pair(const BPairing& pairing, int n, int m, double tol,
                             const Options& opts = {});

struct TransformCheck {
    char kind = 'A';
    int n = 0;
    std::map<std::string, double> params;
    std::vector<double> s_grid;
    std::vector<TransformValue> closed_values;
    std::vector<TransformValue> numeric_values;
    std::vector<double> abs_dev;
    std::vector<std::string> point_notes;
    Verdict verdict = Verdict::diverge;
    double tol = 0.0;
};

// Closed-form transform against the numeric Fourier transform of the
// explicit weighted-polynomial integrand over an s grid.
TransformCheck transform_compare(char kind, int n, const std::map<std::string, double>& params,
                                 const std::vector<double>& s_grid, double tol,
                                 const Options& opts = {});

std::vector<double> default_s_grid();

nlohmann::json to_json(const GramReport& report);
nlohmann::json to_json(const ParsevalReport& report);
nlohmann::json to_json(const TransformCheck& check);

} // namespace finorth::verify
