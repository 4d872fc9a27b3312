// Command-line front end: compute iteration traces, locate fixed points,
// run the certification suites, simulate the stage-1 experiment, and emit
// cobweb data.  stdout carries data, stderr carries diagnostics.
//
// Exit codes: 0 success, 1 failed verification checks, 2 usage error,
// 3 bracketing failure, 4 internal error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbt/dynamics.hpp"
#include "nbt/exact.hpp"
#include "nbt/fixedpoint.hpp"
#include "nbt/gridspec.hpp"
#include "nbt/rng.hpp"
#include "nbt/simulate.hpp"
#include "nbt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBracketing = 3;
constexpr int kExitInternal = 4;

// ---------------------------------------------------------------------------
// serialization helpers

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

/// Flat JSON fragments assembled field by field; doubles carry 17
/// significant digits so a re-parse reproduces them bit-exactly.
class JsonObject {
  public:
    JsonObject& field(const std::string& key, double value) {
        return raw(key, fmt17(value));
    }
    JsonObject& field(const std::string& key, long long value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, std::uint64_t value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, int value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const std::string& key, bool value) {
        return raw(key, value ? "true" : "false");
    }
    JsonObject& field(const std::string& key, const std::string& value) {
        return raw(key, json_escape(value));
    }
    JsonObject& field(const std::string& key, const char* value) {
        return raw(key, json_escape(value));
    }
    JsonObject& raw(const std::string& key, const std::string& rendered) {
        if (!body_.empty()) body_ += ",";
        body_ += json_escape(key) + ":" + rendered;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

  private:
    std::string body_;
};

std::string json_array(const std::vector<std::string>& elements) {
    std::string out = "[";
    for (size_t i = 0; i < elements.size(); ++i) {
        if (i > 0) out += ",";
        out += elements[i];
    }
    return out + "]";
}

struct Document {
    JsonObject config;
    std::vector<std::string> results;
    std::vector<std::string> checks;

    std::string str() const {
        return JsonObject{}
            .raw("config", config.str())
            .raw("results", json_array(results))
            .raw("checks", json_array(checks))
            .str();
    }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    return file;
}

// ---------------------------------------------------------------------------
// check bookkeeping for the verify subcommand

struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

class CheckList {
  public:
    /// Passes when value < threshold.
    void below(const std::string& name, double value, double threshold) {
        checks_.push_back({name, value, threshold, value < threshold});
    }
    /// Passes when value > threshold.
    void above(const std::string& name, double value, double threshold) {
        checks_.push_back({name, value, threshold, value > threshold});
    }
    bool all_pass() const {
        for (const Check& c : checks_) {
            if (!c.pass) return false;
        }
        return true;
    }
    const std::vector<Check>& items() const { return checks_; }

  private:
    std::vector<Check> checks_;
};

// ---------------------------------------------------------------------------
// shared options

struct CommonOptions {
    std::string format = "csv";
    std::string out;
    double tol = 1e-12;
};

void add_common(CLI::App* cmd, CommonOptions& common, bool with_tol) {
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", common.out, "output path (default stdout)");
    if (with_tol) cmd->add_option("--tol", common.tol, "solver tolerance");
}

void emit(const CommonOptions& common, const Document& doc, const std::string& csv) {
    std::ofstream file;
    std::ostream& os = open_output(common.out, file);
    if (common.format == "json") {
        os << doc.str() << "\n";
    } else {
        os << csv;
    }
    os.flush();
}

std::string fixed_point_csv_row(const nbt::fixedpoint::FixedPointResult& r) {
    std::ostringstream row;
    row << r.n << "," << fmt17(r.p_n.value) << "," << fmt17(r.residual) << ","
        << fmt17(r.bracket.first) << "," << fmt17(r.bracket.second) << "," << r.iterations << ","
        << fmt17(r.derivative_at_fp) << "\n";
    return row.str();
}

std::string fixed_point_json(const nbt::fixedpoint::FixedPointResult& r) {
    return JsonObject{}
        .field("n", r.n)
        .field("p_n", r.p_n.value)
        .field("residual", r.residual)
        .field("bracket_lo", r.bracket.first)
        .field("bracket_hi", r.bracket.second)
        .field("iterations", r.iterations)
        .field("derivative", r.derivative_at_fp)
        .str();
}

// ---------------------------------------------------------------------------
// subcommands

struct ComputeOptions {
    CommonOptions common;
    long long n = 0;
    std::string p0;
    int k_max = 0;
};

int run_compute(const ComputeOptions& opt) {
    const auto p0 = nbt::cli::parse_probability(opt.p0);
    const auto trace =
        nbt::dynamics::iterate(opt.n, nbt::Probability::from_value(p0.value), opt.k_max);

    Document doc;
    doc.config.field("subcommand", "compute")
        .field("n", opt.n)
        .field("p0", opt.p0)
        .field("k_max", opt.k_max)
        .field("format", opt.common.format);
    std::string csv = "k,p\n";
    for (const auto& entry : trace.entries) {
        csv += std::to_string(entry.k) + "," + fmt17(entry.p.value) + "\n";
        doc.results.push_back(
            JsonObject{}.field("k", entry.k).field("p", entry.p.value).str());
    }
    emit(opt.common, doc, csv);
    return kExitOk;
}

struct FixedPointOptions {
    CommonOptions common;
    std::string n_grid;
};

int run_fixed_point(const FixedPointOptions& opt) {
    if (opt.n_grid.empty()) throw std::invalid_argument("fixed-point: need --n or --n-grid");
    const auto ns = nbt::cli::parse_n_grid(opt.n_grid);
    const auto results = nbt::fixedpoint::solve_grid(ns, opt.common.tol);

    Document doc;
    doc.config.field("subcommand", "fixed-point")
        .field("n_grid", opt.n_grid)
        .field("tol", opt.common.tol)
        .field("format", opt.common.format);
    std::string csv = "n,p_n,residual,bracket_lo,bracket_hi,iterations,derivative\n";
    for (const auto& r : results) {
        csv += fixed_point_csv_row(r);
        doc.results.push_back(fixed_point_json(r));
    }
    emit(opt.common, doc, csv);
    return kExitOk;
}

struct SimulateOptions {
    CommonOptions common;
    long long n = 0;
    std::string p;
    std::uint64_t trials = 0;
    std::uint64_t seed = 42;
};

int run_simulate(const SimulateOptions& opt) {
    const auto p = nbt::cli::parse_probability(opt.p);
    const auto est = nbt::verify::simulate_stage1(opt.n, p.num, p.den, opt.trials, opt.seed);

    Document doc;
    doc.config.field("subcommand", "simulate")
        .field("n", opt.n)
        .field("p", opt.p)
        .field("trials", opt.trials)
        .field("seed", opt.seed)
        .field("format", opt.common.format);
    doc.results.push_back(JsonObject{}
                              .field("n", opt.n)
                              .field("p_num", p.num)
                              .field("p_den", p.den)
                              .field("trials", est.trials)
                              .field("seed", est.seed)
                              .field("frequency", est.frequency)
                              .field("std_error", est.std_error)
                              .str());
    std::string csv = "n,p,trials,seed,frequency,std_error\n";
    csv += std::to_string(opt.n) + "," + std::to_string(p.num) + "/" + std::to_string(p.den) +
           "," + std::to_string(est.trials) + "," + std::to_string(est.seed) + "," +
           fmt17(est.frequency) + "," + fmt17(est.std_error) + "\n";
    emit(opt.common, doc, csv);
    return kExitOk;
}

struct FigureOptions {
    CommonOptions common;
    long long n = 0;
    std::string p0;
    int steps = 0;
};

int run_figure(const FigureOptions& opt) {
    const auto p0 = nbt::cli::parse_probability(opt.p0);
    if (opt.steps < 0 || opt.steps > 100000) {
        throw std::invalid_argument("figure: steps must lie in [0, 1e5]");
    }

    Document doc;
    doc.config.field("subcommand", "figure")
        .field("n", opt.n)
        .field("p0", opt.p0)
        .field("steps", opt.steps)
        .field("format", opt.common.format);
    std::string csv = "segment,x,y\n";
    const auto push = [&](const char* segment, double x, double y) {
        csv += std::string(segment) + "," + fmt17(x) + "," + fmt17(y) + "\n";
        doc.results.push_back(
            JsonObject{}.field("segment", segment).field("x", x).field("y", y).str());
    };

    constexpr int kCurveSamples = 400;
    for (int i = 0; i <= kCurveSamples; ++i) {
        const double x = static_cast<double>(i) / kCurveSamples;
        push("curve", x,
             nbt::dynamics::pn_map(opt.n, nbt::Probability::from_value(x)).value);
    }
    push("diagonal", 0.0, 0.0);
    push("diagonal", 1.0, 1.0);

    if (opt.steps > 0) {
        double x = p0.value;
        push("cobweb", x, x);
        for (int step = 0; step < opt.steps; ++step) {
            const double y = nbt::dynamics::pn_map(opt.n, nbt::Probability::from_value(x)).value;
            push("cobweb", x, y);  // vertical move to the curve
            push("cobweb", y, y);  // horizontal move to the diagonal
            x = y;
        }
    }
    emit(opt.common, doc, csv);
    return kExitOk;
}

struct VerifyOptions {
    CommonOptions common;
    std::string target;
    int k_max = 5;
    long long n_max = 50;
    std::string n_grid = "1e4:1e7:geo20";
    std::string p0 = "0.3";
    int pairs = 200;
    std::uint64_t seed = 42;
};

void verify_theorem1(const VerifyOptions& opt, CheckList& checks, Document& doc) {
    if (opt.k_max < 1 || opt.k_max > 62) {
        throw std::invalid_argument("verify theorem1: --k-max must lie in [1, 62]");
    }
    const auto ns = nbt::cli::parse_n_grid(opt.n_grid);
    const auto p0 = nbt::Probability::from_value(nbt::cli::parse_probability(opt.p0).value);
    for (int k = 1; k <= opt.k_max; ++k) {
        const auto samples = nbt::verify::stage_samples(k, p0, ns);
        const auto est = nbt::verify::fit_rate(samples, k);
        const auto theory = nbt::dynamics::theory_rates(p0, k);
        const double beta =
            static_cast<double>(theory.beta_k.num) / static_cast<double>(theory.beta_k.den);
        checks.below("theorem1_k" + std::to_string(k) + "_slope_deviation",
                     std::abs(est.slope + beta), 0.01);
        if (k <= 2) {
            checks.below("theorem1_k" + std::to_string(k) + "_intercept_deviation",
                         std::abs(est.intercept - std::log(theory.alpha_k)), 0.05);
        }
        doc.results.push_back(JsonObject{}
                                  .field("k", k)
                                  .field("slope", est.slope)
                                  .field("intercept", est.intercept)
                                  .field("r_squared", est.r_squared)
                                  .field("beta_theory", beta)
                                  .field("log_alpha_theory", std::log(theory.alpha_k))
                                  .str());
    }
}

void verify_theorem2(const VerifyOptions& opt, CheckList& checks, Document& doc) {
    const std::vector<long long> fixed_set = {1, 2, 3, 10, 100, 1000, 10000, 100000};
    for (const long long n : fixed_set) {
        const auto r = nbt::fixedpoint::solve(n, opt.common.tol);
        checks.below("theorem2_residual_n" + std::to_string(n), r.residual, 1e-12);
        double basin_dev = 0.0;
        for (const double start : {0.01, 0.15, 0.5, 0.85, 0.99}) {
            const auto it = nbt::fixedpoint::iterate_to_fixed_point(
                n, nbt::Probability::from_value(start), opt.common.tol, 100000);
            basin_dev = std::max(basin_dev, std::abs(it.p_n.value - r.p_n.value));
        }
        checks.below("theorem2_basin_n" + std::to_string(n), basin_dev, 1e-9);
        doc.results.push_back(JsonObject{}
                                  .field("n", n)
                                  .field("p_n", r.p_n.value)
                                  .field("residual", r.residual)
                                  .field("derivative", r.derivative_at_fp)
                                  .field("basin_deviation", basin_dev)
                                  .str());
        if (n == 2) {
            checks.below("theorem2_p2_deviation", std::abs(r.p_n.value - 0.5), 1e-12);
        }
    }

    const auto ns = nbt::cli::parse_n_grid(opt.n_grid);
    const auto solved = nbt::fixedpoint::solve_grid(ns, opt.common.tol);
    std::vector<nbt::verify::RateSample> samples;
    samples.reserve(solved.size());
    for (const auto& r : solved) samples.push_back({r.n, r.p_n});
    const auto est = nbt::verify::fit_rate(samples, 0);
    checks.below("theorem2_pn_slope_deviation", std::abs(est.slope + 1.0 / 3.0), 0.01);
    doc.results.push_back(JsonObject{}
                              .field("k", 0)
                              .field("slope", est.slope)
                              .field("intercept", est.intercept)
                              .field("r_squared", est.r_squared)
                              .str());
}

void verify_lemmas(const VerifyOptions& opt, CheckList& checks, Document& doc) {
    const auto reports = nbt::verify::certify_lemmas_range(1, opt.n_max);
    for (const auto& report : reports) {
        // positive margin <=> every lemma hypothesis holds at this n
        double margin = std::min({report.convexity_grid_min, report.rn_grid_min,
                                  1.0 - report.abs_derivative_at_fp});
        if (report.n >= 3) margin = std::min(margin, 0.5 - report.pn_of_cn);
        checks.above("lemmas_margin_n" + std::to_string(report.n), margin, 0.0);
        doc.results.push_back(JsonObject{}
                                  .field("n", report.n)
                                  .field("convexity_grid_min", report.convexity_grid_min)
                                  .field("c_n", report.c_n)
                                  .field("pn_of_cn", report.pn_of_cn)
                                  .field("abs_derivative_at_fp", report.abs_derivative_at_fp)
                                  .field("rn_grid_min", report.rn_grid_min)
                                  .field("all_pass", report.all_pass)
                                  .str());
    }
}

void verify_oracles(const VerifyOptions& opt, CheckList& checks, Document& doc) {
    if (opt.n_max < 1) throw std::invalid_argument("verify oracles: --n-max must be positive");
    if (opt.pairs < 1) throw std::invalid_argument("verify oracles: --pairs must be positive");
    nbt::rng::Splitmix64 rng(opt.seed);
    double max_rel = 0.0;
    for (int i = 0; i < opt.pairs; ++i) {
        const long long n = 1 + static_cast<long long>(rng.next() % opt.n_max);
        const long long m = static_cast<long long>(rng.next() % (n + 1));
        const double p = static_cast<double>(m) / static_cast<double>(n);
        const double ours =
            nbt::dynamics::pn_map(n, nbt::Probability::from_value(p)).value;
        const double exact_value = nbt::exact::pmf(n, m, m, n).get_d();
        max_rel = std::max(max_rel, std::abs(ours / exact_value - 1.0));
    }
    checks.below("oracles_pmf_max_rel_deviation", max_rel, 1e-11);
    doc.results.push_back(JsonObject{}
                              .field("pairs", opt.pairs)
                              .field("n_max", opt.n_max)
                              .field("seed", opt.seed)
                              .field("max_rel_deviation", max_rel)
                              .str());
}

int run_verify(const VerifyOptions& opt) {
    Document doc;
    doc.config.field("subcommand", "verify")
        .field("target", opt.target)
        .field("format", opt.common.format);

    CheckList checks;
    if (opt.target == "theorem1") {
        verify_theorem1(opt, checks, doc);
    } else if (opt.target == "theorem2") {
        verify_theorem2(opt, checks, doc);
    } else if (opt.target == "lemmas") {
        verify_lemmas(opt, checks, doc);
    } else if (opt.target == "oracles") {
        verify_oracles(opt, checks, doc);
    } else {
        throw std::invalid_argument("verify: unknown target '" + opt.target + "'");
    }

    std::string csv = "check,value,threshold,pass\n";
    for (const Check& c : checks.items()) {
        csv += c.name + "," + fmt17(c.value) + "," + fmt17(c.threshold) + "," +
               (c.pass ? "true" : "false") + "\n";
        doc.checks.push_back(JsonObject{}
                                 .field("name", c.name)
                                 .field("value", c.value)
                                 .field("threshold", c.threshold)
                                 .field("pass", c.pass)
                                 .str());
    }
    emit(opt.common, doc, csv);
    return checks.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nested Bernoulli trials: iteration, fixed points, certification"};
    app.require_subcommand(1);

    ComputeOptions compute;
    CLI::App* compute_cmd = app.add_subcommand("compute", "iterate P_n and emit (k, p_k)");
    compute_cmd->add_option("--n", compute.n, "trial length")->required();
    compute_cmd->add_option("--p0", compute.p0, "start probability (decimal or a/b)")->required();
    compute_cmd->add_option("--k-max", compute.k_max, "number of iterations")->required();
    add_common(compute_cmd, compute.common, false);

    FixedPointOptions fixed_point;
    CLI::App* fp_cmd = app.add_subcommand("fixed-point", "solve p = P_n(p)");
    CLI::Option* fp_n = fp_cmd->add_option("--n", fixed_point.n_grid, "trial length");
    fp_cmd->add_option("--n-grid", fixed_point.n_grid,
                       "grid spec: single n, a..b, or min:max:geoK")
        ->excludes(fp_n);
    add_common(fp_cmd, fixed_point.common, true);

    VerifyOptions verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run a certification suite");
    verify_cmd
        ->add_option("target", verify.target, "one of theorem1, theorem2, lemmas, oracles")
        ->required();
    verify_cmd->add_option("--k-max", verify.k_max, "stages for theorem1");
    verify_cmd->add_option("--n-max", verify.n_max, "range cap for lemmas/oracles");
    verify_cmd->add_option("--n-grid", verify.n_grid, "grid for rate fits");
    verify_cmd->add_option("--p0", verify.p0, "start probability for theorem1");
    verify_cmd->add_option("--pairs", verify.pairs, "sample pairs for oracles");
    verify_cmd->add_option("--seed", verify.seed, "seed for oracles");
    add_common(verify_cmd, verify.common, true);

    SimulateOptions simulate;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo stage-1 frequency");
    sim_cmd->add_option("--n", simulate.n, "trial length")->required();
    sim_cmd->add_option("--p", simulate.p, "success probability (decimal or a/b)")->required();
    sim_cmd->add_option("--trials", simulate.trials, "number of runs")->required();
    sim_cmd->add_option("--seed", simulate.seed, "RNG seed");
    add_common(sim_cmd, simulate.common, false);

    FigureOptions figure;
    CLI::App* fig_cmd = app.add_subcommand("figure", "cobweb data for the iteration");
    fig_cmd->add_option("--n", figure.n, "trial length")->required();
    fig_cmd->add_option("--p0", figure.p0, "start probability")->required();
    fig_cmd->add_option("--steps", figure.steps, "cobweb steps");
    add_common(fig_cmd, figure.common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compute_cmd->parsed()) return run_compute(compute);
        if (fp_cmd->parsed()) return run_fixed_point(fixed_point);
        if (verify_cmd->parsed()) return run_verify(verify);
        if (sim_cmd->parsed()) return run_simulate(simulate);
        if (fig_cmd->parsed()) return run_figure(figure);
    } catch (const nbt::fixedpoint::BracketingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBracketing;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
