#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "randlat/cbc.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/io.hpp"
#include "randlat/qmc.hpp"
#include "randlat/rpfv.hpp"
#include "randlat/study.hpp"
#include "verify.hpp"

using namespace randlat;
using nlohmann::json;

namespace {

constexpr const char* tool_version = "1.0.0";
constexpr const char* tau_note = "tau = 0.5 is a default choice, not a tuned value; set --tau to change it";

enum Exit { ok = 0, verification_failed = 1, usage = 2, capacity = 3 };

struct SpaceArgs {
    int d = 2;
    int alpha = 2;
    std::string gamma_spec = "poly:2";

    void add(CLI::App* app) {
        app->add_option("--d", d, "dimension")->check(CLI::PositiveNumber);
        app->add_option("--alpha", alpha, "smoothness (1, 2 or 3)")->check(CLI::Range(1, 3));
        app->add_option("--gamma-spec", gamma_spec, "poly:c for gamma_j = j^-c, or a comma-separated list");
    }
    KorobovSpaceParams params() const { return KorobovSpaceParams(alpha, parse_gamma_spec(gamma_spec, d)); }
};

struct BuildArgs {
    double tau = 0.5;
    bool tau_given = false;
    std::string mode = "auto";
    double budget_gib = 8.0;

    void add(CLI::App* app) {
        app->add_option("--tau", tau, "good-set fraction in (0, 1)");
        app->add_option("--mode", mode, "pair table storage")->check(CLI::IsMember({"auto", "cached", "streaming"}));
        app->add_option("--memory-budget-gib", budget_gib, "cached mode limit")->check(CLI::PositiveNumber);
    }
    ConstructionOptions options() const {
        ConstructionOptions o;
        o.tau = tau;
        o.mode = memory_mode_from_string(mode);
        o.memory_budget_bytes = std::uint64_t(budget_gib * double(std::uint64_t{1} << 30));
        return o;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_construct(std::int64_t n, const SpaceArgs& space, const BuildArgs& build, const std::string& out_path) {
    const auto params = space.params();
    const auto options = build.options();
    const auto start = std::chrono::steady_clock::now();
    FixedVectorBuilder builder(n, params, options);
    const auto mode = builder.mode();
    const auto v = builder.run();
    const double seconds = seconds_since(start);
    const auto report = randomized_error_sq_fixed(v, params);
    const double bound = theorem_bound_eran_min(n, params, BoundParams::defaults(params.alpha(), options.tau));

    json meta{{"construct_seconds", seconds},
              {"mode", to_string(mode)},
              {"code_version", tool_version},
              {"e_ran", report.error()},
              {"e_ran_bound", bound}};
    if (!build.tau_given) meta["tau_note"] = tau_note;
    const auto file = VectorFile::from(v, params, options.tau, meta);
    if (!out_path.empty()) write_vector_file(out_path, file);

    std::cout << "primes: " << json(v.pool().primes()).dump() << "\n"
              << "mode: " << to_string(mode) << "\n"
              << "e_ran: " << format_number(report.error()) << "\n"
              << "theorem bound: " << format_number(bound) << "\n"
              << "seconds: " << format_number(seconds) << "\n";
    if (!build.tau_given) std::cout << "note: " << tau_note << "\n";
    if (out_path.empty()) std::cout << to_json(file).dump(2) << "\n";
    return ok;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw ValidationError("k range must look like 15..26");
    try {
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ValidationError("k range must look like 15..26");
    }
}

int cmd_study(const SpaceArgs& space, const BuildArgs& build, const std::string& k_range, bool allow_large,
              std::int64_t max_n, const std::string& out_path) {
    StudyOptions o;
    o.params = space.params();
    std::tie(o.k_first, o.k_last) = parse_range(k_range);
    o.construction = build.options();
    o.allow_large = allow_large;
    o.max_n = max_n;
    const auto result = run_study(o, [](const StudyRow& r) {
        std::cerr << "k=" << r.k << " n=" << r.n;
        if (r.e_ran_rpfv) std::cerr << " e_det=" << format_number(r.e_det_cbc) << " e_ran=" << format_number(r.e_ran_rpfv);
        if (!r.note.empty()) std::cerr << " " << r.note;
        std::cerr << "\n";
    });
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ValidationError("cannot open " + out_path);
    }
    std::ostream& table = out_path.empty() ? std::cout : file;
    write_csv(table, result.csv_header(), result.csv_rows());
    std::ostream& summary = out_path.empty() ? std::cerr : std::cout;
    summary << "slope e_det(cbc): " << (result.slope_det ? format_number(result.slope_det) : "absent") << "\n"
            << "slope e_ran(rpfv): " << (result.slope_ran ? format_number(result.slope_ran) : "absent") << "\n";
    if (!build.tau_given) summary << "note: " << tau_note << "\n";
    if (result.capped) summary << "warning: study stopped at the n cap\n";
    return ok;
}

int cmd_verify(const std::string& suite) {
    return randlat::cli::run_verify(suite, std::cout) == 0 ? ok : verification_failed;
}

Integrand make_integrand(const std::string& name, int d, const VectorFile& file, std::int64_t extremal_h) {
    if (name == "constant") return constant_integrand(d);
    if (name == "product-cosine") return product_cosine(d);
    if (name == "product-bernoulli") {
        if (d != file.d) throw ValidationError("product-bernoulli integrand takes the file's dimension");
        return product_bernoulli(file.params());
    }
    if (name == "extremal") {
        if (d != file.d) throw ValidationError("extremal integrand takes the file's dimension");
        return truncated_extremal(file.residue_vector(), file.params(), extremal_h).integrand;
    }
    throw ValidationError("unknown integrand '" + name + "'");
}

int cmd_integrate(const std::string& vector_path, const std::string& integrand, std::optional<int> dimension,
                  const std::string& algorithm, std::uint64_t seed, std::int64_t reps, std::optional<double> tau,
                  std::int64_t extremal_h, const std::string& out_path) {
    const auto file = read_vector_file(vector_path);
    const auto f = make_integrand(integrand, dimension.value_or(file.d), file, extremal_h);
    RunConfig cfg;
    cfg.seed = seed;
    cfg.repetitions = reps;
    cfg.algorithm = algorithm_from_string(algorithm);
    cfg.tau = tau.value_or(file.tau);
    std::vector<double> est;
    switch (cfg.algorithm) {
    case Algorithm::Rpfv:
        est = run_rpfv(f, file.residue_vector(), cfg);
        break;
    case Algorithm::RpCbc:
        est = run_rp_cbc(f, file.n, file.params(), cfg);
        break;
    case Algorithm::RpRv:
        est = run_rp_rv(f, file.n, file.params(), cfg);
        break;
    }
    std::ofstream file_out;
    if (!out_path.empty()) {
        file_out.open(out_path);
        if (!file_out) throw ValidationError("cannot open " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file_out;
    for (std::size_t r = 0; r < est.size(); ++r)
        out << json{{"rep", r}, {"estimate", est[r]}}.dump() << "\n";
    const auto s = summarize(est);
    json summary{{"summary", {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"sem", s.sem},
                              {"algorithm", to_string(cfg.algorithm)}, {"integrand", f.description}, {"seed", seed}}}};
    if (f.known_integral) summary["summary"]["exact"] = *f.known_integral;
    out << summary.dump() << "\n";
    return ok;
}

int cmd_evaluate(const std::string& vector_path, std::optional<std::int64_t> truncation) {
    const auto file = read_vector_file(vector_path);
    const auto v = file.residue_vector();
    const auto params = file.params();
    const auto report = truncation ? randomized_error_sq_truncated(v, params, *truncation) : randomized_error_sq_fixed(v, params);
    json per_prime = json::array();
    for (std::size_t i = 0; i < v.pool().size(); ++i)
        per_prime.push_back({{"p", v.pool().prime(i)},
                             {"e_det", std::sqrt(worst_case_error_sq(v.pool().prime(i), v.vector_for(i), params))}});
    json out{{"n", file.n},
             {"d", file.d},
             {"e_ran", report.error()},
             {"method", report.method == ErrorMethod::PointFormula ? "point-formula" : "dual-lattice-truncated"},
             {"clamped", report.clamped},
             {"e_ran_bound", theorem_bound_eran_min(file.n, params, BoundParams::defaults(params.alpha(), file.tau))},
             {"primes", per_prime}};
    std::cout << out.dump(2) << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomised rank-1 lattice rules: construction, error evaluation and integration"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    std::int64_t n = 0;
    SpaceArgs space;
    BuildArgs build;
    std::string out_path;
    auto* construct = app.add_subcommand("construct", "build the fixed residue vector for budget n");
    construct->add_option("--n", n, "point budget")->required()->check(CLI::Range(std::int64_t{4}, std::int64_t{1} << 31));
    space.add(construct);
    build.add(construct);
    construct->add_option("--out", out_path, "vector file (JSON); printed when omitted");

    std::string k_range = "15..26";
    bool allow_large = false;
    std::int64_t max_n = 600;
    SpaceArgs study_space;
    study_space.d = 5;
    study_space.alpha = 1;
    study_space.gamma_spec = "poly:3";
    BuildArgs study_build;
    std::string study_out;
    auto* study = app.add_subcommand("study", "convergence table: CBC e_det against fixed-vector e_ran");
    study_space.add(study);
    study_build.add(study);
    study->add_option("--k-range", k_range, "n = closest prime to 1.2^k for k in a..b");
    study->add_flag("--allow-large", allow_large, "continue past the n cap");
    study->add_option("--max-n", max_n, "n cap")->check(CLI::PositiveNumber);
    study->add_option("--out", study_out, "CSV file; stdout when omitted");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run oracle and lemma checks");
    verify->add_option("--suite", suite)->check(CLI::IsMember(randlat::cli::verify_suite_names()));

    std::string vector_path, integrand = "product-cosine", algorithm = "rpfv", integrate_out;
    std::optional<int> integrand_dim;
    std::optional<double> integrate_tau;
    std::uint64_t seed = 0;
    std::int64_t reps = 1000, extremal_h = 20;
    auto* integrate = app.add_subcommand("integrate", "randomised integration with a stored vector");
    integrate->add_option("--vector-file", vector_path)->required();
    integrate->add_option("--integrand", integrand)
        ->check(CLI::IsMember({"constant", "product-cosine", "product-bernoulli", "extremal"}));
    integrate->add_option("--integrand-dim", integrand_dim, "defaults to the file's d");
    integrate->add_option("--algorithm", algorithm)->check(CLI::IsMember({"rpfv", "rp-cbc", "rp-rv"}));
    integrate->add_option("--seed", seed);
    integrate->add_option("--reps", reps)->check(CLI::PositiveNumber);
    integrate->add_option("--tau", integrate_tau, "defaults to the file's tau");
    integrate->add_option("--extremal-h", extremal_h, "frequency truncation of the extremal integrand")
        ->check(CLI::PositiveNumber);
    integrate->add_option("--out", integrate_out, "JSON lines file; stdout when omitted");

    std::string evaluate_path;
    std::optional<std::int64_t> truncation;
    auto* evaluate = app.add_subcommand("evaluate", "randomised and per-prime errors of a stored vector");
    evaluate->add_option("--vector-file", evaluate_path)->required();
    evaluate->add_option("--truncate", truncation, "use the truncated dual-lattice sum |h_j| <= H")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*construct) {
            build.tau_given = construct->count("--tau") > 0;
            return cmd_construct(n, space, build, out_path);
        }
        if (*study) {
            study_build.tau_given = study->count("--tau") > 0;
            return cmd_study(study_space, study_build, k_range, allow_large, max_n, study_out);
        }
        if (*verify) return cmd_verify(suite);
        if (*integrate)
            return cmd_integrate(vector_path, integrand, integrand_dim, algorithm, seed, reps, integrate_tau, extremal_h,
                                 integrate_out);
        if (*evaluate) return cmd_evaluate(evaluate_path, truncation);
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return capacity;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return verification_failed;
    }
    return usage;
}
