#include "verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "randlat/cbc.hpp"
#include "randlat/convolution.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/oracles.hpp"
#include "randlat/primes.hpp"
#include "randlat/rpfv.hpp"

namespace randlat::cli {

namespace {

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

using Suite = std::function<std::vector<Check>()>;

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

std::vector<Check> lemma_averaging() {
    std::vector<Check> out;
    for (std::int64_t p : {3, 5, 7})
        for (int d = 1; d <= 3; ++d)
            out.push_back({"averaging identity p=" + std::to_string(p) + " d=" + std::to_string(d),
                           oracle::averaging_identity_holds(p, d), "exact counts"});
    return out;
}

std::vector<Check> fft_oracle() {
    std::vector<Check> out;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    const std::vector<std::int64_t> primes{3, 5, 7, 11, 13, 17, 31, 61, 97, 101, 127, 251, 257, 401, 499, 509, 521,
                                           997, 1009, 2003};
    for (auto p : primes) {
        Eigen::VectorXd v(p), w(p);
        for (std::int64_t k = 0; k < p; ++k) {
            v[k] = normal(rng);
            w[k] = normal(rng);
        }
        const auto fast = rader_cbc_kernel(p, primitive_root(p), v, w);
        const auto naive = oracle::naive_kernel(p, v, w);
        const double gap = (fast - naive).cwiseAbs().maxCoeff() / naive.cwiseAbs().maxCoeff();
        out.push_back({"rader kernel p=" + std::to_string(p), gap <= 1e-9, "max relative gap " + fmt(gap)});
    }
    return out;
}

std::vector<Check> eran_oracle() {
    const auto params = KorobovSpaceParams::polynomial_weights(2, 2, 2.0);
    const auto v = construct_fixed_vector(20, params);
    const double fast = randomized_error_sq_fixed(v, params).squared_error;
    const double brute = oracle::dual_lattice_eran_sq(v, params, 250);
    const double gap = std::abs(fast - brute) / brute;
    return {{"prime-pair decomposition n=20 d=2 vs truncated sum H=250", gap <= 1e-4, "relative gap " + fmt(gap)}};
}

std::vector<Check> wce_oracle() {
    std::vector<Check> out;
    std::mt19937_64 rng(7);
    const std::int64_t H = 100;
    std::vector<std::int64_t> primes;
    for (std::int64_t p = 11; p <= 97; ++p)
        if (is_prime(p)) primes.push_back(p);
    for (int t = 0; t < 30; ++t) {
        const auto p = primes[rng() % primes.size()];
        const int d = 1 + int(rng() % 3);
        const auto params = KorobovSpaceParams::polynomial_weights(d, 2, 2.0);
        IntVector z(d);
        for (int j = 0; j < d; ++j) z[j] = std::int64_t(rng() % std::uint64_t(p));
        const double fast = worst_case_error_sq(p, z, params);
        const double brute = oracle::dual_lattice_wce_sq(p, z, params, H);
        const double tail = dual_lattice_tail_bound(params, H);
        const bool ok = std::abs(fast - brute) <= 1e-5 * std::abs(fast) + tail;
        out.push_back({"point formula p=" + std::to_string(p) + " d=" + std::to_string(d), ok,
                       "gap " + fmt(std::abs(fast - brute)) + " tail " + fmt(tail)});
    }
    return out;
}

std::vector<Check> cbc_oracle() {
    std::vector<Check> out;
    for (std::int64_t p : {31, 61, 101})
        for (int d = 1; d <= 6; ++d) {
            const auto params = KorobovSpaceParams::polynomial_weights(d, 2, 2.0);
            out.push_back({"fast CBC p=" + std::to_string(p) + " d=" + std::to_string(d),
                           cbc_construct(p, params) == oracle::naive_cbc(p, params), "identical vectors"});
        }
    return out;
}

std::vector<Check> construction_oracle() {
    std::vector<Check> out;
    for (int d : {2, 3}) {
        const auto params = KorobovSpaceParams::polynomial_weights(d, 2, 1.0);
        FixedVectorBuilder builder(12, params);
        double worst = 0.0;
        while (!builder.complete()) {
            const auto i = builder.next_prime_index();
            const auto naive = oracle::naive_t_hat(builder.residues(), params, builder.dimension(), i);
            worst = std::max(worst, (builder.t_hat(i) - naive).cwiseAbs().maxCoeff() / naive.cwiseAbs().maxCoeff());
            builder.step();
        }
        out.push_back({"T-hat vs triple loop n=12 d=" + std::to_string(d), worst <= 1e-9, "max relative gap " + fmt(worst)});
        out.push_back({"construction vs naive n=12 d=" + std::to_string(d),
                       builder.residues().residues() == oracle::naive_fixed_vector(12, params, 0.5).residues(),
                       "identical residues"});
    }
    return out;
}

std::vector<Check> good_sets() {
    std::vector<Check> out;
    for (std::int64_t p : {2, 3, 5, 7, 11})
        for (double tau : {0.25, 0.5, 0.75}) {
            const auto params = KorobovSpaceParams::polynomial_weights(2, 2, 2.0);
            const auto count = oracle::good_vector_count(p, params, BoundParams::defaults(2, tau));
            const auto need = good_count(tau, p * p);
            out.push_back({"good vectors p=" + std::to_string(p) + " tau=" + fmt(tau), count >= need,
                           std::to_string(count) + " >= " + std::to_string(need)});
        }
    std::mt19937_64 rng(11);
    for (std::int64_t p = 2; p <= 31; ++p) {
        if (!is_prime(p)) continue;
        const auto params = KorobovSpaceParams::polynomial_weights(3, 1, 1.0);
        std::int64_t worst = p;
        for (int s = 1; s <= 3; ++s) {
            IntVector prefix(s - 1);
            for (int j = 0; j + 1 < s; ++j) prefix[j] = std::int64_t(rng() % std::uint64_t(p));
            worst = std::min(worst, oracle::good_component_count(p, prefix, params, BoundParams::defaults(1, 0.5)));
        }
        const auto need = good_count(0.5, p);
        out.push_back({"good components p=" + std::to_string(p), worst >= need,
                       std::to_string(worst) + " >= " + std::to_string(need)});
    }
    return out;
}

const std::vector<std::pair<std::string, Suite>>& suites() {
    static const std::vector<std::pair<std::string, Suite>> all{
        {"lemma-averaging", lemma_averaging}, {"fft-oracle", fft_oracle},
        {"eran-oracle", eran_oracle},         {"wce-oracle", wce_oracle},
        {"cbc-oracle", cbc_oracle},           {"construction-oracle", construction_oracle},
        {"good-sets", good_sets},
    };
    return all;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    std::vector<std::string> names{"all"};
    for (const auto& [name, fn] : suites()) names.push_back(name);
    return names;
}

int run_verify(const std::string& suite, std::ostream& out) {
    int failures = 0, total = 0;
    for (const auto& [name, fn] : suites()) {
        if (suite != "all" && suite != name) continue;
        for (const auto& c : fn()) {
            ++total;
            failures += !c.ok;
            out << (c.ok ? "PASS " : "FAIL ") << name << ": " << c.name << " (" << c.detail << ")\n";
        }
    }
    out << total - failures << "/" << total << " checks passed\n";
    return failures;
}

}  // namespace randlat::cli
