#include "randlat/error_eval.hpp"

#include <cmath>
#include <string>

#include "randlat/parallel.hpp"

namespace randlat {

namespace {

constexpr double clamp_floor = -1e-12;
constexpr std::int64_t max_table_modulus = std::int64_t{1} << 24;

double clamp_roundoff(double raw, bool* clamped = nullptr) {
    if (raw < 0.0 && raw >= clamp_floor) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return raw;
}

std::int64_t reduce(std::int64_t x, std::int64_t m) {
    const std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

// sum_k (prod_j (1 + gamma_j^2 sigma(k z_j / n)) - 1), before division by n
double point_sum(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params) {
    const int d = params.dimension();
    const int alpha = params.alpha();
    const Eigen::VectorXd g2 = params.gamma().array().square();
    const bool use_table = n <= max_table_modulus;
    const Eigen::VectorXd table = use_table ? sigma_table(n, alpha) : Eigen::VectorXd();

    IntVector step(d), x = IntVector::Zero(d);
    for (int j = 0; j < d; ++j) step[j] = reduce(z[j], n);
    CompensatedSum total;
    for (std::int64_t k = 0; k < n; ++k) {
        double excess = 0.0;
        for (int j = 0; j < d; ++j) {
            const double s = use_table ? table[x[j]] : sigma_at(x[j], n, alpha);
            excess += g2[j] * s * (1.0 + excess);
            x[j] += step[j];
            if (x[j] >= n) x[j] -= n;
        }
        total += excess;
    }
    return total.value();
}

void check_dimensions(const IntVector& z, const KorobovSpaceParams& params) {
    if (z.size() != params.dimension())
        throw ValidationError("generating vector has dimension " + std::to_string(z.size()) +
                              ", space has dimension " + std::to_string(params.dimension()));
}

// r_alpha^{-2}(h_j) per coordinate for h_j = -H..H
Eigen::MatrixXd coordinate_weights(const KorobovSpaceParams& params, std::int64_t H) {
    const int d = params.dimension();
    Eigen::MatrixXd w(d, 2 * H + 1);
    for (int j = 0; j < d; ++j) {
        const double g2 = params.gamma(j) * params.gamma(j);
        for (std::int64_t h = -H; h <= H; ++h)
            w(j, h + H) = h == 0 ? 1.0 : g2 / std::pow(double(std::abs(h)), 2 * params.alpha());
    }
    return w;
}

}  // namespace

double worst_case_error_sq(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params) {
    if (n < 1) throw DomainError("number of points must be at least 1");
    check_dimensions(z, params);
    return clamp_roundoff(point_sum(n, z, params) / double(n));
}

double worst_case_error_sq_truncated(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params,
                                     std::int64_t H) {
    if (n < 1) throw DomainError("number of points must be at least 1");
    if (H < 1) throw DomainError("truncation must be at least 1");
    check_dimensions(z, params);
    const int d = params.dimension();
    const Eigen::MatrixXd w = coordinate_weights(params, H);
    CompensatedSum total;
    auto recurse = [&](auto&& self, int j, std::int64_t dot, double weight, bool nonzero) -> void {
        if (j == d) {
            if (nonzero && dot == 0) total += weight;
            return;
        }
        const std::int64_t zj = reduce(z[j], n);
        for (std::int64_t h = -H; h <= H; ++h) {
            const std::int64_t next = reduce(dot + reduce(h, n) * zj % n, n);
            self(self, j + 1, next, weight * w(j, h + H), nonzero || h != 0);
        }
    };
    recurse(recurse, 0, 0, 1.0, false);
    return total.value();
}

double dual_lattice_tail_bound(const KorobovSpaceParams& params, std::int64_t H) {
    if (H < 1) throw DomainError("truncation must be at least 1");
    const int s = 2 * params.alpha();
    const double two_zeta = 2.0 * zeta(double(s));
    // full_j = 1 + gamma_j^2 2 zeta(2 alpha); tail_j >= gamma_j^2 sum_{|h|>H} |h|^{-2 alpha}
    // by convexity, h^{-s} <= integral of x^{-s} over [h - 1/2, h + 1/2]
    double kept_prefix = 1.0, diff = 0.0;
    for (int j = 0; j < params.dimension(); ++j) {
        const double g2 = params.gamma(j) * params.gamma(j);
        const double full = 1.0 + g2 * two_zeta;
        const double tail = 2.0 * g2 * std::pow(double(H) + 0.5, 1.0 - s) / (s - 1.0);
        diff = diff * full + kept_prefix * tail;
        kept_prefix *= full - tail;
    }
    return diff;
}

double ErrorReport::error() const { return std::sqrt(std::max(0.0, squared_error)); }

double ErrorReport::decomposition_total() const {
    CompensatedSum s;
    for (const auto& term : decomposition) s += term.contribution;
    return s.value();
}

ErrorReport randomized_error_sq_fixed(const ResidueVector& v, const KorobovSpaceParams& params) {
    if (v.dimension() != params.dimension())
        throw ValidationError("residue vector dimension does not match the space");
    const auto& pool = v.pool();
    const std::size_t L = pool.size();
    const double inv_l2 = 1.0 / (double(L) * double(L));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(L * (L + 1) / 2);
    for (std::size_t i = 0; i < L; ++i) pairs.emplace_back(i, i);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = i + 1; k < L; ++k) pairs.emplace_back(i, k);

    ErrorReport report;
    report.method = ErrorMethod::PointFormula;
    report.decomposition.resize(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t t) {
        const auto [i, k] = pairs[t];
        const std::int64_t p = pool.prime(i), q = pool.prime(k);
        ErrorTerm term;
        term.p = p;
        term.q = q;
        if (i == k) {
            term.squared_error = worst_case_error_sq(p, v.vector_for(i), params);
            term.contribution = term.squared_error * inv_l2;
        } else {
            IntVector z(v.dimension());
            for (int j = 0; j < v.dimension(); ++j) z[j] = crt_pair(v.residue(i, j), p, v.residue(k, j), q);
            term.squared_error = worst_case_error_sq(p * q, z, params);
            term.contribution = 2.0 * term.squared_error * inv_l2;
        }
        report.decomposition[t] = term;
    });
    report.squared_error = clamp_roundoff(report.decomposition_total(), &report.clamped);
    return report;
}

ErrorReport randomized_error_sq_truncated(const ResidueVector& v, const KorobovSpaceParams& params,
                                          std::int64_t H) {
    if (H < 1) throw DomainError("truncation must be at least 1");
    if (v.dimension() != params.dimension())
        throw ValidationError("residue vector dimension does not match the space");
    const int d = params.dimension();
    const auto& pool = v.pool();
    const std::size_t L = pool.size();
    const Eigen::MatrixXd w = coordinate_weights(params, H);

    // pair_sums(i, k), i <= k: sum of r^{-2}(h) over h vanishing modulo both p_i and p_k
    std::vector<CompensatedSum> pair_sums(L * L);
    std::vector<std::int64_t> dots((d + 1) * L, 0);
    std::vector<std::size_t> vanishing;
    vanishing.reserve(L);
    auto recurse = [&](auto&& self, int j, double weight, bool nonzero) -> void {
        const std::int64_t* cur = &dots[j * L];
        if (j == d) {
            if (!nonzero) return;
            vanishing.clear();
            for (std::size_t i = 0; i < L; ++i)
                if (cur[i] == 0) vanishing.push_back(i);
            for (std::size_t a = 0; a < vanishing.size(); ++a)
                for (std::size_t b = a; b < vanishing.size(); ++b) pair_sums[vanishing[a] * L + vanishing[b]] += weight;
            return;
        }
        std::int64_t* next = &dots[(j + 1) * L];
        for (std::int64_t h = -H; h <= H; ++h) {
            for (std::size_t i = 0; i < L; ++i) {
                const std::int64_t p = pool.prime(i);
                next[i] = reduce(cur[i] + reduce(h, p) * v.residue(i, j) % p, p);
            }
            self(self, j + 1, weight * w(j, h + H), nonzero || h != 0);
        }
    };
    recurse(recurse, 0, 1.0, false);

    const double inv_l2 = 1.0 / (double(L) * double(L));
    ErrorReport report;
    report.method = ErrorMethod::DualLatticeTruncated;
    for (std::size_t i = 0; i < L; ++i) {
        const double e = pair_sums[i * L + i].value();
        report.decomposition.push_back({pool.prime(i), pool.prime(i), e, e * inv_l2});
    }
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = i + 1; k < L; ++k) {
            const double e = pair_sums[i * L + k].value();
            report.decomposition.push_back({pool.prime(i), pool.prime(k), e, 2.0 * e * inv_l2});
        }
    report.squared_error = clamp_roundoff(report.decomposition_total(), &report.clamped);
    return report;
}

double omega_weight(const FrequencyVector& h, const ResidueVector& v) {
    if (h.dimension() != v.dimension()) throw ValidationError("frequency and residue vector dimensions differ");
    const auto& pool = v.pool();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const std::int64_t p = pool.prime(i);
        std::int64_t dot = 0;
        for (int j = 0; j < h.dimension(); ++j) dot = (dot + reduce(h.h()[j], p) * v.residue(i, j)) % p;
        if (dot == 0) ++hits;
    }
    return double(hits) / double(pool.size());
}

void require_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
}

BoundParams BoundParams::defaults(int alpha, double tau) {
    require_supported_alpha(alpha);
    BoundParams b;
    b.tau = tau;
    const double lo = 0.5, hi = alpha - 0.01;
    constexpr int points = 32;
    for (int i = 0; i < points; ++i) b.lambda_grid.push_back(lo + (hi - lo) * i / (points - 1));
    return b;
}

void BoundParams::validate(int alpha) const {
    require_tau(tau);
    if (lambda_grid.empty()) throw ValidationError("lambda grid is empty");
    for (double l : lambda_grid)
        if (!(l >= 0.5 && l < alpha)) throw ValidationError("lambda grid point outside [1/2, alpha)");
    if (!(c_prime > 0.0)) throw ValidationError("c' must be positive");
    if (refine_iterations < 0) throw ValidationError("refine_iterations must be nonnegative");
}

double good_set_threshold(std::int64_t p, const KorobovSpaceParams& params, const BoundParams& bounds) {
    if (!is_prime(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    bounds.validate(params.alpha());
    const double scale = 2.0 / ((1.0 - bounds.tau) * double(p));
    return minimize_over_lambda(
        [&](double lambda) { return std::pow(scale * mu_quantity(params, lambda), lambda); }, bounds);
}

double component_mu(const KorobovSpaceParams& params, int s, double lambda) {
    if (s < 1 || s > params.dimension()) throw DomainError("component index out of range");
    if (!(lambda >= 0.5) || !(lambda < params.alpha())) throw DomainError("lambda must lie in [1/2, alpha)");
    const double two_zeta = 2.0 * zeta(params.alpha() / lambda);
    double prefix = 1.0;
    for (int j = 0; j + 1 < s; ++j) prefix *= 1.0 + std::pow(params.gamma(j), 1.0 / lambda) * two_zeta;
    return std::pow(params.gamma(s - 1), 1.0 / lambda) * two_zeta * prefix;
}

double component_threshold(std::int64_t p, int s, const KorobovSpaceParams& params, const BoundParams& bounds) {
    if (!is_prime(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    bounds.validate(params.alpha());
    const double scale = 2.0 / ((1.0 - bounds.tau) * double(p));
    return minimize_over_lambda(
        [&](double lambda) { return std::pow(scale * component_mu(params, s, lambda), 2.0 * lambda); }, bounds);
}

double theorem_constant(double tau, double lambda, double c_prime) {
    require_tau(tau);
    if (!(lambda >= 0.5)) throw DomainError("lambda must be at least 1/2");
    if (!(c_prime > 0.0)) throw DomainError("c' must be positive");
    const double a = std::pow(2.0, 4.0 * lambda);
    const double u = 1.0 - tau;
    return a / (c_prime * std::pow(u, 2.0 * lambda)) + 2.0 * a / (tau * std::pow(u, 2.0 * lambda)) +
           a * (1.0 + tau) / (tau * std::pow(u, 2.0 * lambda - 1.0));
}

double theorem_bound_eran(std::int64_t n, const KorobovSpaceParams& params, double tau, double lambda,
                          double c_prime) {
    if (n < 2) throw DomainError("budget must be at least 2");
    const double mu = mu_quantity(params, lambda);
    const double c = theorem_constant(tau, lambda, c_prime);
    return std::sqrt(c * std::log(double(n))) / std::pow(double(n), lambda + 0.5) * std::pow(mu, lambda);
}

double theorem_bound_eran_min(std::int64_t n, const KorobovSpaceParams& params, const BoundParams& bounds) {
    bounds.validate(params.alpha());
    return minimize_over_lambda(
        [&](double lambda) { return theorem_bound_eran(n, params, bounds.tau, lambda, bounds.c_prime); }, bounds);
}

double dual_lower_bound(std::int64_t n, const KorobovSpaceParams& params, const BoundParams& bounds) {
    bounds.validate(params.alpha());
    const double scale = 4.0 / ((1.0 - bounds.tau) * double(n));
    return 1.0 / minimize_over_lambda(
                     [&](double lambda) { return std::pow(scale * mu_quantity(params, lambda), lambda); }, bounds);
}

double component_dual_lower_bound(std::int64_t n, int s, const KorobovSpaceParams& params,
                                  const BoundParams& bounds) {
    bounds.validate(params.alpha());
    const double scale = 4.0 / ((1.0 - bounds.tau) * double(n));
    return 1.0 / minimize_over_lambda(
                     [&](double lambda) { return std::pow(scale * component_mu(params, s, lambda), lambda); },
                     bounds);
}

std::int64_t good_count(double tau, std::int64_t m) {
    require_tau(tau);
    const double x = tau * double(m);
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return std::max<std::int64_t>(1, std::int64_t(r));
    return std::max<std::int64_t>(1, std::int64_t(std::ceil(x)));
}

}  // namespace randlat
