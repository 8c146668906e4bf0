#include "randlat/oracles.hpp"

#include <cmath>

#include "randlat/cbc.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/rpfv.hpp"

namespace randlat::oracle {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

// Odometer over h in [-H, H]^d, calling fn(h) for every h except 0.
template <typename Fn>
void for_each_frequency(int d, std::int64_t H, Fn&& fn) {
    IntVector h = IntVector::Constant(d, -H);
    while (true) {
        if (!(h.array() == 0).all()) fn(h);
        int j = d - 1;
        while (j >= 0 && h[j] == H) h[j--] = -H;
        if (j < 0) return;
        ++h[j];
    }
}

double inverse_r_sq(const KorobovSpaceParams& params, const IntVector& h) {
    double w = 1.0;
    for (Eigen::Index j = 0; j < h.size(); ++j)
        if (h[j] != 0) w *= params.gamma(int(j)) * params.gamma(int(j)) / std::pow(double(std::abs(h[j])), 2 * params.alpha());
    return w;
}

}  // namespace

Eigen::VectorXd naive_kernel(std::int64_t p, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
    for (std::int64_t z = 0; z < p; ++z)
        for (std::int64_t k = 0; k < p; ++k) out[z] += v[k * z % p] * w[k];
    return out;
}

double dual_lattice_wce_sq(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params, std::int64_t H) {
    CompensatedSum total;
    for_each_frequency(params.dimension(), H, [&](const IntVector& h) {
        std::int64_t dot = 0;
        for (Eigen::Index j = 0; j < h.size(); ++j) dot = mod(dot + mod(h[j], n) * mod(z[j], n), n);
        if (dot == 0) total += inverse_r_sq(params, h);
    });
    return total.value();
}

double dual_lattice_eran_sq(const ResidueVector& v, const KorobovSpaceParams& params, std::int64_t H) {
    const auto& primes = v.pool().primes();
    const std::size_t L = primes.size();
    CompensatedSum total;
    for_each_frequency(params.dimension(), H, [&](const IntVector& h) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < L; ++i) {
            std::int64_t dot = 0;
            for (Eigen::Index j = 0; j < h.size(); ++j)
                dot = mod(dot + mod(h[j], primes[i]) * v.residue(i, int(j)), primes[i]);
            if (dot == 0) ++hits;
        }
        // omega^2 = (hits / L)^2 counts every ordered pair (p, q) that both annihilate h
        if (hits > 0) total += double(hits * hits) * inverse_r_sq(params, h);
    });
    return total.value() / (double(L) * double(L));
}

bool averaging_identity_holds(std::int64_t p, int d) {
    std::int64_t pd = 1;
    for (int j = 0; j < d; ++j) pd *= p;
    bool ok = true;
    IntVector h = IntVector::Constant(d, -p);
    while (ok) {
        std::int64_t count = 0;
        for (std::int64_t code = 0; code < pd; ++code) {
            std::int64_t c = code, dot = 0;
            for (int j = 0; j < d; ++j) {
                dot += h[j] * (c % p);
                c /= p;
            }
            if (mod(dot, p) == 0) ++count;
        }
        bool h_zero_mod_p = true;
        for (int j = 0; j < d; ++j) h_zero_mod_p = h_zero_mod_p && mod(h[j], p) == 0;
        // p * count == p^d * ((p - 1) [h = 0 mod p] + 1)
        ok = p * count == pd * ((h_zero_mod_p ? p - 1 : 0) + 1);
        int j = d - 1;
        while (j >= 0 && h[j] == p) h[j--] = -p;
        if (j < 0) break;
        ++h[j];
    }
    return ok;
}

std::vector<double> all_wce_sq(std::int64_t p, int d, const KorobovSpaceParams& params) {
    std::int64_t pd = 1;
    for (int j = 0; j < d; ++j) pd *= p;
    std::vector<double> out(pd);
    IntVector z(d);
    for (std::int64_t code = 0; code < pd; ++code) {
        std::int64_t c = code;
        for (int j = d - 1; j >= 0; --j) {
            z[j] = c % p;
            c /= p;
        }
        double sum = 0.0;
        for (std::int64_t k = 0; k < p; ++k) {
            double prod = 1.0;
            for (int j = 0; j < d; ++j)
                prod *= 1.0 + params.gamma(j) * params.gamma(j) * sigma_alpha(double(k * z[j] % p) / double(p), params.alpha());
            sum += prod;
        }
        out[code] = sum / double(p) - 1.0;
    }
    return out;
}

namespace {

double sigma_frac(std::int64_t m, std::int64_t modulus, int alpha) {
    return sigma_alpha(double(m) / double(modulus), alpha);
}

// P^{(p,q)}_{s-1}(k, l) for k in Z_p, l in Z_q
Eigen::MatrixXd pair_products(const ResidueVector& v, const KorobovSpaceParams& params, int s, std::size_t i,
                              std::size_t t) {
    const std::int64_t p = v.pool().prime(i), q = v.pool().prime(t);
    Eigen::MatrixXd P = Eigen::MatrixXd::Ones(p, q);
    for (std::int64_t k = 0; k < p; ++k)
        for (std::int64_t l = 0; l < q; ++l)
            for (int j = 0; j + 1 < s; ++j)
                P(k, l) *= 1.0 + params.gamma(j) * params.gamma(j) *
                                     sigma_frac((k * v.residue(i, j) * q + l * v.residue(t, j) * p) % (p * q), p * q,
                                                params.alpha());
    return P;
}

}  // namespace

Eigen::VectorXd naive_theta(std::int64_t p, const IntVector& prefix, const KorobovSpaceParams& params) {
    const int s = int(prefix.size()) + 1;
    const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
    Eigen::VectorXd P = Eigen::VectorXd::Ones(p);
    for (std::int64_t k = 0; k < p; ++k)
        for (int j = 0; j + 1 < s; ++j)
            P[k] *= 1.0 + params.gamma(j) * params.gamma(j) * sigma_frac(k * prefix[j] % p, p, params.alpha());
    Eigen::VectorXd theta(p);
    for (std::int64_t z = 0; z < p; ++z) {
        double sum = 0.0;
        for (std::int64_t k = 0; k < p; ++k) sum += sigma_frac(k * z % p, p, params.alpha()) * P[k];
        theta[z] = g2 / double(p) * sum;
    }
    return theta;
}

IntVector naive_cbc(std::int64_t p, const KorobovSpaceParams& params) {
    const int d = params.dimension();
    IntVector z = IntVector::Ones(d);
    const double sigma0 = sigma_alpha(0.0, params.alpha());
    for (int s = 2; s <= d; ++s) {
        const auto head = params.truncated(s);
        const double base = worst_case_error_sq(p, z.head(s - 1), params.truncated(s - 1));
        Eigen::VectorXd diff(p);
        IntVector trial = z.head(s);
        for (std::int64_t c = 0; c < p; ++c) {
            trial[s - 1] = c;
            diff[c] = worst_case_error_sq(p, trial, head) - base;
        }
        double max_product = 0.0;
        for (std::int64_t k = 0; k < p; ++k) {
            double prod = 1.0;
            for (int j = 0; j + 1 < s; ++j)
                prod *= 1.0 + params.gamma(j) * params.gamma(j) * sigma_frac(k * z[j] % p, p, params.alpha());
            max_product = std::max(max_product, std::abs(prod));
        }
        const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
        z[s - 1] = argmin_with_ties(diff, criterion_resolution(p, g2 * sigma0 * max_product));
    }
    return z;
}

Eigen::VectorXd naive_t_hat(const ResidueVector& v, const KorobovSpaceParams& params, int s, std::size_t i) {
    const auto& pool = v.pool();
    const std::int64_t p = pool.prime(i);
    const int alpha = params.alpha();
    const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
    IntVector prefix(s - 1);
    for (int j = 0; j + 1 < s; ++j) prefix[j] = v.residue(i, j);
    Eigen::VectorXd out = naive_theta(p, prefix, params);
    for (std::size_t t = 0; t < pool.size(); ++t) {
        if (t == i) continue;
        const std::int64_t q = pool.prime(t);
        const Eigen::MatrixXd P = pair_products(v, params, s, i, t);
        for (std::int64_t z = 0; z < p; ++z) {
            double sum = 0.0;
            if (t < i) {
                const std::int64_t c = v.residue(t, s - 1);
                for (std::int64_t l = 0; l < q; ++l)
                    for (std::int64_t k = 0; k < p; ++k)
                        sum += sigma_frac((k * z * q + l * c * p) % (p * q), p * q, alpha) * P(k, l) / double(q) * g2 /
                               double(p);
                out[z] += 2.0 * sum;
            } else {
                for (std::int64_t k = 0; k < p; ++k)
                    sum += sigma_frac(k * q * z % p, p, alpha) * P.row(k).sum();
                out[z] += 2.0 * g2 / (std::pow(double(q), 2 * alpha + 1) * double(p)) * sum;
            }
        }
    }
    return out;
}

double naive_dropped_term(const ResidueVector& v, const KorobovSpaceParams& params, int s, std::size_t i) {
    const auto& pool = v.pool();
    const std::int64_t p = pool.prime(i);
    const int alpha = params.alpha();
    const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
    double total = 0.0;
    for (std::size_t t = 0; t < i; ++t) {
        const std::int64_t q = pool.prime(t), c = v.residue(t, s - 1);
        const Eigen::MatrixXd P = pair_products(v, params, s, i, t);
        double sum = 0.0;
        for (std::int64_t l = 0; l < q; ++l) sum += sigma_frac(l * p * c % q, q, alpha) * P.col(l).sum();
        total += 2.0 * g2 / (std::pow(double(p), 2 * alpha) * double(p) * double(q)) * sum;
    }
    return total;
}

ResidueVector naive_fixed_vector(std::int64_t n, const KorobovSpaceParams& params, double tau) {
    ResidueVector v(build_prime_pool(n), params.dimension());
    const auto& pool = v.pool();
    const double sigma0 = sigma_alpha(0.0, params.alpha());
    for (int s = 2; s <= params.dimension(); ++s) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const std::int64_t p = pool.prime(i);
            IntVector prefix(s - 1);
            for (int j = 0; j + 1 < s; ++j) prefix[j] = v.residue(i, j);
            Eigen::VectorXd theta = naive_theta(p, prefix, params);
            // symmetrise as theta_all does
            for (std::int64_t z = 1; 2 * z < p; ++z) theta[z] = theta[p - z] = 0.5 * (theta[z] + theta[p - z]);
            double max_product = 0.0;
            for (std::int64_t k = 0; k < p; ++k) {
                double prod = 1.0;
                for (int j = 0; j + 1 < s; ++j)
                    prod *= 1.0 + params.gamma(j) * params.gamma(j) * sigma_frac(k * prefix[j] % p, p, params.alpha());
                max_product = std::max(max_product, std::abs(prod));
            }
            const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
            const auto t_hat = naive_t_hat(v, params, s, i);
            v.set_residue(i, s - 1,
                          select_candidate(theta, t_hat, tau, criterion_resolution(p, g2 * sigma0 * max_product),
                                           t_hat_resolution(pool, params, s, i)));
        }
    }
    return v;
}

std::int64_t good_vector_count(std::int64_t p, const KorobovSpaceParams& params, const BoundParams& bounds) {
    const double threshold = good_set_threshold(p, params, bounds);
    std::int64_t count = 0;
    for (double e2 : all_wce_sq(p, params.dimension(), params))
        if (std::sqrt(std::max(e2, 0.0)) <= threshold) ++count;
    return count;
}

std::int64_t good_component_count(std::int64_t p, const IntVector& prefix, const KorobovSpaceParams& params,
                                  const BoundParams& bounds) {
    const int s = int(prefix.size()) + 1;
    const auto head = params.truncated(s);
    const double base = s == 1 ? 0.0 : worst_case_error_sq(p, prefix, params.truncated(s - 1));
    const double threshold = component_threshold(p, s, params, bounds);
    IntVector z(s);
    z.head(s - 1) = prefix;
    std::int64_t count = 0;
    for (std::int64_t c = 0; c < p; ++c) {
        z[s - 1] = c;
        if (worst_case_error_sq(p, z, head) - base <= threshold) ++count;
    }
    return count;
}

}  // namespace randlat::oracle
