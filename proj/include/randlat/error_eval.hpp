#pragma once

#include <cstdint>
#include <vector>

#include "randlat/korobov.hpp"
#include "randlat/primes.hpp"

namespace randlat {

/// Squared worst-case error of the rank-1 lattice rule Q_{d,n,z}:
///   -1 + (1/n) sum_k prod_j (1 + gamma_j^2 sigma_alpha(k z_j / n)).
/// Negative roundoff down to -1e-12 is clamped to zero.
double worst_case_error_sq(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params);

/// The same quantity as a dual-lattice sum truncated to |h_j| <= H.
double worst_case_error_sq_truncated(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params,
                                     std::int64_t H);

/// Upper bound on sum of r_alpha^{-2}(h) over h with some |h_j| > H; bounds the
/// truncation error of every truncated dual-lattice evaluator.
double dual_lattice_tail_bound(const KorobovSpaceParams& params, std::int64_t H);

enum class ErrorMethod { PointFormula, DualLatticeTruncated };

struct ErrorTerm {
    std::int64_t p = 0;
    std::int64_t q = 0;          ///< equals p for a diagonal term
    double squared_error = 0.0;  ///< [e_det(Q_{d,pq,z})]^2 (or Q_{d,p,z} on the diagonal)
    double contribution = 0.0;   ///< weighted share of the total: E/L^2, or 2E/L^2 off the diagonal
};

struct ErrorReport {
    double squared_error = 0.0;
    std::vector<ErrorTerm> decomposition;
    ErrorMethod method = ErrorMethod::PointFormula;
    bool clamped = false;  ///< raw value was negative roundoff and was set to zero

    double error() const;
    double decomposition_total() const;
};

/// Exact squared randomised error of the random-prime fixed-vector algorithm:
///   (1/L^2) [ sum_p E(p) + sum_{p != q} E(p, q) ],
/// E(p) = e_det^2(p, z^(p)), E(p, q) = e_det^2(pq, CRT(z^(p), z^(q))).
/// Pair terms are evaluated in parallel and reduced in sorted pair order.
ErrorReport randomized_error_sq_fixed(const ResidueVector& v, const KorobovSpaceParams& params);

/// Cross-validation path: sum over 0 < |h|_inf <= H of omega_n(h)^2 r_alpha^{-2}(h).
ErrorReport randomized_error_sq_truncated(const ResidueVector& v, const KorobovSpaceParams& params,
                                          std::int64_t H);

/// Fraction of pool primes p with h . z^(p) = 0 (mod p).
double omega_weight(const FrequencyVector& h, const ResidueVector& v);

/// Relaxation and lambda-grid settings for the good-set thresholds and bounds.
struct BoundParams {
    double tau = 0.5;
    std::vector<double> lambda_grid;
    double c_prime = 0.23;
    int refine_iterations = 20;  ///< golden-section steps around the grid argmin; 0 disables

    /// 32 equispaced points on [1/2, alpha - 0.01].
    static BoundParams defaults(int alpha, double tau);
    void validate(int alpha) const;
};

/// inf over lambda of f(lambda) on the grid, refined by golden-section search
/// between the neighbours of the grid argmin. Never exceeds the grid minimum.
template <typename Fn>
double minimize_over_lambda(Fn&& f, const BoundParams& bounds);

/// inf_lambda (2 mu(lambda) / ((1 - tau) p))^lambda, the good-vector bound on e_det.
double good_set_threshold(std::int64_t p, const KorobovSpaceParams& params, const BoundParams& bounds);

/// sum over h in Z^s with h_s != 0 of r_alpha^{-1/lambda}(h), product weights; s is 1-based.
double component_mu(const KorobovSpaceParams& params, int s, double lambda);

/// inf_lambda (2 component_mu(s, lambda) / ((1 - tau) p))^{2 lambda}, the good-component bound on theta.
double component_threshold(std::int64_t p, int s, const KorobovSpaceParams& params, const BoundParams& bounds);

/// C_{tau,lambda} of the constructive randomised-error bound.
double theorem_constant(double tau, double lambda, double c_prime = 0.23);

/// (C_{tau,lambda} ln n)^{1/2} / n^{lambda + 1/2} * mu(lambda)^lambda
double theorem_bound_eran(std::int64_t n, const KorobovSpaceParams& params, double tau, double lambda,
                          double c_prime = 0.23);

/// Minimum of theorem_bound_eran over the lambda grid (with refinement).
double theorem_bound_eran_min(std::int64_t n, const KorobovSpaceParams& params, const BoundParams& bounds);

/// B_{n,tau} = sup_lambda n^lambda (4 mu(lambda) / (1 - tau))^{-lambda}: every dual-lattice
/// frequency of a good vector for p in P_n has r_alpha(h) > B_{n,tau}.
double dual_lower_bound(std::int64_t n, const KorobovSpaceParams& params, const BoundParams& bounds);

/// Component analogue of dual_lower_bound with component_mu(s, lambda).
double component_dual_lower_bound(std::int64_t n, int s, const KorobovSpaceParams& params,
                                  const BoundParams& bounds);

/// ceil(tau * m), guarded against roundoff just above an integer.
std::int64_t good_count(double tau, std::int64_t m);

void require_tau(double tau);

}  // namespace randlat

#include "randlat/error_eval_inl.hpp"
