#pragma once

// Slow reference evaluators that follow the defining sums directly.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "randlat/error_eval.hpp"
#include "randlat/korobov.hpp"
#include "randlat/primes.hpp"

namespace randlat::oracle {

/// out[z] = sum_k v[k z mod p] w[k], O(p^2).
Eigen::VectorXd naive_kernel(std::int64_t p, const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// sum over 0 < |h|_inf <= H with h . z = 0 (mod n) of r_alpha^{-2}(h).
double dual_lattice_wce_sq(std::int64_t n, const IntVector& z, const KorobovSpaceParams& params, std::int64_t H);

/// (1/L^2) sum_{p, q in pool} sum over 0 < |h|_inf <= H with h . z^(p) = 0 (mod p) and
/// h . z^(q) = 0 (mod q) of r_alpha^{-2}(h).
double dual_lattice_eran_sq(const ResidueVector& v, const KorobovSpaceParams& params, std::int64_t H);

/// Integer check of (1/p^d) #{z in Z_p^d : h . z = 0 (mod p)} = ((p-1)/p) [h = 0 (mod p)] + 1/p
/// for every h with |h_j| <= p.
bool averaging_identity_holds(std::int64_t p, int d);

/// e_det^2 of every z in Z_p^d, enumerated in lexicographic order (z_1 slowest).
std::vector<double> all_wce_sq(std::int64_t p, int d, const KorobovSpaceParams& params);

/// theta_s(z) for every z in Z_p by the double loop over (z, k); prefix holds z_1..z_{s-1}.
Eigen::VectorXd naive_theta(std::int64_t p, const IntVector& prefix, const KorobovSpaceParams& params);

/// CBC vector from per-component argmins of e_det^2(z', z_s) - e_det^2(z').
IntVector naive_cbc(std::int64_t p, const KorobovSpaceParams& params);

/// T-hat_s for pool prime i by the loop over (q, l, k), reading residues of dimensions < s
/// and of primes below p_i at dimension s from v.
Eigen::VectorXd naive_t_hat(const ResidueVector& v, const KorobovSpaceParams& params, int s, std::size_t i);

/// The part of T-hat_s that T omits (frequencies with h_s = 0 mod p in the q < p sums).
double naive_dropped_term(const ResidueVector& v, const KorobovSpaceParams& params, int s, std::size_t i);

/// The fixed-vector construction driven by naive_theta and naive_t_hat.
ResidueVector naive_fixed_vector(std::int64_t n, const KorobovSpaceParams& params, double tau);

/// Number of z in Z_p^d whose e_det is within good_set_threshold, by enumeration.
std::int64_t good_vector_count(std::int64_t p, const KorobovSpaceParams& params, const BoundParams& bounds);

/// Number of z_s in Z_p whose theta_s, taken as e_det^2 differences after the prefix,
/// is within component_threshold; s = prefix.size() + 1.
std::int64_t good_component_count(std::int64_t p, const IntVector& prefix, const KorobovSpaceParams& params,
                                  const BoundParams& bounds);

}  // namespace randlat::oracle
