#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "randlat/korobov.hpp"
#include "randlat/rpfv.hpp"

namespace randlat {

/// The prime minimising |p - x|; ties go to the smaller prime.
std::int64_t closest_prime(double x);

/// Least-squares slope of log y against log x; absent for fewer than two points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct StudyOptions {
    KorobovSpaceParams params{2, Eigen::VectorXd::Ones(1)};
    int k_first = 15;
    int k_last = 26;
    double base = 1.2;
    ConstructionOptions construction;
    std::int64_t max_n = 600;
    bool allow_large = false;
};

struct StudyRow {
    int k = 0;
    std::int64_t n = 0;
    /// absent on the warning row that ends a capped study
    std::optional<double> e_det_cbc;
    std::optional<double> e_ran_rpfv;
    /// n^{-alpha} and n^{-alpha-1/2}, scaled to the first row's errors
    std::optional<double> ref_det;
    std::optional<double> ref_ran;
    double construct_seconds = 0.0;
    std::string note;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::optional<double> slope_det;
    std::optional<double> slope_ran;
    bool capped = false;

    std::vector<std::string> csv_header() const;
    std::vector<std::vector<std::string>> csv_rows() const;
};

/// For each k: n = closest_prime(base^k); the CBC vector for n points gives e_det and the
/// fixed residue vector for budget n gives e_ran. Repeated n values are skipped.
StudyResult run_study(const StudyOptions& options, const std::function<void(const StudyRow&)>& on_row = {});

}  // namespace randlat
