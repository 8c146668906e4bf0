#include "randlat/study.hpp"

#include <chrono>
#include <cmath>

#include "randlat/cbc.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/io.hpp"
#include "randlat/primes.hpp"

namespace randlat {

std::int64_t closest_prime(double x) {
    if (!(x >= 0.0) || !std::isfinite(x) || x > 9.0e15) throw DomainError("closest_prime needs a finite x >= 0");
    std::int64_t below = std::int64_t(std::floor(x));
    while (below >= 2 && !is_prime(below)) --below;
    std::int64_t above = std::max<std::int64_t>(2, std::int64_t(std::ceil(x)));
    while (!is_prime(above)) ++above;
    if (below < 2) return above;
    return x - double(below) <= double(above) - x ? below : above;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("slope needs equal-length data");
    if (x.size() < 2) return std::nullopt;
    Eigen::MatrixXd A(x.size(), 2);
    Eigen::VectorXd b(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
        A(i, 0) = 1.0;
        A(i, 1) = std::log(x[i]);
        b[i] = std::log(y[i]);
    }
    return Eigen::VectorXd(A.colPivHouseholderQr().solve(b))[1];
}

std::vector<std::string> StudyResult::csv_header() const {
    return {"k", "n", "e_det_cbc", "e_ran_rpfv", "ref_det", "ref_ran", "construct_seconds", "note"};
}

std::vector<std::vector<std::string>> StudyResult::csv_rows() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows)
        out.push_back({std::to_string(r.k), std::to_string(r.n), format_number(r.e_det_cbc),
                       format_number(r.e_ran_rpfv), format_number(r.ref_det), format_number(r.ref_ran),
                       format_number(r.construct_seconds), r.note});
    return out;
}

StudyResult run_study(const StudyOptions& options, const std::function<void(const StudyRow&)>& on_row) {
    if (options.k_first > options.k_last) throw ValidationError("empty k range");
    if (!(options.base > 1.0)) throw DomainError("base must exceed 1");
    require_tau(options.construction.tau);
    const auto& params = options.params;
    const int alpha = params.alpha();
    StudyResult result;
    std::vector<double> ns, det, ran;
    std::int64_t last_n = 0;
    for (int k = options.k_first; k <= options.k_last; ++k) {
        const std::int64_t n = closest_prime(std::pow(options.base, k));
        if (n < 4) throw ValidationError("k = " + std::to_string(k) + " gives n = " + std::to_string(n) + " < 4");
        if (n == last_n) continue;
        last_n = n;
        StudyRow row;
        row.k = k;
        row.n = n;
        if (n > options.max_n && !options.allow_large) {
            row.note = "stopped: n exceeds " + std::to_string(options.max_n) + "; pass --allow-large to continue";
            result.capped = true;
            result.rows.push_back(row);
            if (on_row) on_row(row);
            break;
        }
        const auto start = std::chrono::steady_clock::now();
        const auto z = cbc_construct(n, params);
        row.e_det_cbc = std::sqrt(worst_case_error_sq(n, z, params));
        const auto v = construct_fixed_vector(n, params, options.construction);
        row.construct_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.e_ran_rpfv = randomized_error_sq_fixed(v, params).error();
        ns.push_back(double(n));
        det.push_back(*row.e_det_cbc);
        ran.push_back(*row.e_ran_rpfv);
        const double n0 = ns.front();
        row.ref_det = det.front() * std::pow(double(n) / n0, -double(alpha));
        row.ref_ran = ran.front() * std::pow(double(n) / n0, -double(alpha) - 0.5);
        result.rows.push_back(row);
        if (on_row) on_row(row);
    }
    result.slope_det = loglog_slope(ns, det);
    result.slope_ran = loglog_slope(ns, ran);
    return result;
}

}  // namespace randlat
