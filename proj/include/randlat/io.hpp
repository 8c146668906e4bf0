#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "randlat/korobov.hpp"
#include "randlat/primes.hpp"

namespace randlat {

/// `poly:c` gives gamma_j = j^{-c}; otherwise a comma-separated list of d positive weights.
Eigen::VectorXd parse_gamma_spec(const std::string& spec, int d);

/// Constructed residue vector with the parameters it was built for.
struct VectorFile {
    static constexpr int current_version = 1;

    int format_version = current_version;
    std::int64_t n = 0;
    int d = 0;
    int alpha = 0;
    std::vector<double> gamma;
    double tau = 0.5;
    std::vector<std::int64_t> primes;
    IntMatrix residues;
    nlohmann::json metadata = nlohmann::json::object();

    static VectorFile from(const ResidueVector& v, const KorobovSpaceParams& params, double tau,
                           nlohmann::json metadata = nlohmann::json::object());

    KorobovSpaceParams params() const;
    ResidueVector residue_vector() const;
    /// Throws ValidationError unless the file describes a well-formed vector for budget n.
    void validate() const;
};

nlohmann::json to_json(const VectorFile& file);
VectorFile vector_file_from_json(const nlohmann::json& j);

void write_vector_file(const std::filesystem::path& path, const VectorFile& file);
VectorFile read_vector_file(const std::filesystem::path& path);

/// 17 significant digits; empty for an absent value.
std::string format_number(std::optional<double> x);

/// Comma-separated table with a header row.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace randlat
