#include "randlat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace randlat {

namespace {

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) throw ValidationError("not a number: '" + text + "'");
    return value;
}

}  // namespace

Eigen::VectorXd parse_gamma_spec(const std::string& spec, int d) {
    if (d < 1) throw ValidationError("dimension must be positive");
    Eigen::VectorXd gamma(d);
    if (spec.rfind("poly:", 0) == 0) {
        const double c = parse_double(spec.substr(5));
        for (int j = 0; j < d; ++j) gamma[j] = std::pow(double(j + 1), -c);
    } else {
        std::vector<double> values;
        std::stringstream in(spec);
        for (std::string item; std::getline(in, item, ',');) values.push_back(parse_double(item));
        if (int(values.size()) != d)
            throw ValidationError("gamma list has " + std::to_string(values.size()) + " entries, expected " +
                                  std::to_string(d));
        for (int j = 0; j < d; ++j) gamma[j] = values[j];
    }
    for (int j = 0; j < d; ++j)
        if (!(gamma[j] > 0.0) || !std::isfinite(gamma[j])) throw ValidationError("weights must be positive and finite");
    return gamma;
}

VectorFile VectorFile::from(const ResidueVector& v, const KorobovSpaceParams& params, double tau,
                            nlohmann::json metadata) {
    if (v.dimension() != params.dimension()) throw ValidationError("vector and space dimensions differ");
    VectorFile f;
    f.n = v.pool().budget();
    f.d = params.dimension();
    f.alpha = params.alpha();
    f.gamma.assign(params.gamma().data(), params.gamma().data() + params.dimension());
    f.tau = tau;
    f.primes = v.pool().primes();
    f.residues = v.residues();
    f.metadata = std::move(metadata);
    return f;
}

KorobovSpaceParams VectorFile::params() const {
    return KorobovSpaceParams(alpha, Eigen::Map<const Eigen::VectorXd>(gamma.data(), Eigen::Index(gamma.size())));
}

ResidueVector VectorFile::residue_vector() const {
    validate();
    return ResidueVector(build_prime_pool(n), residues);
}

void VectorFile::validate() const {
    if (format_version != current_version)
        throw ValidationError("unsupported format_version " + std::to_string(format_version));
    if (d < 1) throw ValidationError("d must be positive");
    if (int(gamma.size()) != d) throw ValidationError("gamma must have d entries");
    try {
        (void)params();
    } catch (const Error& e) {
        throw ValidationError(std::string("invalid space parameters: ") + e.what());
    }
    if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("tau must lie in (0, 1)");
    PrimePool pool = [&] {
        try {
            return build_prime_pool(n);
        } catch (const Error& e) {
            throw ValidationError(std::string("invalid budget: ") + e.what());
        }
    }();
    if (primes != pool.primes()) throw ValidationError("prime list does not match the pool for n");
    if (residues.rows() != Eigen::Index(primes.size()) || residues.cols() != d)
        throw ValidationError("residue matrix must be primes x d");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (residues(i, 0) != 1) throw ValidationError("first component must be 1 for every prime");
        for (int j = 0; j < d; ++j)
            if (residues(i, j) < 0 || residues(i, j) >= primes[i])
                throw ValidationError("residue out of range for p = " + std::to_string(primes[i]));
    }
}

nlohmann::json to_json(const VectorFile& f) {
    nlohmann::json residues = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.residues.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < f.residues.cols(); ++j) row.push_back(f.residues(i, j));
        residues.push_back(std::move(row));
    }
    return {{"format_version", f.format_version},
            {"n", f.n},
            {"d", f.d},
            {"alpha", f.alpha},
            {"gamma", f.gamma},
            {"tau", f.tau},
            {"primes", f.primes},
            {"residues", residues},
            {"metadata", f.metadata}};
}

VectorFile vector_file_from_json(const nlohmann::json& j) {
    VectorFile f;
    try {
        f.format_version = j.at("format_version").get<int>();
        f.n = j.at("n").get<std::int64_t>();
        f.d = j.at("d").get<int>();
        f.alpha = j.at("alpha").get<int>();
        f.gamma = j.at("gamma").get<std::vector<double>>();
        f.tau = j.at("tau").get<double>();
        f.primes = j.at("primes").get<std::vector<std::int64_t>>();
        const auto rows = j.at("residues").get<std::vector<std::vector<std::int64_t>>>();
        f.residues.resize(Eigen::Index(rows.size()), f.d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (int(rows[i].size()) != f.d) throw ValidationError("residue row " + std::to_string(i) + " has wrong length");
            for (int c = 0; c < f.d; ++c) f.residues(Eigen::Index(i), c) = rows[i][c];
        }
        if (j.contains("metadata")) f.metadata = j.at("metadata");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed vector file: ") + e.what());
    }
    f.validate();
    return f;
}

void write_vector_file(const std::filesystem::path& path, const VectorFile& file) {
    file.validate();
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    out << to_json(file).dump(2) << '\n';
    if (!out) throw ValidationError("write to " + path.string() + " failed");
}

VectorFile read_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return vector_file_from_json(j);
}

std::string format_number(std::optional<double> x) {
    if (!x) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *x);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << ',';
            const bool quote = cells[c].find_first_of(",\"\n") != std::string::npos;
            if (!quote) {
                out << cells[c];
                continue;
            }
            out << '"';
            for (char ch : cells[c]) out << (ch == '"' ? "\"\"" : std::string(1, ch));
            out << '"';
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

}  // namespace randlat
