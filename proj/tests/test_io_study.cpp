#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "randlat/error_eval.hpp"
#include "randlat/io.hpp"
#include "randlat/oracles.hpp"
#include "randlat/rpfv.hpp"
#include "randlat/study.hpp"

using namespace randlat;

namespace {

std::filesystem::path scratch_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("randlat_test_" + name);
}

}  // namespace

TEST_CASE("gamma specs") {
    const auto poly = parse_gamma_spec("poly:2", 3);
    CHECK(poly[0] == 1.0);
    CHECK(poly[1] == 0.25);
    CHECK(poly[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    const auto list = parse_gamma_spec("1, 0.5,0.125", 3);
    CHECK(list[1] == 0.5);
    CHECK(list[2] == 0.125);
    CHECK_THROWS_AS(parse_gamma_spec("1,2", 3), ValidationError);
    CHECK_THROWS_AS(parse_gamma_spec("poly:x", 3), ValidationError);
    CHECK_THROWS_AS(parse_gamma_spec("1,-1", 2), ValidationError);
    CHECK_THROWS_AS(parse_gamma_spec("1,,1", 3), ValidationError);
}

TEST_CASE("vector files round-trip exactly") {
    const KorobovSpaceParams params(2, parse_gamma_spec("1,0.3,0.1", 3));
    const auto v = construct_fixed_vector(40, params);
    auto file = VectorFile::from(v, params, 0.5, {{"mode", "cached"}});
    const auto path = scratch_file("roundtrip.json");
    write_vector_file(path, file);
    const auto back = read_vector_file(path);
    CHECK(back.residues == v.residues());
    CHECK(back.primes == v.pool().primes());
    CHECK(back.gamma == file.gamma);
    CHECK(back.tau == 0.5);
    CHECK(back.metadata.at("mode") == "cached");
    CHECK(back.residue_vector().residues() == v.residues());
    CHECK(back.params().gamma() == params.gamma());
    std::filesystem::remove(path);
}

TEST_CASE("vector file validation") {
    const auto params = KorobovSpaceParams::polynomial_weights(2, 2, 2.0);
    const auto v = construct_fixed_vector(12, params);
    const auto good = to_json(VectorFile::from(v, params, 0.5));
    CHECK_NOTHROW(vector_file_from_json(good));
    CHECK(good.at("primes") == nlohmann::json({7, 11}));

    auto bad = good;
    bad["primes"] = {7, 13};
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad["residues"][0][0] = 2;
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad["residues"][1][1] = 11;
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad["format_version"] = 2;
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad.erase("tau");
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad["alpha"] = 5;
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);
    bad = good;
    bad["gamma"] = {1.0};
    CHECK_THROWS_AS(vector_file_from_json(bad), ValidationError);

    const auto path = scratch_file("garbage.json");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(read_vector_file(path), ValidationError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_vector_file(scratch_file("missing.json")), ValidationError);
}

TEST_CASE("n = 12 vector file matches the naive construction") {
    const auto params = KorobovSpaceParams(2, parse_gamma_spec("poly:2", 2));
    const auto file = VectorFile::from(construct_fixed_vector(12, params), params, 0.5);
    CHECK(file.residues == oracle::naive_fixed_vector(12, params, 0.5).residues());
}

TEST_CASE("one-dimensional vectors and their closed-form error") {
    const auto params = KorobovSpaceParams::polynomial_weights(1, 2, 1.0);
    const auto v = construct_fixed_vector(50, params);
    CHECK((v.residues().array() == 1).all());
    const auto& primes = v.pool().primes();
    const double L = double(primes.size());
    const double c = 2.0 * zeta(4.0);
    double sum = 0.0;
    for (auto p : primes) sum += c / std::pow(double(p), 4);
    for (auto p : primes)
        for (auto q : primes)
            if (p != q) sum += c / std::pow(double(p * q), 4);
    CHECK(randomized_error_sq_fixed(v, params).squared_error == doctest::Approx(sum / (L * L)).epsilon(1e-12));
}

TEST_CASE("numbers and CSV") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(std::nullopt).empty());
    std::ostringstream out;
    write_csv(out, {"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}});
    CHECK(out.str() == "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
}

TEST_CASE("closest prime and slopes") {
    CHECK(closest_prime(15.407) == 17);
    CHECK(closest_prime(12.0) == 11);  // 11 and 13 tie
    CHECK(closest_prime(1.0) == 2);
    CHECK(closest_prime(0.0) == 2);
    CHECK(closest_prime(114.475) == 113);
    CHECK(closest_prime(std::pow(1.2, 26)) == 113);
    CHECK_THROWS_AS(closest_prime(-1.0), DomainError);

    CHECK_FALSE(loglog_slope({10.0}, {1.0}).has_value());
    const auto s = loglog_slope({10.0, 20.0, 40.0}, {1.0, 0.25, 0.0625});
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {1.0, 0.0}), DomainError);
}

TEST_CASE("study tables") {
    StudyOptions o;
    o.params = KorobovSpaceParams::polynomial_weights(3, 1, 3.0);
    o.k_first = 15;
    o.k_last = 15;
    const auto single = run_study(o);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].n == 17);
    CHECK_FALSE(single.slope_det.has_value());
    CHECK_FALSE(single.slope_ran.has_value());
    CHECK(*single.rows[0].ref_det == *single.rows[0].e_det_cbc);
    CHECK(*single.rows[0].ref_ran == *single.rows[0].e_ran_rpfv);

    o.k_first = 8;
    o.k_last = 20;
    int seen = 0;
    const auto table = run_study(o, [&](const StudyRow&) { ++seen; });
    CHECK(seen == int(table.rows.size()));
    for (std::size_t i = 1; i < table.rows.size(); ++i) CHECK(table.rows[i].n > table.rows[i - 1].n);
    for (const auto& r : table.rows) {
        CHECK(*r.e_det_cbc > 0.0);
        CHECK(*r.e_ran_rpfv > 0.0);
    }
    const auto& last = table.rows.back();
    CHECK(*last.ref_det ==
          doctest::Approx(*table.rows[0].e_det_cbc * double(table.rows[0].n) / double(last.n)).epsilon(1e-12));
    REQUIRE(table.slope_det.has_value());
    CHECK(*table.slope_ran < *table.slope_det);
    CHECK(table.csv_rows().size() == table.rows.size());
    CHECK(table.csv_header().size() == table.csv_rows()[0].size());

    o.k_first = 30;
    o.k_last = 40;
    o.max_n = 300;
    const auto capped = run_study(o);
    CHECK(capped.capped);
    REQUIRE_FALSE(capped.rows.empty());
    CHECK_FALSE(capped.rows.back().e_ran_rpfv.has_value());
    CHECK(capped.rows.back().n > 300);
    CHECK(capped.rows.back().note.find("--allow-large") != std::string::npos);

    o.k_first = 2;
    CHECK_THROWS_AS(run_study(o), ValidationError);
}
