#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dmdcp/cp.hpp"
#include "dmdcp/io.hpp"
#include "dmdcp/synth.hpp"
#include "dmdcp/tensor_ops.hpp"
#include "test_helpers.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

using namespace dmdcp;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("dmdcp_io_test_" + name);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("tensor JSON round-trip is bit-identical") {
    SynthConfig cfg;
    cfg.seed = 55;
    cfg.N = 12;
    const SynthData data = synth_generate(cfg);
    const auto path = temp_file("tensor.json");
    tensor_io_write(data.Y, path.string());
    const Tensor3 back = tensor_io_read(path.string());
    CHECK(back == data.Y);
}

TEST_CASE("tensor reader rejects malformed files") {
    const auto path = temp_file("bad_tensor.json");

    write_text(path, "{\"dims\": [2,2,2], \"data\": [[1,0],[1,0],[1,0],[1,0],[1,0],[1,0],[1,0]]}");
    CHECK_THROWS_AS(tensor_io_read(path.string()), DataError);

    write_text(path, "{\"dims\": [2,2], \"data\": []}");
    CHECK_THROWS_AS(tensor_io_read(path.string()), DataError);

    write_text(path, "not json at all {");
    CHECK_THROWS_AS(tensor_io_read(path.string()), DataError);

    CHECK_THROWS_AS(tensor_io_read("/nonexistent/dir/file.json"), DataError);
}

TEST_CASE("tensor reader rejects non-finite entries with a position") {
    const auto path = temp_file("nan_tensor.json");
    std::string data;
    for (int i = 0; i < 8; ++i) data += (i ? "," : "") + std::string(i == 5 ? "[null,0]" : "[1,0]");
    write_text(path, "{\"dims\": [2,2,2], \"data\": [" + data + "]}");
    CHECK_THROWS_AS(tensor_io_read(path.string()), DataError);

    // JSON has no NaN literal, so a NaN smuggled as null must also fail.
    write_text(path, "{\"dims\": [1,1,1], \"data\": [[NaN,0]]}");
    CHECK_THROWS_AS(tensor_io_read(path.string()), DataError);
}

TEST_CASE("factors JSON round-trip and schema checks") {
    UniformStream stream(101);
    const CPFactors f = test::random_factors(stream, 3, 5, 4, 2);
    const auto path = temp_file("factors.json");
    factors_io_write(f, path.string());
    const CPFactors back = factors_io_read(path.string());
    CHECK((back.A - f.A).norm() == 0.0);
    CHECK((back.B - f.B).norm() == 0.0);
    CHECK((back.C - f.C).norm() == 0.0);

    nlohmann::json j;
    {
        std::ifstream in(path);
        in >> j;
    }
    j["R"] = 3;  // now disagrees with the column counts
    write_text(path, j.dump());
    CHECK_THROWS_AS(factors_io_read(path.string()), DataError);
}

TEST_CASE("matrix entries are stored row-major") {
    const auto path = temp_file("rowmajor.json");
    write_text(path,
               "{\"R\": 2,"
               " \"A\": {\"rows\":2, \"cols\":2, \"data\":[[1,0],[2,0],[3,0],[4,0]]},"
               " \"B\": {\"rows\":1, \"cols\":2, \"data\":[[5,0],[6,0]]},"
               " \"C\": {\"rows\":1, \"cols\":2, \"data\":[[7,0],[8,0]]}}");
    const CPFactors f = factors_io_read(path.string());
    CHECK(f.A(0, 0) == Cx(1, 0));
    CHECK(f.A(0, 1) == Cx(2, 0));
    CHECK(f.A(1, 0) == Cx(3, 0));
    CHECK(f.A(1, 1) == Cx(4, 0));
}

TEST_CASE("a DMD result file is loadable as plain CP factors") {
    SynthConfig cfg;
    cfg.seed = 56;
    cfg.N = 15;
    const SynthData data = synth_generate(cfg);
    const DmdResult res = dmd_tensor(data.X, data.Y);
    const auto path = temp_file("dmd.json");
    dmd_io_write(res, cfg.N, path.string());

    const CPFactors as_factors = factors_io_read(path.string());
    const CPFactors projected = dmd_to_cp(res, cfg.N);
    CHECK((as_factors.A - projected.A).norm() == 0.0);
    CHECK((as_factors.B - projected.B).norm() == 0.0);
    CHECK((as_factors.C - projected.C).norm() == 0.0);

    const DmdResult back = dmd_io_read(path.string());
    CHECK((back.modes - res.modes).norm() == 0.0);
    CHECK((back.eigenvalues - res.eigenvalues).norm() == 0.0);
    CHECK((back.amplitudes - res.amplitudes).norm() == 0.0);
    CHECK(back.strategy == res.strategy);
}

TEST_CASE("tensor layout in the file runs the first index fastest") {
    Tensor3 t(2, 2, 1);
    t(0, 0, 0) = Cx(1, 0);
    t(1, 0, 0) = Cx(2, 0);
    t(0, 1, 0) = Cx(3, 0);
    t(1, 1, 0) = Cx(4, 0);
    const auto path = temp_file("layout.json");
    tensor_io_write(t, path.string());
    nlohmann::json j;
    {
        std::ifstream in(path);
        in >> j;
    }
    CHECK(j["data"][0][0].get<double>() == 1.0);
    CHECK(j["data"][1][0].get<double>() == 2.0);
    CHECK(j["data"][2][0].get<double>() == 3.0);
    CHECK(j["data"][3][0].get<double>() == 4.0);
}
