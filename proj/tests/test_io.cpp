#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "odeim/manifest.hpp"
#include "odeim/matrix_io.hpp"
#include "odeim/reports.hpp"

using namespace odeim;

namespace {

std::filesystem::path temp_dir() {
    static const std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() /
                 ("odeim_test_io_" + std::to_string(::getpid()));
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }();
    return dir;
}

Matrix sample_matrix() {
    Matrix m(3, 2);
    m << 1.0, -2.5,
         3.25e-17, 1e300,
         -0.1, 12345.678901234567;
    return m;
}

ErrorTable sample_table() {
    ErrorTable table;
    CellResult ok;
    ok.method = Method::qdeim;
    ok.n = 5;
    ok.m = 5;
    ok.replicate = 0;
    ok.error = 0.25;
    ok.selection_norm = 2.0;
    table.cells.push_back(ok);
    CellResult failed;
    failed.method = Method::odeim_e;
    failed.n = 7;
    failed.m = 14;
    failed.replicate = 1;
    failed.status = "newton-failed";
    table.cells.push_back(failed);
    return table;
}

}  // namespace

TEST_CASE("matrix text format round trips exactly") {
    const Matrix m = sample_matrix();
    std::stringstream buf;
    write_matrix_text(m, buf);
    const Matrix back = read_matrix_text(buf);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("matrix binary format round trips exactly") {
    const Matrix m = sample_matrix();
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    write_matrix_binary(m, buf);
    const Matrix back = read_matrix_binary(buf);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("read_matrix sniffs both formats from disk") {
    const Matrix m = sample_matrix();
    const std::string text_path = (temp_dir() / "mat.txt").string();
    const std::string binary_path = (temp_dir() / "mat.dmat").string();
    write_matrix_text(m, text_path);
    write_matrix_binary(m, binary_path);
    CHECK((read_matrix(text_path) - m).norm() == 0.0);
    CHECK((read_matrix(binary_path) - m).norm() == 0.0);
    CHECK_THROWS_AS(read_matrix((temp_dir() / "missing.dmat").string()), ArgumentError);
}

TEST_CASE("matrix readers reject malformed input") {
    {
        std::stringstream buf("2 x\n1 2\n3 4\n");
        CHECK_THROWS_AS(read_matrix_text(buf), ArgumentError);
    }
    {
        std::stringstream buf("0 3\n");
        CHECK_THROWS_AS(read_matrix_text(buf), ArgumentError);
    }
    {
        std::stringstream buf("2 2\n1 2 3\n");
        CHECK_THROWS_AS(read_matrix_text(buf), ArgumentError);
    }
    {
        std::stringstream buf("2 1\n1\nnan\n");
        CHECK_THROWS_AS(read_matrix_text(buf), ArgumentError);
    }
    {
        std::stringstream buf("MAT?junk");
        CHECK_THROWS_AS(read_matrix_binary(buf), ArgumentError);
    }
    {
        // valid header, payload cut short
        std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
        write_matrix_binary(Matrix::Ones(4, 4), buf);
        const std::string whole = buf.str();
        std::stringstream cut(whole.substr(0, whole.size() - 8));
        CHECK_THROWS_AS(read_matrix_binary(cut), ArgumentError);
    }
}

TEST_CASE("manifest round trips and tolerates comments") {
    Manifest manifest;
    manifest.emplace_back("command", "toy");
    manifest.emplace_back("sigma", "1e-06");
    manifest.emplace_back("methods", "qdeim,odeim-e");
    manifest.emplace_back("note", "");
    const std::string path = (temp_dir() / "manifest.txt").string();
    write_manifest(manifest, path);
    const Manifest back = read_manifest_file(path);
    CHECK(back == manifest);

    std::stringstream buf("# header comment\n\n  key = value with spaces  \n\t\n#x\nempty=\n");
    const Manifest parsed = read_manifest(buf);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].first == "key");
    CHECK(parsed[0].second == "value with spaces");
    CHECK(parsed[1].first == "empty");
    CHECK(parsed[1].second == "");

    std::stringstream bad("key-without-equals\n");
    CHECK_THROWS_AS(read_manifest(bad), ArgumentError);
    CHECK_THROWS_AS(read_manifest_file((temp_dir() / "nope.txt").string()), ArgumentError);

    CHECK(manifest_value(manifest, "sigma") == std::string("1e-06"));
    CHECK(!manifest_value(manifest, "absent").has_value());
}

TEST_CASE("error csv uses the fixed header and shortest numbers") {
    std::stringstream buf;
    write_error_csv(sample_table(), buf);
    std::string line;
    REQUIRE(std::getline(buf, line));
    CHECK(line == "method,n,m,replicate,error,selection_norm,status");
    REQUIRE(std::getline(buf, line));
    CHECK(line == "qdeim,5,5,0,0.25,2,ok");
    REQUIRE(std::getline(buf, line));
    CHECK(line == "odeim-e,7,14,1,nan,nan,newton-failed");
    CHECK(!std::getline(buf, line));
}

TEST_CASE("error json parses back with aggregates") {
    std::stringstream buf;
    write_error_json(sample_table(), buf);
    const nlohmann::json doc = nlohmann::json::parse(buf.str());
    REQUIRE(doc.contains("cells"));
    REQUIRE(doc.contains("aggregates"));
    REQUIRE(doc["cells"].size() == 2);
    CHECK(doc["cells"][0]["method"] == "qdeim");
    CHECK(doc["cells"][0]["error"] == 0.25);
    CHECK(doc["cells"][0]["status"] == "ok");
    CHECK(doc["cells"][1]["error"].is_null());  // nan serializes as null
    CHECK(doc["cells"][1]["status"] == "newton-failed");
    REQUIRE(doc["aggregates"].size() == 2);
    CHECK(doc["aggregates"][0]["ok_count"] == 1);
    CHECK(doc["aggregates"][1]["failed_count"] == 1);
}

TEST_CASE("bound report json carries the summary fields") {
    BoundReport report;
    report.big_n = 120;
    report.n = 4;
    report.delta = 0.2;
    report.trials = 2;
    report.sigma = 0.05;
    report.projection_norm = 0.1;
    report.lemma_violation_frequency = 0.5;
    report.expected_bound_violation_frequency = 0.0;
    report.mean_error = 0.11;
    report.mean_expected_bound = 0.4;
    report.mean_noise_contribution = 0.01;
    BoundTrial t;
    t.mu = 1.5;
    t.gamma = 0.7;
    t.m = 90;
    t.inverse_norm = 2.0;
    t.lemma_bound = 3.0;
    t.lemma_violated = false;
    t.error = 0.12;
    t.noise_free_error = 0.1;
    t.expected_bound = 0.4;
    t.expected_bound_violated = false;
    report.trial_results.push_back(t);

    std::stringstream buf;
    write_bound_report_json(report, buf);
    const nlohmann::json doc = nlohmann::json::parse(buf.str());
    CHECK(doc["N"] == 120);
    CHECK(doc["n"] == 4);
    CHECK(doc["delta"] == 0.2);
    CHECK(doc["trials"] == 2);
    CHECK(doc["lemma_violation_frequency"] == 0.5);
    CHECK(doc["mean_noise_contribution"] == 0.01);
    REQUIRE(doc["trial_results"].size() == 1);
    CHECK(doc["trial_results"][0]["m"] == 90);
    CHECK(doc["trial_results"][0]["lemma_violated"] == false);
}

TEST_CASE("writers report unopenable paths") {
    const std::string bogus = "/nonexistent_odeim_dir/out.csv";
    CHECK_THROWS_AS(write_error_csv(sample_table(), bogus), ArgumentError);
    CHECK_THROWS_AS(write_matrix_text(Matrix::Ones(1, 1), bogus), ArgumentError);
    CHECK_THROWS_AS(write_matrix_binary(Matrix::Ones(1, 1), bogus), ArgumentError);
    CHECK_THROWS_AS(write_manifest(Manifest{}, bogus), ArgumentError);
}
