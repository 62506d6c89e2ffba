#include "jscc/cli.hpp"

#include <doctest.h>

#include <stdexcept>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace jscc;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');)
        v.push_back(c);
    return v;
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("jscc_test_" + name);
}

} // namespace

TEST_CASE("simulate prints one row")
{
    const auto r = run({"simulate", "--n", "2", "--snr-db", "30", "--samples", "20000", "--workers", "2",
                        "--no-ziv"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(split(ls[0]).size() == split(ls[1]).size());
    CHECK(split(ls[1])[5] == "20000");
}

TEST_CASE("usage errors exit with 2")
{
    auto r = run({"simulate", "--n", "1", "--samples", "1000"});
    CHECK(r.code == 2);
    CHECK(r.err.find("n must be") != std::string::npos);
    CHECK(run({"simulate", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"sweep", "--snr-db-range", "30:20:3"}).code == 2);
    CHECK(run({"sweep", "--snr-db-range", "30:x:3"}).code == 2);
    CHECK(run({"simulate", "--samples", "10"}).code == 2);
    CHECK(run({"simulate", "--noise-var", "-1", "--samples", "1000"}).code == 2);
    r = run({"solve-eps", "--snr", "0.5", "--n", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("snr must exceed 1") != std::string::npos);
}

TEST_CASE("noiseless simulate is exact")
{
    const auto r = run({"simulate", "--n", "3", "--snr-db", "40", "--eps", "0.2", "--noise-var", "0",
                        "--samples", "10000", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["mse"].get<double>() <= 1e-18);
    CHECK(j["eps"].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("sweep output is reproducible and carries a fit")
{
    const std::vector<std::string> args{"sweep", "--n", "2", "--snr-db-range", "30:60:3", "--samples", "2000",
                                        "--no-ziv", "--seed", "11"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto ls = lines(a.out);
    REQUIRE(ls.size() == 13);
    CHECK(ls.back().rfind("# fit mode=raw-loglog window=30:60 points=11 ", 0) == 0);
    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    CHECK(run(with_workers).out == a.out);
    auto other_seed = args;
    other_seed[9] = "12";
    CHECK(run(other_seed).out != a.out);
}

TEST_CASE("bounds table")
{
    const auto r = run({"bounds", "--n", "2", "--snr-db-range", "30:60:3", "--eps-policy", "fixed", "--eps", "0",
                        "--no-ziv"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 12);
    CHECK(ls[0] == "snr_db,snr,n,eps,beta,opta,lemma4,lemma5,ziv,theorem_ref");
    const auto row = split(ls[4]);
    CHECK(row[0] == "39");
    CHECK(row[6] != "NA");
    CHECK(row[8] == "NA");

    const auto at40 = run({"bounds", "--n", "2", "--snr-db-range", "40:40:1", "--eps-policy", "fixed", "--eps",
                           "0.5", "--no-ziv"});
    REQUIRE(at40.code == 0);
    const auto cells = split(lines(at40.out)[1]);
    // Gaussian unit variance: (1 + snr)^-2
    CHECK(std::stod(cells[5]) == doctest::Approx(9.998000299960005e-09).epsilon(1e-12));
    CHECK(cells[8] == "NA");
}

TEST_CASE("solve-eps")
{
    auto r = run({"solve-eps", "--snr", "1e4", "--n", "2", "--k", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["residual"].get<double>()) <= 1e-9);

    r = run({"solve-eps", "--snr", std::to_string(std::exp(10.0)), "--n", "2", "--k", "1", "--policy",
             "achievability", "--format", "json"});
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["eps"].get<double>() == doctest::Approx(std::log(20.0) / 10.0).epsilon(1e-9));
    CHECK(run({"solve-eps", "--snr", "1e4", "--snr-db", "40"}).code == 2);
    CHECK(run({"solve-eps", "--n", "2"}).code == 2);
}

TEST_CASE("config file and manifest")
{
    const auto cfg = temp_path("cfg.txt");
    {
        std::ofstream f(cfg);
        f << "# defaults\nn = 3\nsnr-db = 30\nsamples = 5000\nno-ziv = true\nseed = 4\n";
    }
    const auto from_file = run({"simulate", "--config", cfg.string(), "--snr-db", "35"});
    REQUIRE(from_file.code == 0);
    const auto explicit_args = run({"simulate", "--n", "3", "--snr-db", "35", "--samples", "5000", "--no-ziv",
                                    "--seed", "4"});
    CHECK(from_file.out == explicit_args.out);

    const auto table = temp_path("out.csv");
    const auto written = run({"simulate", "--config", cfg.string(), "--out", table.string()});
    REQUIRE(written.code == 0);
    const auto manifest_path = table.string() + ".manifest.json";
    std::ifstream mf(manifest_path);
    REQUIRE(mf.good());
    std::stringstream buf;
    buf << mf.rdbuf();
    const auto j = nlohmann::json::parse(buf.str());
    CHECK(j["command"] == "simulate");
    CHECK(j["seed"] == 4);
    CHECK(j["config"]["n"] == "3");

    // A manifest reproduces the run.
    const auto replay = run({"simulate", "--config", manifest_path});
    REQUIRE(replay.code == 0);
    CHECK(replay.out == written.out);
    CHECK(run({"sweep", "--config", manifest_path}).code == 2);
    CHECK(run({"simulate", "--config", temp_path("missing").string()}).code == 2);

    std::filesystem::remove(cfg);
    std::filesystem::remove(table);
    std::filesystem::remove(manifest_path);
}
