#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "yfl/field_io.hpp"
#include "yfl/series_io.hpp"

#ifndef YFL_CLI_PATH
#error "YFL_CLI_PATH must point at the yfl executable"
#endif

using namespace yfl;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "yfl_cli_test";

struct Result {
    int code;
    std::string output;
};

Result yfl_run(const std::string& args) {
    const fs::path log = kRoot / "last.log";
    fs::create_directories(kRoot);
    const std::string cmd = std::string(YFL_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(log)};
}

std::string dir(const std::string& name) {
    const fs::path p = kRoot / name;
    fs::remove_all(p);
    return p.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("background") {
    const std::string out = dir("bg_flat");
    Result r = yfl_run("--out " + out + " background --kind flat --n 3 --nodes 16 --period 1");
    CHECK(r.code == 0);
    const FieldFile R0 = read_field(fs::path(out) / "R0.yfld");
    CHECK(R0.field.max() == 0.0);
    CHECK(R0.field.min() == 0.0);
    CHECK(read_text_file(fs::path(out) / "manifest.txt").rfind("config_hash=", 0) == 0);

    const std::string phi = dir("bg_phi");
    r = yfl_run("--out " + phi + " background --kind conformally-flat --phi \"1+0.2*sin(2*pi*x1)\"");
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(phi) / "phi.yfld"));

    r = yfl_run("--out " + dir("bg_bad") + " background --n 2");
    CHECK(r.code == 4);
    CHECK(r.output.find("dimension below 3") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(yfl_run("").code == 4);
    CHECK(yfl_run("nonsense").code == 4);
    CHECK(yfl_run("flow --no-such-flag 1").code == 4);
    CHECK(yfl_run("--out " + dir("u1") + " --set bogus=1 flow").code == 4);
    CHECK(yfl_run("--out " + dir("u2") + " flow --dt -1").code == 4);
    CHECK(yfl_run("--out " + dir("u3") + " check --series /nonexistent").code == 4);
}

TEST_CASE("flow runs and checks") {
    const std::string fixed = dir("fixed");
    Result r = yfl_run("--out " + fixed + " flow --u0 1 --nodes 8 --dt 1e-3 --T 0.05");
    REQUIRE(r.code == 0);
    const TimeSeries ts = read_series(fixed);
    for (const auto& s : ts.samples) {
        CHECK(s.volume == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(s.r) < 1e-12);
    }
    r = yfl_run("--out " + dir("fixed_checks") + " check --series " + fixed);
    CHECK(r.code == 0);
    const auto checks = nlohmann::json::parse(read_text_file(kRoot / "fixed_checks" / "checks.json"));
    CHECK(checks["checks"].size() >= 3);
    for (const auto& c : checks["checks"]) {
        CHECK(c["holds"] == true);
        CHECK(c["worst_margin"].get<double>() >= -1e-12);
    }

    const std::string norm = dir("norm");
    r = yfl_run("--out " + norm + " flow --mode normalized --u0 \"1+0.3*sin(2*pi*x1)\" --nodes 16 --T 0.01");
    REQUIRE(r.code == 0);
    const TimeSeries tn = read_series(norm);
    for (const auto& s : tn.samples)
        CHECK(std::abs(s.volume - tn.samples[0].volume) <= 1e-6 * tn.samples[0].volume);

    const std::string un = dir("unnorm");
    r = yfl_run("--out " + un + " flow --mode unnormalized --u0 \"1+0.3*sin(2*pi*x1)\" --nodes 16 --T 0.01");
    REQUIRE(r.code == 0);
    const TimeSeries tu = read_series(un);
    for (std::size_t k = 1; k < tu.samples.size(); ++k)
        CHECK(tu.samples[k].total_scalar <= tu.samples[k - 1].total_scalar + 1e-10);
    CHECK(yfl_run("--out " + dir("vb") + " check volume-bounds --series " + un).code == 0);
    CHECK(yfl_run("--out " + dir("wrong") + " check volume-bounds --series " + norm).code == 2);
    CHECK(yfl_run("--out " + dir("unknown") + " check frobnicate --series " + norm).code == 4);

    // Gronwall against a bound that cannot hold.
    CHECK(yfl_run("--out " + dir("gr") + " check gronwall --series " + norm + " --alpha 0.5").code == 1);
    CHECK(yfl_run("--out " + dir("gr2") + " check gronwall --series " + norm + " --alpha \"2 + t\" --beta 1").code == 0);
}

TEST_CASE("L1 check on a perturbed pair") {
    const std::string a = dir("pair_a"), b = dir("pair_b");
    const std::string common = " flow --mode unnormalized --nodes 8 --T 0.005 --snapshot-every 5";
    REQUIRE(yfl_run("--out " + a + common + " --u0 \"1+0.2*sin(2*pi*x1)\"").code == 0);
    REQUIRE(yfl_run("--out " + b + common + " --u0 \"1+0.2*sin(2*pi*x1)+0.05*cos(2*pi*x2)\"").code == 0);
    const std::string out = dir("l1");
    CHECK(yfl_run("--out " + out + " check l1 --series " + a + " --series-b " + b + " --psi 1").code == 0);
    const auto j = nlohmann::json::parse(read_text_file(fs::path(out) / "checks.json"));
    CHECK(j["checks"][0]["parameters"]["C_psi"] == 0.0);
}

TEST_CASE("experiment and reproducibility") {
    const std::string spec = (kRoot / "empty.cfg").string();
    fs::create_directories(kRoot);
    write_text_file(spec, "N = 0\nnodes = 8\nT = 0.002\n");
    const std::string a = dir("exp_a"), b = dir("exp_b");
    CHECK(yfl_run("--config " + spec + " --out " + a + " experiment").code == 0);
    CHECK(yfl_run("--config " + spec + " --out " + b + " experiment").code == 0);
    CHECK(read_text_file(fs::path(a) / "report.json") == read_text_file(fs::path(b) / "report.json"));
    const auto j = nlohmann::json::parse(read_text_file(fs::path(a) / "report.json"));
    CHECK(j["pass"] == true);
    CHECK(j["members"].empty());

    // --set beats the config file; the hash follows the effective config.
    const std::string c = dir("exp_c");
    CHECK(yfl_run("--config " + spec + " --set T=0.003 --out " + c + " experiment").code == 0);
    const auto jc = nlohmann::json::parse(read_text_file(fs::path(c) / "report.json"));
    CHECK(jc["flow"]["T"] == 0.003);
    CHECK(jc["config_hash"] != j["config_hash"]);

    const std::string f1 = dir("flow_a"), f2 = dir("flow_b");
    const std::string args = " flow --nodes 8 --T 0.002 --u0 \"1+0.1*cos(2*pi*x3)\"";
    REQUIRE(yfl_run("--out " + f1 + args).code == 0);
    REQUIRE(yfl_run("--out " + f2 + args).code == 0);
    for (const char* name : {"series.csv", "manifest.json", "final_u.yfld", "config.txt"})
        CHECK_MESSAGE(read_text_file(fs::path(f1) / name) == read_text_file(fs::path(f2) / name), name);
}

}  // TEST_SUITE
