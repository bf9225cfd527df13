// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "rydsim/cli.hpp"

using namespace ryd::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int rc;
    std::string out, err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "rydsim");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o, e;
    const int rc = main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
    return {rc, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rydsim_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

const char* kSmallGap = R"({
  "name": "gap_small",
  "experiment": "sg_gap_scaling",
  "description": "tiny ring",
  "budget_seconds": 30,
  "params": { "N": 3, "J_list": [1, 2], "Vnn": 10.0, "lambda": 50.0 }
})";

}  // namespace

TEST_CASE("list: at least eight bundled descriptors, stable output") {
    const auto a = call({"list"}), b = call({"list"});
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    int lines = 0;
    for (char c : a.out) lines += c == '\n';
    CHECK(lines >= 8);
    for (const char* n : {"fig3_convergence", "fig4_gap_scaling", "fig4_dispersion", "fig4_quench", "fig4_vertex",
                          "fig5_capacitor", "fig6_fidelity", "arp_sweep", "ewald_check"})
        CHECK(a.out.find(n) != std::string::npos);
}

TEST_CASE("every bundled descriptor validates") {
    const auto ds = bundled_descriptors();
    CHECK(ds.size() >= 8);
    for (const auto& d : ds) {
        CHECK(validate(d).empty());
        CHECK(d.budget_seconds > 0);
        CHECK(registry().count(d.experiment) == 1);
    }
}

TEST_CASE("unknown flag and missing subcommand exit 2") {
    CHECK(call({"--frobnicate", "list"}).rc == 2);
    CHECK(call({}).rc == 2);
    const auto r = call({"run", "no_such_descriptor"});
    CHECK(r.rc == 2);
}

TEST_CASE("malformed descriptors report line and field") {
    const auto dir = scratch("bad");
    const auto syntax = write(dir / "syntax.json", "{\n  \"name\": \"x\",\n  \"experiment\": oops\n}\n");
    auto r = call({"validate", syntax});
    CHECK(r.rc == 2);
    CHECK(r.err.find(":3:") != std::string::npos);

    const auto range = write(dir / "range.json", R"({
  "name": "x",
  "experiment": "sg_gap_scaling",
  "description": "bad",
  "budget_seconds": 10,
  "params": {
    "N": 1,
    "J_list": [1],
    "lambda": 2.0,
    "colour": 3
  }
})");
    r = call({"validate", range});
    CHECK(r.rc == 2);
    CHECK(r.err.find(":7: params.N") != std::string::npos);
    CHECK(r.err.find("params.Vnn") != std::string::npos);
    CHECK(r.err.find(":10: params.colour") != std::string::npos);

    CHECK_THROWS_AS(parse_descriptor(R"({"name": "x", "experiment": "warp_drive", "description": "", "budget_seconds": 1})"),
                    DescriptorError);
    CHECK_THROWS_AS(parse_descriptor(R"({"name": "x", "experiment": "sg_masses", "description": "", "budget_seconds": 0,
                                        "params": {"beta2_list": [1], "M0": 1}})"),
                    DescriptorError);
    // nothing ran, so nothing was written
    const auto out = scratch("bad_out");
    CHECK(call({"--out-dir", out.string(), "run", range}).rc == 2);
    CHECK(fs::is_empty(out));
}

TEST_CASE("run: gap CSV columns, manifest, byte-identical reruns") {
    const auto dir = scratch("run");
    const auto desc = write(dir / "gap_small.json", kSmallGap);
    const auto o1 = dir / "a", o2 = dir / "b";
    REQUIRE(call({"--threads", "1", "--out-dir", o1.string(), "run", desc}).rc == 0);
    REQUIRE(call({"--threads", "1", "--out-dir", o2.string(), "run", desc}).rc == 0);
    const std::string csv = slurp(o1 / "gap_small.csv");
    CHECK(csv.rfind("J,gap_with_ising,gap_without,oracle\n", 0) == 0);
    CHECK(csv == slurp(o2 / "gap_small.csv"));

    const auto m = json::parse(slurp(o1 / "gap_small.manifest.json"));
    CHECK(m["descriptor_sha256"] == sha256_hex(kSmallGap));
    CHECK(m["tool_version"] == kToolVersion);
    CHECK(m["threads"] == 1);
    bool found = false;
    for (const auto& a : m["outputs"])
        if (a["path"].get<std::string>().find("gap_small.csv") != std::string::npos) {
            found = true;
            CHECK(a["sha256"] == sha256_hex(csv));
            CHECK(a["bytes"] == csv.size());
        }
    CHECK(found);
}

TEST_CASE("solver failure exits 3") {
    const auto dir = scratch("fail");
    const auto desc = write(dir / "huge.json", R"({
  "name": "huge",
  "experiment": "sg_gap_scaling",
  "description": "over the ED cap",
  "budget_seconds": 10,
  "params": { "N": 5, "J_list": [20], "Vnn": 10.0, "lambda": 50.0 }
})");
    const auto r = call({"--out-dir", (dir / "o").string(), "run", desc});
    CHECK(r.rc == 3);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("bundled descriptor by name") {
    const auto dir = scratch("named");
    CHECK(call({"--out-dir", dir.string(), "run", "fig4_vertex"}).rc == 0);
    CHECK(fs::exists(dir / "fig4_vertex.manifest.json"));
}

TEST_CASE("format helpers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("tool binary exit codes") {
    const char* bin = std::getenv("RYDSIM_BIN");
    if (!bin) return;
    const std::string b = bin;
    CHECK(WEXITSTATUS(std::system((b + " list > /dev/null").c_str())) == 0);
    CHECK(WEXITSTATUS(std::system((b + " --bogus list > /dev/null 2>&1").c_str())) == 2);
}
