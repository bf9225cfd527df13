#pragma once
// SPDX-License-Identifier: Apache-2.0
// Experiment descriptors, validation, execution and run manifests.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ryd::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

struct Issue {
    std::string field;  // dotted path, e.g. params.J_list
    int line = 0;       // 1-based line in the descriptor text, 0 when unknown
    std::string message;
};

struct Descriptor {
    std::string path;
    std::string text;
    std::string name;
    std::string experiment;
    std::string description;
    std::string panel;          // short figure label
    double budget_seconds = 0;  // declared desk-scale budget
    bool long_run = false;
    std::uint64_t seed = 1;
    json params;
};

class DescriptorError : public std::runtime_error {
public:
    explicit DescriptorError(std::vector<Issue> issues);
    const std::vector<Issue>& issues() const { return issues_; }

private:
    std::vector<Issue> issues_;
};

// Parses and validates; throws DescriptorError with every problem found.
Descriptor load_descriptor(const std::string& path);
Descriptor parse_descriptor(const std::string& text, const std::string& path = "<memory>");
std::vector<Issue> validate(const Descriptor& d);

struct Artifact {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunOptions {
    std::string out_dir = ".";
    int threads = 0;               // 0: default
    std::size_t ed_budget = 20000000;
};

struct RunContext {
    const Descriptor& d;
    const RunOptions& opt;
    std::vector<Artifact> artifacts;
    json summary = json::object();

    // Writes a CSV file (header + rows of doubles printed round-trip exact) and records it.
    void write_csv(const std::string& suffix, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);
    std::string out_path(const std::string& suffix) const;
};

struct ParamSpec {
    std::string key;
    enum Kind { Number, Integer, Boolean, NumberList, IntegerList } kind = Number;
    bool required = true;
    double min = -1e300, max = 1e300;
};

struct Experiment {
    std::string kind;
    std::string summary;
    std::vector<ParamSpec> params;
    std::function<void(RunContext&)> run;
};

const std::map<std::string, Experiment>& registry();

// Bundled descriptors, sorted by name.
std::vector<Descriptor> bundled_descriptors(const std::string& dir = RYDSIM_DESCRIPTOR_DIR);

std::string sha256_hex(const std::string& bytes);
std::string format_double(double v);

// Full command-line entry point. Exit codes: 0 ok, 2 usage/validation, 3 solver failure.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ryd::cli
