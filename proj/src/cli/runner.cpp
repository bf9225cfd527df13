// SPDX-License-Identifier: Apache-2.0
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rydsim/cli.hpp"
#include "rydsim/error.hpp"
#include "rydsim/kernels.hpp"

namespace fs = std::filesystem;

namespace ryd::cli {

DescriptorError::DescriptorError(std::vector<Issue> issues)
    : std::runtime_error(issues.empty() ? "invalid descriptor" : issues.front().field + ": " + issues.front().message),
      issues_(std::move(issues)) {}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DescriptorError({{"<file>", 0, "cannot open " + path}});
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// First line mentioning "key"; good enough to point a user at the field.
int line_of(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream ss;
    for (unsigned i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return ss.str();
}

Descriptor parse_descriptor(const std::string& text, const std::string& path) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
        throw DescriptorError({{"<syntax>", line, e.what()}});
    }
    std::vector<Issue> issues;
    Descriptor d;
    d.path = path;
    d.text = text;
    if (!j.is_object()) throw DescriptorError({{"<root>", 1, "descriptor must be an object"}});
    auto str = [&](const char* k, std::string& dst, bool required) {
        if (!j.contains(k)) {
            if (required) issues.push_back({k, 0, "missing required field"});
            return;
        }
        if (!j[k].is_string()) {
            issues.push_back({k, line_of(text, k), "must be a string"});
            return;
        }
        dst = j[k].get<std::string>();
    };
    str("name", d.name, true);
    str("experiment", d.experiment, true);
    str("description", d.description, true);
    str("panel", d.panel, false);
    if (j.contains("budget_seconds")) {
        if (!j["budget_seconds"].is_number() || j["budget_seconds"].get<double>() <= 0)
            issues.push_back({"budget_seconds", line_of(text, "budget_seconds"), "must be a positive number"});
        else
            d.budget_seconds = j["budget_seconds"].get<double>();
    } else {
        issues.push_back({"budget_seconds", 0, "missing required field"});
    }
    if (j.contains("long_run")) {
        if (!j["long_run"].is_boolean())
            issues.push_back({"long_run", line_of(text, "long_run"), "must be true or false"});
        else
            d.long_run = j["long_run"].get<bool>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            issues.push_back({"seed", line_of(text, "seed"), "must be a non-negative integer"});
        else
            d.seed = j["seed"].get<std::uint64_t>();
    }
    if (!j.contains("params") || !j["params"].is_object())
        issues.push_back({"params", line_of(text, "params"), "missing or not an object"});
    else
        d.params = j["params"];
    static const char* known[] = {"name", "experiment", "description", "panel", "budget_seconds", "long_run", "seed",
                                  "params"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
            std::end(known))
            issues.push_back({it.key(), line_of(text, it.key()), "unknown field"});
    if (!issues.empty()) throw DescriptorError(issues);
    auto more = validate(d);
    if (!more.empty()) throw DescriptorError(more);
    return d;
}

Descriptor load_descriptor(const std::string& path) { return parse_descriptor(read_file(path), path); }

std::vector<Issue> validate(const Descriptor& d) {
    std::vector<Issue> issues;
    const auto& reg = registry();
    const auto it = reg.find(d.experiment);
    if (it == reg.end()) {
        issues.push_back({"experiment", line_of(d.text, "experiment"), "unknown experiment '" + d.experiment + "'"});
        return issues;
    }
    const auto& specs = it->second.params;
    for (const auto& s : specs) {
        const std::string field = "params." + s.key;
        const int line = line_of(d.text, s.key);
        if (!d.params.contains(s.key)) {
            if (s.required) issues.push_back({field, line_of(d.text, "params"), "missing required parameter"});
            continue;
        }
        const json& v = d.params[s.key];
        auto check_num = [&](const json& x, bool integer) -> bool {
            if (!x.is_number() || (integer && !x.is_number_integer())) {
                issues.push_back({field, line, integer ? "must be an integer" : "must be a number"});
                return false;
            }
            const double y = x.get<double>();
            if (y < s.min || y > s.max) {
                issues.push_back({field, line,
                                  "value " + format_double(y) + " outside [" + format_double(s.min) + ", " +
                                      format_double(s.max) + "]"});
                return false;
            }
            return true;
        };
        switch (s.kind) {
            case ParamSpec::Number: check_num(v, false); break;
            case ParamSpec::Integer: check_num(v, true); break;
            case ParamSpec::Boolean:
                if (!v.is_boolean()) issues.push_back({field, line, "must be true or false"});
                break;
            case ParamSpec::NumberList:
            case ParamSpec::IntegerList:
                if (!v.is_array() || v.empty()) {
                    issues.push_back({field, line, "must be a non-empty list"});
                    break;
                }
                for (const auto& x : v)
                    if (!check_num(x, s.kind == ParamSpec::IntegerList)) break;
                break;
        }
    }
    for (auto p = d.params.begin(); p != d.params.end(); ++p)
        if (std::none_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == p.key(); }))
            issues.push_back({"params." + p.key(), line_of(d.text, p.key()), "unknown parameter"});
    return issues;
}

std::string RunContext::out_path(const std::string& suffix) const {
    return (fs::path(opt.out_dir) / (d.name + suffix)).string();
}

void RunContext::write_csv(const std::string& suffix, const std::vector<std::string>& header,
                           const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += ",";
            s += format_double(r[i]);
        }
        s += "\n";
    }
    const std::string path = out_path(suffix);
    std::ofstream f(path, std::ios::binary);
    f << s;
    if (!f) throw std::runtime_error("cannot write " + path);
    artifacts.push_back({path, sha256_hex(s), s.size()});
}

std::vector<Descriptor> bundled_descriptors(const std::string& dir) {
    std::vector<Descriptor> out;
    if (!fs::is_directory(dir)) return out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(load_descriptor(f.string()));
    return out;
}

namespace {

void print_issues(const DescriptorError& e, const std::string& path, std::ostream& err) {
    for (const auto& i : e.issues())
        err << path << ":" << i.line << ": " << i.field << ": " << i.message << "\n";
}

std::string resolve(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    const fs::path p = fs::path(RYDSIM_DESCRIPTOR_DIR) / (arg + ".json");
    if (fs::exists(p)) return p.string();
    return arg;
}

int default_threads() {
    if (const char* e = std::getenv("RYDSIM_THREADS")) {
        const int n = std::atoi(e);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

int do_run(const std::string& arg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const std::string path = resolve(arg);
    Descriptor d;
    try {
        d = load_descriptor(path);
    } catch (const DescriptorError& e) {
        print_issues(e, path, err);
        return 2;
    }
    fs::create_directories(opt.out_dir);
    kern::set_threads(opt.threads);
    RunContext ctx{d, opt, {}, json::object()};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        registry().at(d.experiment).run(ctx);
    } catch (const ryd::Error& e) {
        err << d.name << ": solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << d.name << ": failure: " << e.what() << "\n";
        return 3;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        const std::string s = ctx.summary.dump(2) + "\n";
        const std::string p = ctx.out_path(".summary.json");
        std::ofstream(p, std::ios::binary) << s;
        ctx.artifacts.push_back({p, sha256_hex(s), s.size()});
    }
    json m;
    m["descriptor"] = d.path;
    m["descriptor_sha256"] = sha256_hex(d.text);
    m["tool_version"] = kToolVersion;
    m["threads"] = opt.threads;
    m["simd"] = kern::backend_name(kern::active_backend());
    m["wall_time_s"] = wall;
    m["budget_seconds"] = d.budget_seconds;
    m["outputs"] = json::array();
    for (const auto& a : ctx.artifacts)
        m["outputs"].push_back({{"path", fs::path(a.path).filename().string()}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    std::ofstream(ctx.out_path(".manifest.json"), std::ios::binary) << m.dump(2) << "\n";
    out << d.name << ": ok (" << std::fixed << std::setprecision(2) << wall << " s, " << ctx.artifacts.size()
        << " artifacts)\n";
    if (wall > d.budget_seconds) err << d.name << ": warning: wall time exceeded declared budget\n";
    return 0;
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"rydsim: large-spin Rydberg simulation experiments"};
    app.require_subcommand(1);
    int threads = default_threads();
    std::string out_dir = "rydsim_out";
    long long budget = 0;
    app.add_option("--threads", threads, "worker threads (env RYDSIM_THREADS)")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", out_dir, "directory for artifacts");
    app.add_option("--budget-override", budget, "ED dimension cap (default 2e7)")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "run a descriptor (path or bundled name)");
    std::string target;
    run->add_option("descriptor", target)->required();
    auto* list = app.add_subcommand("list", "list bundled descriptors");
    auto* val = app.add_subcommand("validate", "validate descriptors");
    std::vector<std::string> targets;
    val->add_option("descriptors", targets)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    if (*list) {
        std::vector<Descriptor> ds;
        try {
            ds = bundled_descriptors();
        } catch (const DescriptorError& e) {
            print_issues(e, RYDSIM_DESCRIPTOR_DIR, err);
            return 2;
        }
        for (const auto& d : ds)
            out << std::left << std::setw(24) << d.name << std::setw(8) << (d.panel.empty() ? "-" : d.panel)
                << std::setw(8) << (d.long_run ? "long" : "desk") << d.description << "\n";
        return 0;
    }
    if (*val) {
        int rc = 0;
        for (const auto& t : targets) {
            const std::string p = resolve(t);
            try {
                const auto d = load_descriptor(p);
                out << d.name << ": valid\n";
            } catch (const DescriptorError& e) {
                print_issues(e, p, err);
                rc = 2;
            }
        }
        return rc;
    }
    RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    if (budget > 0) opt.ed_budget = static_cast<std::size_t>(budget);
    return do_run(target, opt, out, err);
}

}  // namespace ryd::cli
