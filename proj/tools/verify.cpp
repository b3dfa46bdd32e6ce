#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qrucible/harness.hpp"

using namespace qrucible;

namespace {

std::filesystem::path default_suite_dir() {
    if (const char* env = std::getenv("QRUCIBLE_SUITE_DIR"); env && *env) return env;
    return QRUCIBLE_SUITE_DIR;
}

void print_report(const VerifyReport& r) {
    std::printf("%-4s %-44s", to_string(r.status), r.name.c_str());
    if (r.status == Status::Pass) {
        std::printf(" to q^(%s)", SeriesContext(r.denom, r.proven_order).unscaled(r.proven_order).str().c_str());
    } else if (r.first_mismatch) {
        const Mismatch& m = *r.first_mismatch;
        std::printf(" first mismatch at q^(%s)", m.q.str().c_str());
        if (m.tdeg || m.zdeg) std::printf(" t^%d z^%d", m.tdeg, m.zdeg);
        std::printf(": lhs %s, rhs %s", m.lhs.c_str(), m.rhs.c_str());
    } else {
        std::printf(" %s", r.reason.c_str());
    }
    std::printf("  [%.0f ms]\n", r.elapsed_ms);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify q-series identities by exact coefficient comparison"};
    std::vector<std::string> suites;
    std::vector<std::string> filters;
    std::optional<long> order, denom;
    std::string json_path;
    bool strict = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--suite", suites, "Suite file (.qid) or directory; repeatable")->check(CLI::ExistingPath);
    app.add_option("--filter", filters, "Glob on case name, identity name or group; repeatable");
    app.add_option("--order", order, "Override the order, in whole powers of q")->check(CLI::PositiveNumber);
    app.add_option("--denom", denom, "Override the exponent denominator")->check(CLI::PositiveNumber);
    app.add_option("--json", json_path, "Write the reports as JSON");
    app.add_flag("--strict", strict, "Treat every SKIP as a failure");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::vector<dsl::IdentityCase> all;
    try {
        if (suites.empty()) suites.push_back(default_suite_dir().string());
        for (const auto& s : suites) {
            auto v = std::filesystem::is_directory(s) ? dsl::load_suite_dir(s) : dsl::load_suite_file(s);
            all.insert(all.end(), v.begin(), v.end());
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::vector<dsl::IdentityCase> cases;
    for (auto& c : all)
        if (selected(c, filters)) cases.push_back(std::move(c));
    if (cases.empty()) {
        std::fprintf(stderr, "error: no cases selected\n");
        return 2;
    }

    VerifyOptions opts{order, denom};
    auto reports = run_cases(cases, opts, jobs);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : reports) {
        print_report(r);
        ++counts[static_cast<int>(r.status)];
    }
    std::printf("%zu cases: %zu PASS, %zu FAIL, %zu SKIP\n", reports.size(), counts[0], counts[1], counts[2]);

    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::fprintf(stderr, "error: cannot write %s\n", json_path.c_str());
            return 2;
        }
        out << to_json(reports).dump(2) << "\n";
    }
    return suite_ok(cases, reports, strict) ? 0 : 1;
}
