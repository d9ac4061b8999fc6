// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Criterion 8 invokes the CLI binary
// (path given as argv[1]) twice per seed and compares report bytes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qcdual/cli.hpp"

namespace {

int failures = 0;

void report_line(int id, const std::string& name, bool pass, double seconds, double limit_seconds,
                 const std::string& extra = "") {
    bool in_time = seconds < limit_seconds;
    bool ok = pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s (%.2fs", ok ? "PASS" : "FAIL", id, name.c_str(), seconds);
    if (!in_time) std::printf(", over the %.0fs limit", limit_seconds);
    std::printf(")%s%s\n", extra.empty() ? "" : " ", extra.c_str());
}

template <typename Fn>
void run_criterion(double limit_seconds, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    qcdual::CriterionResult r = fn();
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string extra;
    if (!r.failures.empty()) extra = "- first failure: " + r.failures.front();
    report_line(r.id, r.name, r.pass, seconds, limit_seconds, extra);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// criterion 8: byte-identical report bodies across two CLI runs per seed
void run_determinism(const std::string& cli_path) {
    auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (int seed : {1, 7}) {
        std::string a = "acceptance_verify_a_" + std::to_string(seed) + ".jsonl";
        std::string b = "acceptance_verify_b_" + std::to_string(seed) + ".jsonl";
        for (const auto& out : {a, b}) {
            std::string cmd = cli_path + " verify --seed " + std::to_string(seed) + " --out " + out +
                              " 2> /dev/null";
            int rc = std::system(cmd.c_str());
            if (rc != 0) {
                pass = false;
                detail = "- verify exited with status " + std::to_string(rc);
            }
        }
        std::string body_a = read_file(a), body_b = read_file(b);
        if (body_a.empty() || body_a != body_b) {
            pass = false;
            if (detail.empty()) detail = "- bodies differ for seed " + std::to_string(seed);
        }
        std::remove(a.c_str());
        std::remove(b.c_str());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_line(8, "byte-identical verify reports for seeds {1,7}", pass, seconds, 600.0, detail);
}

} // namespace

int main(int argc, char** argv) {
    const uint64_t seed = 1;
    run_criterion(10.0, [] { return qcdual::criterion_bipolar_calculus(); });
    run_criterion(10.0, [] { return qcdual::criterion_atlas(); });
    run_criterion(10.0, [] { return qcdual::criterion_linearity_extraction(); });
    run_criterion(30.0, [&] { return qcdual::criterion_witness_soundness(seed); });
    run_criterion(30.0, [&] { return qcdual::criterion_two_directions(seed); });
    run_criterion(10.0, [&] { return qcdual::criterion_discontinuous(seed); });
    run_criterion(5.0, [] { return qcdual::criterion_topology_comparison(); });

    if (argc > 1) {
        run_determinism(argv[1]);
    } else {
        std::printf("[FAIL] criterion 8: CLI binary path not supplied\n");
        ++failures;
    }

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
