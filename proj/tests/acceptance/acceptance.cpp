// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. The seed is fixed at 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "overlap_lab/conditional.hpp"
#include "overlap_lab/experiments.hpp"
#include "overlap_lab/formulas.hpp"

namespace {

using namespace overlap_lab;
using nlohmann::json;

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

ExperimentConfig config_for(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    c.seed = kSeed;
    return c;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

// Overall pass plus the names of failing tests.
Outcome from_report(const json& report) {
    Outcome o;
    o.pass = report.at("pass").get<bool>();
    std::ostringstream os;
    os << report.at("tests").size() << " tests";
    for (const auto& t : report.at("tests")) {
        if (!t.at("pass").get<bool>()) os << "; failed " << t.at("name").get<std::string>();
    }
    o.detail = os.str();
    return o;
}

Outcome verify(const std::string& experiment) { return from_report(run_verify(config_for(experiment))); }

Outcome limit_law() {
    const json report = run_verify(config_for("limit-law"));
    Outcome o = from_report(report);
    std::ostringstream os;
    for (const auto& t : report.at("tests")) {
        os << t.at("name").get<std::string>() << " D=";
        const auto& d = t.at("statistics");
        for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << fmt(d[i].get<double>());
        os << "; ";
    }
    o.detail = os.str() + o.detail;
    return o;
}

// Exact telescoping of the origin factor means, then per-factor Monte Carlo.
Outcome origin_factors() {
    bool exact = true;
    for (std::size_t n = 2; n <= 12; ++n) {
        for (const auto& spec : {EnsembleSpec::ginibre(n), EnsembleSpec::spherical(n),
                                 EnsembleSpec::truncated_unitary(n, n), EnsembleSpec::truncated_unitary(n, 2 * n)}) {
            Rational prod = Rational::of(1, 1);
            for (std::size_t k = 2; k <= n; ++k) prod = prod * origin_factor_mean(spec, k);
            exact = exact && prod == Rational::of(static_cast<std::int64_t>(n), 1);
        }
    }
    bool mc = true;
    double worst_z = 0.0;
    const std::size_t draws = 200000;
    std::uint64_t stream = 0;
    for (const auto& spec : {EnsembleSpec::spherical(12), EnsembleSpec::truncated_unitary(12, 12)}) {
        for (std::size_t k = 3; k <= 10; ++k) {
            RngStream rng(kSeed, (std::uint64_t{0x7A} << 40) | stream++);
            MomentAccumulator acc;
            for (std::size_t i = 0; i < draws; ++i) acc.push(origin_factor_sample(spec, k, rng));
            const double target = static_cast<double>(k) / static_cast<double>(k - 1);
            const double z = std::abs(acc.mean() - target) / acc.standard_error();
            worst_z = std::max(worst_z, z);
            mc = mc && z <= 4.0;
        }
    }
    return {exact && mc,
            std::string("telescoping ") + (exact ? "exact" : "MISMATCH") + "; worst factor z=" + fmt(worst_z)};
}

// Byte-identical reports for repeated single-thread runs, identical test
// statistics at 8 threads.
bool reproducible(ExperimentConfig c) {
    c.threads = 1;
    const std::string a = run_verify(c).dump();
    const std::string b = run_verify(c).dump();
    c.threads = 8;
    return a == b && run_verify(c).at("tests") == json::parse(a).at("tests");
}

Outcome reproducibility() {
    std::vector<std::string> mismatched;
    for (const auto& name : experiment_names()) {
        ExperimentConfig c = config_for(name);
        c.replicas = 200;
        if (!reproducible(c)) mismatched.push_back(name);
    }
    if (!reproducible(config_for("quenched-ov11"))) mismatched.push_back("quenched-ov11 (full size)");
    std::string detail = std::to_string(experiment_names().size() + 1) + " suites at 1 and 8 threads";
    for (const auto& m : mismatched) detail += "; mismatch " + m;
    return {mismatched.empty(), detail};
}

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Schur engine residuals", 30, [] { return verify("schur"); }},
        {2, "overlap identities", 60, [] { return verify("identities"); }},
        {3, "quenched O_11 vs conditional draws", 120, [] { return verify("quenched-ov11"); }},
        {4, "distributional decomposition KS", 120, [] { return verify("decomposition-ks"); }},
        {5, "quenched O_12 vs conditional draws", 300, [] { return verify("quenched-ov12"); }},
        {6, "mixed trace, TUE discrepancy reported", 120, [] { return verify("quenched-trace"); }},
        {7, "origin mean and factors", 60, origin_factors},
        {8, "inverse-gamma_2 limit law", 120, limit_law},
        {9, "Kostlan radii", 300, [] { return verify("kostlan"); }},
        {10, "integral identities", 120, [] { return verify("integrals"); }},
        {11, "spherical invariance probe", 180, [] { return verify("invariance"); }},
        {12, "reproducibility", 600, reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << fmt(secs) << " s of "
                  << c.budget_seconds << " s" << (in_time ? "" : ", over budget") << "): " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? std::string("ALL CRITERIA PASS") : std::to_string(failures) + " CRITERIA FAILED")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
