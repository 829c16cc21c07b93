// overlap-lab: sample | overlap-hist | verify
//
// Exit codes: 0 success, 1 statistical failure (verify), 2 usage or I/O
// error, 3 numerical error.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "overlap_lab/errors.hpp"
#include "overlap_lab/experiments.hpp"

namespace {

using namespace overlap_lab;
using nlohmann::json;

constexpr int kExitStatistical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

// Writes to the path, or to stdout when the path is empty.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close(const std::string& path) {
        stream().flush();
        if (!stream()) throw IoError("write to '" + (path.empty() ? std::string("stdout") : path) + "' failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct Options {
    ExperimentConfig config;
    std::string ensemble;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    std::string format;
    std::size_t max_n = 256;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--ensemble", o.ensemble, "Ensemble")->check(CLI::IsMember({"cge", "sph", "tue"}));
    cmd->add_option("--n", o.n, "Matrix size")->check(CLI::PositiveNumber);
    cmd->add_option("--m", o.m, "TUE truncation co-dimension (m >= n)")->check(CLI::PositiveNumber);
    cmd->add_option("--replicas", o.replicas, "Number of independent draws")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "64-bit seed (fallback: $OVERLAP_LAB_SEED, then 1)");
    cmd->add_option("--alpha", o.config.alpha, "KS significance level")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threads", o.config.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.config.out, "Output path (default: stdout)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void finalize(CLI::App* cmd, Options& o, OutputFormat default_format) {
    ExperimentConfig& c = o.config;
    if (!o.ensemble.empty()) c.ensemble = parse_ensemble_tag(o.ensemble);
    if (cmd->count("--n") > 0) c.n = o.n;
    if (cmd->count("--m") > 0) c.m = o.m;
    if (cmd->count("--replicas") > 0) c.replicas = o.replicas;
    if (cmd->count("--seed") > 0) {
        c.seed = o.seed;
    } else if (const char* env = std::getenv("OVERLAP_LAB_SEED"); env != nullptr && *env != '\0') {
        const std::string s(env);
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw ParameterError("OVERLAP_LAB_SEED is not an unsigned 64-bit integer: '" + s + "'");
        }
        c.seed = v;
    }
    c.format = o.format.empty() ? default_format : (o.format == "csv" ? OutputFormat::csv : OutputFormat::json);
    c.validate();
}

int cmd_sample(const ExperimentConfig& c) {
    const auto rows = run_sample(c);
    Sink sink(c.out);
    auto& os = sink.stream();
    if (c.format == OutputFormat::csv) {
        os << "replica,index,re,im" << (c.sphere ? ",sx,sy,sz" : "") << '\n';
        for (const auto& r : rows) {
            os << r.replica << ',' << r.index << ',' << fmt(r.value.real()) << ',' << fmt(r.value.imag());
            if (c.sphere) {
                const SpherePoint p = stereo_project(r.value);
                os << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.z);
            }
            os << '\n';
        }
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            json row = {{"replica", r.replica}, {"index", r.index}, {"re", r.value.real()}, {"im", r.value.imag()}};
            if (c.sphere) {
                const SpherePoint p = stereo_project(r.value);
                row["sx"] = p.x;
                row["sy"] = p.y;
                row["sz"] = p.z;
            }
            arr.push_back(std::move(row));
        }
        os << json{{"schema", 1}, {"rows", std::move(arr)}}.dump(2) << '\n';
    }
    sink.close(c.out);
    return 0;
}

int cmd_overlap_hist(const ExperimentConfig& c, std::size_t max_n) {
    const OverlapHistResult res = run_overlap_hist(c, max_n);
    const json summary = {{"schema", 1},
                          {"rows", res.rows.size()},
                          {"skipped_degenerate", res.skipped},
                          {"window", c.window},
                          {"median", res.median},
                          {"ks_inverse_gamma2",
                           {{"statistic", res.ks.statistic},
                            {"n", res.ks.n},
                            {"alpha", res.ks.alpha},
                            {"critical", res.ks.critical},
                            {"pass", res.ks.pass}}}};
    Sink sink(c.out);
    auto& os = sink.stream();
    if (c.format == OutputFormat::csv) {
        os << "replica,re,im,o_scaled\n";
        for (const auto& r : res.rows) {
            os << r.replica << ',' << fmt(r.lambda.real()) << ',' << fmt(r.lambda.imag()) << ',' << fmt(r.o_scaled)
               << '\n';
        }
        sink.close(c.out);
        if (c.out.empty()) {
            std::cerr << summary.dump(2) << '\n';
        } else {
            const std::string path = c.out + ".summary.json";
            std::ofstream f(path, std::ios::binary);
            f << summary.dump(2) << '\n';
            if (!f) throw IoError("write to '" + path + "' failed");
        }
    } else {
        json rows = json::array();
        for (const auto& r : res.rows) {
            rows.push_back({{"replica", r.replica}, {"re", r.lambda.real()}, {"im", r.lambda.imag()}, {"o_scaled", r.o_scaled}});
        }
        json doc = summary;
        doc["data"] = std::move(rows);
        os << doc.dump(2) << '\n';
        sink.close(c.out);
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& c) {
    const json report = run_verify(c);
    Sink sink(c.out);
    auto& os = sink.stream();
    if (c.format == OutputFormat::csv) {
        os << "name,pass\n";
        for (const auto& t : report.at("tests")) os << t.at("name").get<std::string>() << ',' << t.at("pass") << '\n';
    } else {
        os << report.dump(2) << '\n';
    }
    sink.close(c.out);
    for (const auto& t : report.at("tests")) {
        std::cerr << (t.at("pass").get<bool>() ? "PASS " : "FAIL ") << t.at("name").get<std::string>() << '\n';
    }
    return report.at("pass").get<bool>() ? 0 : kExitStatistical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue and eigenvector-overlap experiments for non-Hermitian random matrices"};
    app.require_subcommand(1);

    Options sample_opts;
    auto* sample = app.add_subcommand("sample", "Write eigenvalues of direct matrix draws");
    add_common(sample, sample_opts);
    sample->add_flag("--sphere", sample_opts.config.sphere, "Add stereographic sphere coordinates");

    Options hist_opts;
    auto* hist = app.add_subcommand("overlap-hist", "Write scaled diagonal overlaps O_ii/N inside a window");
    add_common(hist, hist_opts);
    hist->add_option("--window", hist_opts.config.window, "Keep eigenvalues with |z| below this radius");
    hist->add_option("--max-n", hist_opts.max_n, "Override the matrix-size guard");

    Options verify_opts;
    auto* verify = app.add_subcommand("verify", "Run a verification suite and write a JSON report");
    add_common(verify, verify_opts);
    verify->add_option("--experiment", verify_opts.config.experiment, "Suite name")
        ->required()
        ->check(CLI::IsMember(experiment_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sample) {
            finalize(sample, sample_opts, OutputFormat::csv);
            return cmd_sample(sample_opts.config);
        }
        if (*hist) {
            finalize(hist, hist_opts, OutputFormat::csv);
            return cmd_overlap_hist(hist_opts.config, hist_opts.max_n);
        }
        finalize(verify, verify_opts, OutputFormat::json);
        return cmd_verify(verify_opts.config);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitUsage;
    }
}
