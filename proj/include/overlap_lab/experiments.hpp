#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "overlap_lab/ensembles.hpp"
#include "overlap_lab/linalg.hpp"
#include "overlap_lab/stats.hpp"

namespace overlap_lab {

enum class OutputFormat { csv, json };

/// Parameters shared by the command-line subcommands. Unset optionals fall
/// back to per-experiment defaults.
struct ExperimentConfig {
    std::string experiment;
    std::optional<EnsembleKind> ensemble;
    std::optional<std::size_t> n;
    std::optional<std::size_t> m;
    std::optional<std::size_t> replicas;
    std::uint64_t seed = 1;
    double alpha = 0.001;
    std::size_t threads = 1;
    std::string out;
    OutputFormat format = OutputFormat::json;
    bool sphere = false;
    double window = 0.8;  ///< bulk window radius for overlap-hist

    /// Throws ParameterError on replicas == 0, alpha outside (0, 1), threads == 0,
    /// n == 0, m < n, or a non-positive window.
    void validate() const;

    /// Keys mirror the field names; unknown keys are rejected.
    static ExperimentConfig from_json(const nlohmann::json& j);
    [[nodiscard]] nlohmann::json to_json() const;
};

EnsembleKind parse_ensemble_tag(std::string_view tag);
std::string_view ensemble_tag(EnsembleKind kind) noexcept;

const std::vector<std::string>& experiment_names();

/// Runs a named verification suite. The report has a top-level "schema": 1,
/// the config, one entry per test under "tests" and an overall "pass".
/// Throws ParameterError for an unknown experiment name.
nlohmann::json run_verify(const ExperimentConfig& config);

struct EigenvalueRow {
    std::size_t replica = 0;
    std::size_t index = 0;
    Complex value;
};

/// Eigenvalues of `replicas` direct draws (default 1) of the configured ensemble.
std::vector<EigenvalueRow> run_sample(const ExperimentConfig& config);

struct OverlapHistRow {
    std::size_t replica = 0;
    Complex lambda;
    double o_scaled = 0.0;  ///< O_ii / N
};

struct OverlapHistResult {
    std::vector<OverlapHistRow> rows;
    std::size_t skipped = 0;  ///< draws rejected as numerically degenerate
    double median = 0.0;
    KsVerdict ks;  ///< against the inverse-gamma_2 law
};

/// Scaled diagonal overlaps of eigenvalues with |z| < window from direct
/// draws. Throws ParameterError if n exceeds max_n and EmptyInput if the
/// window captures nothing.
OverlapHistResult run_overlap_hist(const ExperimentConfig& config, std::size_t max_n = 256);

/// Resolves the configured ensemble; kind and size fall back to the defaults,
/// and a TUE co-dimension falls back to n.
EnsembleSpec resolve_ensemble(const ExperimentConfig& config, EnsembleKind default_kind, std::size_t default_n);

} // namespace overlap_lab
