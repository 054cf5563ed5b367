#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sel/io.hpp"

// Named experiments: each turns a JSON parameter object and a seed into a set
// of text artifacts plus a summary.

namespace sel {

struct Artifact {
    std::string name;
    std::string content;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0; // wall time; never written to artifacts
};

struct ExperimentConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    io::Format format = io::Format::csv;
};

struct ExperimentResult {
    std::string command;
    std::uint64_t seed = 0;
    io::Format format = io::Format::csv;
    std::vector<Artifact> artifacts; // summary.json last
    nlohmann::json summary;
    std::vector<CriterionResult> criteria;
    double seconds = 0.0;

    /// False when any criterion failed.
    bool passed() const;
    /// {"command", "seed", "format", "artifacts": [{"name", "bytes", "sha256"}]}
    std::string manifest() const;
};

std::vector<std::string> experiment_commands();

/// Throws sel::Error; unknown parameter keys are validation errors.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Criteria 1-11 of the acceptance suite, in order.
std::vector<CriterionResult> run_acceptance_criteria(std::uint64_t seed);

}  // namespace sel
