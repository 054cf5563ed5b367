#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sel/random.hpp"
#include "sel/rmt.hpp"

// Bessel, Bessel-OU and Dyson eigenvalue diffusions.

namespace sel {

struct TrajectoryState {
    double t = 0.0;
    std::vector<double> positions;
};

struct SdeConfig {
    double dt_base = 1e-3;
    double dt_min = 1e-14;
    std::uint64_t seed = 0;
    bool adaptive = true;     // shrink dt near singularities and halve it on a rejected move
    int max_refine = 20;      // drift-based shrinking stops at dt_base / 2^max_refine
    double noise_scale = 1.0; // 0 integrates the drift flow alone

    void validate() const;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t ordering_violations = 0; // accepted states that are not strictly ordered
};

/// Drift of dR = ((n-1)/(2R)) dt + dW.
double bessel_drift(int n, double r);
/// Drift of dR = ((n-1)/(2R) - R) dt + dW.
double bessel_ou_drift(int n, double r);
/// V(r) = (r^2 - (n-1) ln r) / 2, whose negative gradient is the B-OU drift.
double bessel_ou_potential(int n, double r);

/// One Euler-Maruyama step of length <= dt_base. A proposal at or below zero
/// is discarded and retried with half the step; Errc::step_floor below dt_min.
TrajectoryState bessel_step(int n, const TrajectoryState& state, const SdeConfig& cfg, Stream& stream,
                            StepStats* stats = nullptr);
TrajectoryState bessel_ou_step(int n, const TrajectoryState& state, const SdeConfig& cfg, Stream& stream,
                               StepStats* stats = nullptr);

/// Transition density p_t(r_from, r_to) of the Bessel-OU process, evaluated in log space.
double bessel_ou_transition_pdf(int n, double r_from, double r_to, double t);
double bessel_ou_transition_logpdf(int n, double r_from, double r_to, double t);

/// -(beta/(2 a^2)) l_j + (beta/2) sum_{i != j} 1/(l_j - l_i).
std::vector<double> dyson_drift(const EnsembleSpec& spec, const std::vector<double>& lambdas);

/// Euler-Maruyama step; a proposal that breaks strict ordering is rejected as
/// a whole and retried with half the step.
TrajectoryState dyson_step(const EnsembleSpec& spec, const TrajectoryState& state, const SdeConfig& cfg,
                           Stream& stream, StepStats* stats = nullptr);

enum class ProcessKind { bessel, bessel_ou, dyson };
ProcessKind process_from_string(const std::string& name);
std::string to_string(ProcessKind kind);

struct SimulationRequest {
    ProcessKind kind = ProcessKind::bessel_ou;
    int n = 2;
    double t_final = 1.0;
    std::size_t paths = 0;
    std::vector<double> snapshot_times; // t_final is always recorded last
    std::vector<double> initial;        // empty: r = 1, or equispaced on [-1, 1] for dyson
    int dyson_index = 1;
    double scale2 = 0.0;                // 0: a^2 = beta n
};

struct Snapshot {
    double t = 0.0;
    std::vector<std::vector<double>> positions; // [path][coordinate]
};

struct SimulationBundle {
    std::vector<Snapshot> snapshots;
    StepStats stats;
};

/// Runs independent paths, path p drawing from stream (seed, p). Step errors
/// are rethrown with the path index in the message.
SimulationBundle simulate(const SimulationRequest& request, const SdeConfig& cfg);

}  // namespace sel
