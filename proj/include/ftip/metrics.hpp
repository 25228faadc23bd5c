#pragma once

// Finite-photon Monte Carlo around the codec: binomial count sampling with
// reproducible per-(trial, basis) RNG streams, distortion and
// fault-tolerance statistics, and parameter sweeps.

#include "ftip/channels.hpp"
#include "ftip/codec.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ftip {

struct NoDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SamplingPlan {
    long long total_photons = 0;
    std::vector<double> allocation;  // fractions per basis; empty = uniform
    long long trials = 1;
    std::uint64_t seed = 0;
    bool exact = false;  // infinite-N limit: decode analytic probabilities

    void validate(std::size_t n_bases) const;
    // n_l = round(fraction * N), each >= 1
    std::vector<long long> per_basis(std::size_t n_bases) const;
};

struct TrialRecord {
    long long index = 0;
    CountVector counts;
    DecodeResult result;
    bool decodable = true;
    double delta_phi = 0;    // phi_tilde - chi * phi_truth
    double total_error = 0;  // phi_tilde - phi_truth
};

struct RunSummary {
    double d_mse = 0;
    double f_t = 0;
    double gamma = 0;
    double mean_phi_tilde = 0;
    double var_phi_tilde = 0;
    long long trials = 0;
    long long decodable = 0;
};

// One binomial draw per basis: N_l ~ Bin(n_l, P_l), generator keyed by
// (seed, trial, basis).
CountVector sample_counts(std::span<const double> probs, const SamplingPlan& plan,
                          long long trial);

// Correction policy for run_trials: when set, chi_hat is estimated per
// trial from the extended-basis counts and converted per the flip kind.
struct FlipCorrection {
    FlipKind kind;
    Ensemble ensemble;  // single pure component
};

// Encode, evolve, sample, decode, `plan.trials` times. delta_phi uses the
// channel's chi when defined (1 otherwise). Undecodable trials are flagged
// and kept in the sequence.
std::vector<TrialRecord> run_trials(const KrausChannel& channel, const Ensemble& ens,
                                    double phi, const BasisSet& bases,
                                    const SamplingPlan& plan,
                                    std::optional<double> chi_hat = std::nullopt,
                                    const std::optional<FlipCorrection>& correction =
                                        std::nullopt);

// E[(phi_tilde - phi)^2] over decodable trials.
double mse(std::span<const TrialRecord> records);

// Fraction of trials with delta_phi^2 < gamma; undecodable trials count as
// failures.
double fault_tolerance(std::span<const TrialRecord> records, double gamma);

// Gamma from a target multiple of the empirical spread of phi_tilde:
// (multiple * stddev)^2.
double gamma_from_spread(std::span<const TrialRecord> records, double multiple);

RunSummary summarize(std::span<const TrialRecord> records, double gamma);

struct SweepPoint {
    long long total_photons = 0;
    double epsilon = 0;
    double channel_param = 0;
    double gamma = 0;
};

struct SweepRow {
    SweepPoint point;
    RunSummary summary;
    std::string error;  // nonempty when this point failed
};

struct SweepGrid {
    std::vector<long long> photon_counts;
    std::vector<double> epsilons;
    std::vector<double> channel_params;
    std::vector<double> gammas;
};

// Cartesian product of the grid axes; per-point failures are recorded in
// the row and the sweep continues. Deterministic given plan.seed.
std::vector<SweepRow> sweep(const std::function<KrausChannel(double)>& channel_factory,
                            const Ensemble& ens, double phi, double axis,
                            const SamplingPlan& base_plan, const SweepGrid& grid);

}  // namespace ftip
