#include "ftip/metrics.hpp"

#include "ftip/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ftip {

void SamplingPlan::validate(std::size_t n_bases) const {
    if (total_photons <= 0 && !exact) {
        throw UsageError("sampling plan: total_photons must be positive");
    }
    if (trials <= 0) {
        throw UsageError("sampling plan: trials must be positive");
    }
    if (!allocation.empty()) {
        if (allocation.size() != n_bases) {
            throw UsageError("sampling plan: allocation size does not match basis count");
        }
        double total = 0;
        for (double f : allocation) {
            if (f <= 0) {
                throw UsageError("sampling plan: allocation fractions must be positive");
            }
            total += f;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw UsageError("sampling plan: allocation must sum to 1");
        }
    }
}

std::vector<long long> SamplingPlan::per_basis(std::size_t n_bases) const {
    validate(n_bases);
    std::vector<long long> out(n_bases);
    for (std::size_t l = 0; l < n_bases; ++l) {
        const double f = allocation.empty() ? 1.0 / static_cast<double>(n_bases)
                                            : allocation[l];
        out[l] = std::max<long long>(1, std::llround(f * static_cast<double>(total_photons)));
    }
    return out;
}

CountVector sample_counts(std::span<const double> probs, const SamplingPlan& plan,
                          long long trial) {
    CountVector cv;
    cv.allocations = plan.per_basis(probs.size());
    cv.counts.resize(probs.size());
    for (std::size_t l = 0; l < probs.size(); ++l) {
        const double p = probs[l];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw UsageError("sample_counts: probability out of [0,1]");
        }
        CounterRng rng(plan.seed, static_cast<std::uint64_t>(trial),
                       static_cast<std::uint64_t>(l));
        if (p <= 0.0) {
            cv.counts[l] = 0;
        } else if (p >= 1.0) {
            cv.counts[l] = cv.allocations[l];
        } else {
            std::binomial_distribution<long long> bin(cv.allocations[l], p);
            cv.counts[l] = bin(rng);
        }
    }
    return cv;
}

std::vector<TrialRecord> run_trials(const KrausChannel& channel, const Ensemble& ens,
                                    double phi, const BasisSet& bases,
                                    const SamplingPlan& plan,
                                    std::optional<double> chi_hat,
                                    const std::optional<FlipCorrection>& correction) {
    if (correction && !bases.extended) {
        throw UsageError("run_trials: flip correction requires extended bases");
    }
    const DensityState evolved = apply(channel, encode(ens, phi));
    const std::vector<double> probs = probabilities(evolved, bases);

    const NoiseParams np = noise_params_lenient(channel);
    const double chi_truth = std::isnan(np.chi) ? 1.0 : np.chi;

    std::vector<TrialRecord> records;
    records.reserve(static_cast<std::size_t>(plan.trials));
    for (long long trial = 0; trial < plan.trials; ++trial) {
        TrialRecord rec;
        rec.index = trial;
        try {
            std::optional<double> chi = chi_hat;
            if (plan.exact) {
                if (correction) {
                    chi = flip_correction_chi(
                        estimate_chi_from_extended(probs[4], probs[5], correction->ensemble),
                        correction->kind);
                }
                rec.result = decode(std::span<const double>(probs), bases, chi);
            } else {
                rec.counts = sample_counts(probs, plan, trial);
                if (correction) {
                    chi = flip_correction_chi(
                        estimate_chi_from_extended(rec.counts, correction->ensemble),
                        correction->kind);
                }
                rec.result = decode(rec.counts, bases, chi);
            }
            rec.delta_phi = rec.result.phi_tilde - chi_truth * phi;
            rec.total_error = rec.result.phi_tilde - phi;
        } catch (const UndecodableSampleError&) {
            rec.decodable = false;
        } catch (const DegenerateChannelError&) {
            rec.decodable = false;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

double mse(std::span<const TrialRecord> records) {
    double sum = 0;
    long long n = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable) {
            sum += r.total_error * r.total_error;
            ++n;
        }
    }
    if (n == 0) {
        throw NoDataError("mse: no decodable trials");
    }
    return sum / static_cast<double>(n);
}

double fault_tolerance(std::span<const TrialRecord> records, double gamma) {
    if (!(gamma > 0)) {
        throw UsageError("fault_tolerance: gamma must be positive");
    }
    if (records.empty()) {
        throw NoDataError("fault_tolerance: no trials");
    }
    long long pass = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable && r.delta_phi * r.delta_phi < gamma) {
            ++pass;
        }
    }
    return static_cast<double>(pass) / static_cast<double>(records.size());
}

double gamma_from_spread(std::span<const TrialRecord> records, double multiple) {
    double mean = 0;
    long long n = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable) {
            mean += r.result.phi_tilde;
            ++n;
        }
    }
    if (n < 2) {
        throw NoDataError("gamma_from_spread: need at least two decodable trials");
    }
    mean /= static_cast<double>(n);
    double var = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable) {
            const double d = r.result.phi_tilde - mean;
            var += d * d;
        }
    }
    var /= static_cast<double>(n - 1);
    const double g = multiple * multiple * var;
    return g > 0 ? g : std::numeric_limits<double>::min();
}

RunSummary summarize(std::span<const TrialRecord> records, double gamma) {
    RunSummary s;
    s.gamma = gamma;
    s.trials = static_cast<long long>(records.size());
    double mean = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable) {
            mean += r.result.phi_tilde;
            ++s.decodable;
        }
    }
    if (s.decodable == 0) {
        throw NoDataError("summarize: no decodable trials");
    }
    mean /= static_cast<double>(s.decodable);
    double var = 0;
    for (const TrialRecord& r : records) {
        if (r.decodable) {
            const double d = r.result.phi_tilde - mean;
            var += d * d;
        }
    }
    s.mean_phi_tilde = mean;
    s.var_phi_tilde = s.decodable > 1 ? var / static_cast<double>(s.decodable - 1) : 0.0;
    s.d_mse = mse(records);
    s.f_t = fault_tolerance(records, gamma);
    return s;
}

std::vector<SweepRow> sweep(const std::function<KrausChannel(double)>& channel_factory,
                            const Ensemble& ens, double phi, double axis,
                            const SamplingPlan& base_plan, const SweepGrid& grid) {
    if (grid.photon_counts.empty() || grid.epsilons.empty() ||
        grid.channel_params.empty() || grid.gammas.empty()) {
        throw UsageError("sweep: every grid axis must be nonempty");
    }
    std::vector<SweepRow> rows;
    rows.reserve(grid.photon_counts.size() * grid.epsilons.size() *
                 grid.channel_params.size() * grid.gammas.size());
    for (long long n : grid.photon_counts) {
        for (double eps : grid.epsilons) {
            for (double param : grid.channel_params) {
                for (double gamma : grid.gammas) {
                    SweepRow row;
                    row.point = SweepPoint{n, eps, param, gamma};
                    try {
                        SamplingPlan plan = base_plan;
                        plan.total_photons = n;
                        const BasisSet bases = make_bases(eps, axis);
                        const KrausChannel channel = channel_factory(param);
                        const auto records = run_trials(channel, ens, phi, bases, plan);
                        row.summary = summarize(records, gamma);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

}  // namespace ftip
