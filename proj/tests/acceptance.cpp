// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. argv[1] is the path to
// the CLI binary (used by the determinism criterion).

#include "ftip/epr.hpp"
#include "ftip/io.hpp"
#include "ftip/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ftip;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

std::vector<double> exact_probs(const KrausChannel& ch, const Ensemble& ens, double phi,
                                const BasisSet& bases) {
    return probabilities(apply(ch, encode(ens, phi)), bases);
}

// dephasing-class catalog channels at a nominal strength x in (0,1)
std::vector<KrausChannel> dephasing_catalog(double x) {
    return {make_phase_damping(x), make_phase_flip(x), make_amplitude_damping(x),
            make_depolarizing(x), make_rtn(1.0, 0.7, 2.0 * x)};
}

bool chi_cancellation(std::string& detail) {
    const double eps = 0.05;
    const BasisSet bases = make_bases(eps, kPi / 2);
    double worst = 0;
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (const KrausChannel& ch : dephasing_catalog(x)) {
            if (ch.name == "phase_flip" && x == 0.5) {
                // B1 = 1 - 2p = 0: the channel erases all coherence, no
                // decoder input survives; excluded as undecodable
                continue;
            }
            for (double upsilon : {0.3, 0.866, 1.0}) {
                const Ensemble ens = Ensemble::single(std::asin(upsilon));
                for (double phi : {-0.05, -0.01, -0.001, 0.001, 0.01, 0.05}) {
                    const auto p = exact_probs(ch, ens, phi, bases);
                    const double got =
                        decode(std::span<const double>(p), bases).phi_tilde;
                    worst = std::max(worst, std::abs(got - phi));
                }
            }
        }
    }
    std::ostringstream os;
    os << "max |phi_tilde - phi| = " << worst << " (< 1e-12)";
    detail = os.str();
    return worst < 1e-12;
}

double decode_slope(const KrausChannel& ch, double eps) {
    const Ensemble ens = Ensemble::single(kPi / 2);
    const BasisSet bases = make_bases(eps, kPi / 2);
    const double h = 1e-4;
    auto ratio = [&](double phi) {
        const auto p = exact_probs(ch, ens, phi, bases);
        return compose_xi(std::span<const double>(p)) * std::tan(eps);
    };
    return (ratio(h) - ratio(-h)) / (2 * h);
}

bool noise_parameter_table(std::string& detail) {
    double worst_param = 0;
    double worst_slope = 0;
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        struct Row {
            KrausChannel ch;
            double b1, b2;
            bool chi_defined;
            double chi;
        };
        const std::vector<Row> rows{
            {make_bit_flip(p), 1 - p, p, true, 1 - 2 * p},
            {make_bit_phase_flip(p), 1 - p, -p, std::abs(1 - 2 * p) > 1e-12,
             1.0 / (1 - 2 * p)},
            {make_phase_flip(p), 1 - 2 * p, 0, std::abs(1 - 2 * p) > 1e-12, 1.0},
            {make_amplitude_damping(p), std::sqrt(1 - p), 0, true, 1.0},
            {make_depolarizing(p), 1 - p, 0, true, 1.0},
        };
        for (const Row& row : rows) {
            const NoiseParams np = noise_params_lenient(row.ch);
            worst_param = std::max({worst_param, std::abs(np.b1 - row.b1),
                                    std::abs(np.b2 - row.b2)});
            if (!row.chi_defined) {
                if (!std::isnan(np.chi)) {
                    detail = row.ch.name + ": expected degenerate chi";
                    return false;
                }
                continue;
            }
            worst_param = std::max(worst_param, std::abs(np.chi - row.chi));
            // cross-check against the finite-difference decode slope; skip
            // channels whose exact-probability contrast vanishes (B1+B2 = 0)
            if (std::abs(np.chi2) > 1e-12) {
                worst_slope =
                    std::max(worst_slope, std::abs(decode_slope(row.ch, 0.05) - np.chi));
            }
        }
    }
    std::ostringstream os;
    os << "max closed-form deviation = " << worst_param
       << " (< 1e-12), max slope deviation = " << worst_slope << " (< 1e-6)";
    detail = os.str();
    return worst_param < 1e-12 && worst_slope < 1e-6;
}

KrausChannel remix_once(const KrausChannel& ch, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    const Eigen::Index k = static_cast<Eigen::Index>(ch.operators.size());
    const Eigen::Index m = std::min<Eigen::Index>(k + 1, ch.dim * ch.dim);
    Operator g(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            g(i, j) = Complex(n(rng), n(rng));
        }
    }
    const Operator q = Eigen::HouseholderQR<Operator>(g).householderQ();
    KrausChannel out{ch.name, ch.dim, {}};
    for (Eigen::Index i = 0; i < m; ++i) {
        Operator f = Operator::Zero(ch.dim, ch.dim);
        for (Eigen::Index j = 0; j < k; ++j) {
            f += q(i, j) * ch.operators[static_cast<std::size_t>(j)];
        }
        out.operators.push_back(f);
    }
    return out;
}

bool kraus_remix_invariance(std::string& detail) {
    double worst = 0;
    std::uint64_t seed = 1000;
    for (double x : {0.2, 0.5, 0.8}) {
        std::vector<KrausChannel> channels = dephasing_catalog(x);
        channels.push_back(make_bit_flip(x));
        channels.push_back(make_bit_phase_flip(x));
        for (const KrausChannel& ch : channels) {
            KrausChannel mixed = ch;
            for (int round = 0; round < 3; ++round) {
                mixed = remix_once(mixed, seed++);
            }
            const NoiseParams a = noise_params_lenient(ch);
            const NoiseParams b = noise_params_lenient(mixed);
            worst = std::max({worst, std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2),
                              std::abs(a.a3 - b.a3), std::abs(a.a4 - b.a4),
                              std::abs(a.b1 - b.b1), std::abs(a.b2 - b.b2),
                              std::abs(a.c1 - b.c1), std::abs(a.c2 - b.c2)});
        }
    }
    std::ostringstream os;
    os << "max parameter drift = " << worst << " (< 1e-10)";
    detail = os.str();
    return worst < 1e-10;
}

bool flip_correction(std::string& detail) {
    const Ensemble ens = Ensemble::single(kPi / 3);
    const BasisSet bases = make_bases(0.05, kPi / 2, true);
    double worst = 0;
    for (double p : {0.1, 0.2, 0.3}) {
        for (double phi : {-0.03, 0.01, 0.05}) {
            {
                const auto probs = exact_probs(make_bit_flip(p), ens, phi, bases);
                const double chi = flip_correction_chi(
                    estimate_chi_from_extended(probs[4], probs[5], ens),
                    FlipKind::BitFlip);
                const double got =
                    decode(std::span<const double>(probs), bases, chi).phi_tilde;
                worst = std::max(worst, std::abs(got - phi));
            }
            {
                const auto probs = exact_probs(make_bit_phase_flip(p), ens, phi, bases);
                const double chi = flip_correction_chi(
                    estimate_chi_from_extended(probs[4], probs[5], ens),
                    FlipKind::BitPhaseFlip);
                const double got =
                    decode(std::span<const double>(probs), bases, chi).phi_tilde;
                worst = std::max(worst, std::abs(got - phi));
            }
        }
    }
    std::ostringstream os;
    os << "max corrected error = " << worst << " (< 1e-10)";
    detail = os.str();
    return worst < 1e-10;
}

double epr_bruteforce_projection(const DensityState& rho, const Ket& phi) {
    Complex acc(0, 0);
    for (Eigen::Index m = 0; m < 4; ++m) {
        for (Eigen::Index n = 0; n < 4; ++n) {
            acc += std::conj(phi(m)) * rho.matrix(m, n) * phi(n);
        }
    }
    return acc.real();
}

bool epr_multiplicative_law(std::string& detail) {
    const CoincidenceBasisSet cbs = make_coincidence_bases(0.05, kPi / 2);
    const EprEnsemble ens = Ensemble::single(kPi / 2);
    double worst_slope = 0;
    double worst_oracle = 0;
    std::vector<KrausChannel> arms = dephasing_catalog(0.4);
    arms.push_back(make_bit_flip(0.2));
    arms.push_back(make_bit_phase_flip(0.15));
    for (const KrausChannel& arm : arms) {
        const NoiseParams np = noise_params_lenient(arm);
        if (std::abs(np.b1 + np.b2) < 1e-12) {
            continue;
        }
        const double expected =
            (np.b1 * np.b1 - np.b2 * np.b2) / ((np.b1 + np.b2) * (np.b1 + np.b2));
        const KrausChannel pair = tensor_channel(arm, arm);
        const double h = 1e-5;
        auto ratio = [&](double phi) {
            const DensityState rho = apply(pair, encode_epr(ens, phi));
            const auto p = coincidence_probabilities(rho, cbs);
            for (std::size_t l = 0; l < 4; ++l) {
                worst_oracle = std::max(
                    worst_oracle,
                    std::abs(p[l] - epr_bruteforce_projection(rho, cbs.kets[l])));
            }
            return compose_xi(std::span<const double>(p)) * std::tan(cbs.epsilon);
        };
        const double slope = (ratio(h) - ratio(-h)) / (2 * h);
        worst_slope = std::max(worst_slope, std::abs(slope - expected));
    }
    std::ostringstream os;
    os << "max slope deviation = " << worst_slope
       << " (< 1e-8), max oracle deviation = " << worst_oracle << " (< 1e-10)";
    detail = os.str();
    return worst_slope < 1e-8 && worst_oracle < 1e-10;
}

struct ScalingData {
    std::vector<long long> photon_counts;
    std::vector<std::vector<TrialRecord>> records;
};

ScalingData run_scaling() {
    ScalingData data;
    data.photon_counts = {1000, 10000, 100000, 1000000, 10000000};
    const BasisSet bases = make_bases(0.05, kPi / 2);
    const Ensemble ens = Ensemble::single(kPi / 2);
    const KrausChannel ch = make_phase_damping(0.5);
    for (long long n : data.photon_counts) {
        SamplingPlan plan;
        plan.total_photons = n;
        plan.trials = 10000;
        plan.seed = 20260823;
        data.records.push_back(run_trials(ch, ens, 0.01, bases, plan));
    }
    return data;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

bool shot_noise_scaling(const ScalingData& data, std::string& detail) {
    // least-squares slope of log10 d_mse vs log10 N over the full grid
    std::vector<double> xs, ys, scaled;
    for (std::size_t i = 0; i < data.photon_counts.size(); ++i) {
        const double n = static_cast<double>(data.photon_counts[i]);
        const double m = mse(data.records[i]);
        xs.push_back(std::log10(n));
        ys.push_back(std::log10(m));
        scaled.push_back(n * m);
    }
    const double slope = loglog_slope(xs, ys);
    const double tail_slope =
        loglog_slope({xs.begin() + 2, xs.end()}, {ys.begin() + 2, ys.end()});
    std::ostringstream os;
    os << "log-log slope = " << slope << " (required -1 +/- 0.15); N*d_mse = {";
    for (double s : scaled) {
        os << ' ' << s;
    }
    os << " }; slope over N >= 1e5 is " << tail_slope
       << ". At N = 1e3 the xi denominator contrast (~0.071) is comparable to its"
          " shot noise (~0.063), so heavy-tailed ratio outliers inflate d_mse"
          " roughly tenfold there; the 1/N law holds once the denominator"
          " signal-to-noise is large";
    detail = os.str();
    return slope > -1.15 && slope < -0.85;
}

bool fault_tolerance_criterion(const ScalingData& data, std::string& detail) {
    // fixed Gamma from the spread at N = 1e5 (3-sigma rule)
    const double gamma = gamma_from_spread(data.records[2], 3.0);
    std::vector<double> fts;
    for (const auto& records : data.records) {
        fts.push_back(fault_tolerance(records, gamma));
    }
    const double se = 2.0 / std::sqrt(10000.0);  // generous 2-SE slack
    bool nondecreasing = true;
    for (std::size_t i = 1; i < fts.size(); ++i) {
        if (fts[i] + se < fts[i - 1]) {
            nondecreasing = false;
        }
    }
    const bool reaches = fts.back() > 0.99;

    // exact monotonicity in Gamma on a fixed record set
    bool gamma_monotone = true;
    double prev = 0;
    for (double g = gamma / 100; g < gamma * 100; g *= 3) {
        const double ft = fault_tolerance(data.records[1], g);
        if (ft < prev) {
            gamma_monotone = false;
        }
        prev = ft;
    }

    std::ostringstream os;
    os << "F_t over N = {";
    for (double f : fts) {
        os << ' ' << f;
    }
    os << " }, final > 0.99: " << (reaches ? "yes" : "no")
       << ", nondecreasing: " << (nondecreasing ? "yes" : "no")
       << ", monotone in Gamma: " << (gamma_monotone ? "yes" : "no");
    detail = os.str();
    return nondecreasing && reaches && gamma_monotone;
}

bool basis_failure_robustness(std::string& detail) {
    const double eps = 0.05;
    const BasisSet bases = make_bases(eps, kPi / 2);
    const Ensemble ens = Ensemble::single(kPi / 3);
    const double upsilon = ens.upsilon();
    double worst_rel = 0;
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (const KrausChannel& ch :
             {make_phase_damping(x), make_amplitude_damping(x), make_depolarizing(x)}) {
            const double b1 = noise_params_lenient(ch).b1;
            for (double phi : {-0.02, 0.01, 0.03}) {
                const auto p = exact_probs(ch, ens, phi, bases);
                const double via14 = decode_single_pair(p[0], p[3], 0, eps, upsilon * b1);
                const double via23 = decode_single_pair(p[1], p[2], 1, eps, upsilon * b1);
                worst_rel = std::max({worst_rel, std::abs(via14 - phi) / std::abs(phi),
                                      std::abs(via23 - phi) / std::abs(phi)});
            }
        }
    }
    std::ostringstream os;
    os << "max relative error = " << worst_rel << " (<= 0.05)";
    detail = os.str();
    return worst_rel <= 0.05;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool determinism(const std::string& cli_path, std::string& detail) {
    if (cli_path.empty()) {
        detail = "CLI binary path not supplied";
        return false;
    }
    const fs::path dir = fs::temp_directory_path() / "ftip_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "config.json";
    {
        std::ofstream out(cfg);
        out << R"({
          "mode": "sweep",
          "channel": {"name": "phase_damping", "params": {"lambda": 0.5}},
          "epsilon": 0.05,
          "sampling": {"total_photons": 10000, "trials": 200, "seed": 77},
          "sweep": {"photon_counts": [1000, 10000], "epsilons": [0.05, 0.1],
                    "channel_params": [0.2, 0.5], "gammas": [1e-4], "phi": 0.01}
        })";
    }
    auto run_once = [&](const std::string& out_dir) {
        const std::string cmd = "\"" + cli_path + "\" sweep --config \"" + cfg.string() +
                                "\" --out-dir \"" + (dir / out_dir).string() +
                                "\" > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    if (run_once("a") != 0 || run_once("b") != 0) {
        detail = "CLI sweep run failed";
        return false;
    }
    const bool csv_same =
        read_file(dir / "a" / "sweep.csv") == read_file(dir / "b" / "sweep.csv");
    const bool json_same =
        read_file(dir / "a" / "summary.json") == read_file(dir / "b" / "summary.json");
    detail = std::string("sweep.csv identical: ") + (csv_same ? "yes" : "no") +
             ", summary.json identical: " + (json_same ? "yes" : "no");
    return csv_same && json_same;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";

    const ScalingData scaling = run_scaling();

    const std::vector<Criterion> criteria{
        {"1. chi-cancellation for dephasing-class channels",
         [](std::string& d) { return chi_cancellation(d); }},
        {"2. noise-parameter table closed forms + slope cross-check",
         [](std::string& d) { return noise_parameter_table(d); }},
        {"3. Kraus-decomposition invariance",
         [](std::string& d) { return kraus_remix_invariance(d); }},
        {"4. flip-noise correction via extended bases",
         [](std::string& d) { return flip_correction(d); }},
        {"5. EPR multiplicative law + brute-force oracle",
         [](std::string& d) { return epr_multiplicative_law(d); }},
        {"6. shot-noise scaling of d_MSE",
         [&](std::string& d) { return shot_noise_scaling(scaling, d); }},
        {"7. fault-tolerant capability",
         [&](std::string& d) { return fault_tolerance_criterion(scaling, d); }},
        {"8. basis-failure robustness",
         [](std::string& d) { return basis_failure_robustness(d); }},
        {"9. determinism of the full sweep",
         [&](std::string& d) { return determinism(cli_path, d); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name << " -- " << detail << '\n';
        if (!ok) {
            ++failures;
        }
    }
    return failures;
}
