// Batch front-end: run (single-qubit or EPR waveform transmission),
// sweep (grid of Monte Carlo runs), channel-info (noise-parameter table).

#include "ftip/epr.hpp"
#include "ftip/io.hpp"
#include "ftip/metrics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace ftip;
using nlohmann::json;

constexpr int kExitSchema = 2;
constexpr int kExitRuntime = 3;

struct SampleOutcome {
    double t = 0;
    double phi_truth = 0;
    double phi_tilde = 0;
    double delta_phi = 0;  // phi_tilde - chi * phi
};

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_summary(const std::filesystem::path& path, const RunConfig& cfg,
                   const json& body) {
    json doc = body;
    doc["config_hash"] = hash_hex(cfg.config_hash);
    doc["seed"] = cfg.plan.seed;
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

// phi_tilde for one waveform sample; throws on undecodable/degenerate input.
SampleOutcome process_sample(const RunConfig& cfg, const Waveform::Sample& sample,
                             long long trial_index) {
    const bool extended = cfg.correction.has_value();
    const KrausChannel arm_s = cfg.channel.build_at(sample.t);

    std::vector<double> probs;
    double epsilon = cfg.epsilon;
    if (cfg.mode == RunMode::Epr) {
        const KrausChannel arm_r =
            cfg.channel_r ? cfg.channel_r->build_at(sample.t) : arm_s;
        const KrausChannel pair = tensor_channel(arm_s, arm_r);
        const auto cbs = make_coincidence_bases(cfg.epsilon, cfg.axis, extended);
        probs = coincidence_probabilities(apply(pair, encode_epr(cfg.ensemble, sample.phi)),
                                          cbs);
    } else {
        const auto bases = make_bases(cfg.epsilon, cfg.axis, extended);
        probs = probabilities(apply(arm_s, encode(cfg.ensemble, sample.phi)), bases);
    }

    std::vector<double> phat = probs;
    if (!cfg.plan.exact) {
        const CountVector counts = sample_counts(probs, cfg.plan, trial_index);
        phat = counts.phats();
    }

    std::optional<double> chi_hat;
    if (cfg.correction) {
        chi_hat = flip_correction_chi(
            estimate_chi_from_extended(phat[4], phat[5], cfg.correction->ensemble),
            cfg.correction->kind);
    }

    const double xi = compose_xi(std::span<const double>(phat));
    const double chi_used = chi_hat.value_or(1.0);
    SampleOutcome out;
    out.t = sample.t;
    out.phi_truth = sample.phi;
    out.phi_tilde = std::atan(xi * std::tan(epsilon) / chi_used);

    const NoiseParams np = noise_params_lenient(arm_s);
    const double chi_truth = std::isnan(np.chi) ? 1.0 : np.chi;
    out.delta_phi = out.phi_tilde - chi_truth * sample.phi;
    return out;
}

int cmd_run(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    const Waveform input = ingest_waveform(cfg.waveform_in, &warnings);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (input.samples.empty()) {
        std::cerr << "error: waveform has no samples\n";
        return kExitRuntime;
    }

    std::vector<SampleOutcome> outcomes;
    outcomes.reserve(input.samples.size());
    for (std::size_t i = 0; i < input.samples.size(); ++i) {
        try {
            outcomes.push_back(
                process_sample(cfg, input.samples[i], static_cast<long long>(i)));
        } catch (const std::exception& e) {
            std::cerr << "error at sample " << i << ": " << e.what() << '\n';
            return kExitRuntime;
        }
    }

    std::filesystem::create_directories(cfg.out_dir);
    Waveform retrieved;
    double sq_err = 0;
    double mean_delta = 0;
    for (const SampleOutcome& o : outcomes) {
        retrieved.samples.push_back({o.t, o.phi_tilde});
        sq_err += (o.phi_tilde - o.phi_truth) * (o.phi_tilde - o.phi_truth);
        mean_delta += o.delta_phi;
    }
    const double n = static_cast<double>(outcomes.size());
    const double d_mse = sq_err / n;
    mean_delta /= n;

    double gamma = cfg.gamma;
    if (gamma <= 0) {
        double var_delta = 0;
        for (const SampleOutcome& o : outcomes) {
            var_delta += (o.delta_phi - mean_delta) * (o.delta_phi - mean_delta);
        }
        var_delta = outcomes.size() > 1 ? var_delta / (n - 1) : 0.0;
        gamma = std::max(cfg.gamma_multiple * cfg.gamma_multiple * var_delta,
                         std::numeric_limits<double>::min());
    }
    long long pass = 0;
    for (const SampleOutcome& o : outcomes) {
        if (o.delta_phi * o.delta_phi < gamma) {
            ++pass;
        }
    }

    emit_waveform(cfg.out_dir / "retrieved.csv", retrieved);
    write_summary(cfg.out_dir / "summary.json", cfg,
                  json{{"mode", cfg.mode == RunMode::Epr ? "epr" : "single"},
                       {"samples", outcomes.size()},
                       {"d_mse", d_mse},
                       {"gamma", gamma},
                       {"f_t", static_cast<double>(pass) / n},
                       {"exact", cfg.plan.exact}});
    std::cout << "d_mse=" << format_real(d_mse)
              << " f_t=" << format_real(static_cast<double>(pass) / n) << '\n';
    return 0;
}

void channel_row(std::ostream& out, const std::string& label, const KrausChannel& ch) {
    const NoiseParams p = noise_params_lenient(ch);
    out << label << ',' << ch.name << ',' << format_real(p.a1) << ',' << format_real(p.a2)
        << ',' << format_real(p.a3) << ',' << format_real(p.a4) << ','
        << format_real(p.b1) << ',' << format_real(p.b2) << ',' << format_real(p.c1)
        << ',' << format_real(p.c2) << ',' << format_real(p.chi1) << ','
        << format_real(p.chi2) << ','
        << (std::isnan(p.chi) ? "undefined" : format_real(p.chi)) << ','
        << to_string(classify(p)) << '\n';
}

int cmd_channel_info(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir / "channel_info.csv");
    const char* header =
        "arm,channel,A1,A2,A3,A4,B1,B2,C1,C2,chi1,chi2,chi,class\n";
    csv << header;
    std::cout << header;
    try {
        const KrausChannel cs = cfg.channel.build();
        channel_row(csv, "s", cs);
        channel_row(std::cout, "s", cs);
        if (cfg.channel_r) {
            const KrausChannel cr = cfg.channel_r->build();
            channel_row(csv, "r", cr);
            channel_row(std::cout, "r", cr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const ChannelSpec spec = cfg.channel;
    auto factory = [&spec](double param) {
        ChannelSpec at = spec;
        at.params[spec.primary_param()] = param;
        return at.build();
    };
    std::vector<SweepRow> rows;
    try {
        rows = sweep(factory, cfg.ensemble, cfg.sweep_phi, cfg.axis, cfg.plan, cfg.grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    std::ofstream csv(cfg.out_dir / "sweep.csv");
    csv << "N,epsilon,channel_param,gamma,d_mse,f_t,mean_phi_tilde,var_phi_tilde,"
           "trials,decodable,error\n";
    for (const SweepRow& row : rows) {
        csv << row.point.total_photons << ',' << format_real(row.point.epsilon) << ','
            << format_real(row.point.channel_param) << ','
            << format_real(row.point.gamma) << ',';
        if (row.error.empty()) {
            csv << format_real(row.summary.d_mse) << ',' << format_real(row.summary.f_t)
                << ',' << format_real(row.summary.mean_phi_tilde) << ','
                << format_real(row.summary.var_phi_tilde) << ',' << row.summary.trials
                << ',' << row.summary.decodable << ',';
        } else {
            csv << ",,,,,," << row.error;
        }
        csv << '\n';
    }
    write_summary(cfg.out_dir / "summary.json", cfg,
                  json{{"mode", "sweep"},
                       {"rows", rows.size()},
                       {"phi", cfg.sweep_phi},
                       {"exact", cfg.plan.exact}});
    std::cout << "sweep: " << rows.size() << " rows -> "
              << (cfg.out_dir / "sweep.csv").string() << '\n';
    return 0;
}

int dispatch(const std::string& config_path, std::optional<std::uint64_t> seed,
             bool exact, const std::string& out_dir, RunMode expected) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const SchemaError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitSchema;
    }
    if (seed) {
        cfg.plan.seed = *seed;
    }
    if (exact) {
        cfg.plan.exact = true;
    }
    if (!out_dir.empty()) {
        cfg.out_dir = out_dir;
    }
    if (expected == RunMode::Sweep && cfg.mode != RunMode::Sweep) {
        std::cerr << "config error at mode: sweep subcommand needs mode \"sweep\"\n";
        return kExitSchema;
    }
    if (expected == RunMode::Single &&
        (cfg.mode == RunMode::Sweep || cfg.mode == RunMode::ChannelInfo)) {
        std::cerr << "config error at mode: run subcommand needs mode \"single\" or \"epr\"\n";
        return kExitSchema;
    }
    switch (expected == RunMode::ChannelInfo ? RunMode::ChannelInfo : cfg.mode) {
        case RunMode::ChannelInfo:
            return cmd_channel_info(cfg);
        case RunMode::Sweep:
            return cmd_sweep(cfg);
        default:
            return cmd_run(cfg);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Postselected-decoding channel simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool exact = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
        sub->add_option("--seed", seed, "override sampling seed");
        sub->add_flag("--exact", exact, "exact-probability mode (infinite N)");
        sub->add_option("--out-dir", out_dir, "override output directory");
    };

    CLI::App* run = app.add_subcommand("run", "transmit a waveform (single or epr mode)");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid of Monte Carlo runs");
    CLI::App* info = app.add_subcommand("channel-info", "noise-parameter table");
    add_common(run);
    add_common(sweep_cmd);
    add_common(info);

    CLI11_PARSE(app, argc, argv);

    RunMode expected = RunMode::Single;
    if (app.got_subcommand(sweep_cmd)) {
        expected = RunMode::Sweep;
    } else if (app.got_subcommand(info)) {
        expected = RunMode::ChannelInfo;
    }
    return dispatch(config_path, seed, exact, out_dir, expected);
}
