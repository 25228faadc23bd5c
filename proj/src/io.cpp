#include "ftip/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ftip {

using nlohmann::json;

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Waveform ingest_waveform(const std::filesystem::path& path,
                         std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("waveform: cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "t,phi") {
        throw UsageError("waveform: first line must be the header \"t,phi\"");
    }
    Waveform w;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        double t, phi;
        char comma;
        std::istringstream row(line);
        if (!(row >> t >> comma >> phi) || comma != ',') {
            throw UsageError("waveform: parse failure at line " + std::to_string(line_no));
        }
        if (!w.samples.empty() && t <= w.samples.back().t) {
            throw UsageError("waveform: non-monotonic t at line " + std::to_string(line_no));
        }
        if (std::abs(phi) > 0.3) {
            throw OutOfRegimeError("waveform: |phi| > 0.3 at line " +
                                   std::to_string(line_no));
        }
        if (std::abs(phi) > 0.05 && warnings) {
            warnings->push_back("line " + std::to_string(line_no) +
                                ": |phi| > 0.05, outside the small-signal comfort regime");
        }
        w.samples.push_back({t, phi});
    }
    return w;
}

void emit_waveform(const std::filesystem::path& path, const Waveform& w) {
    std::ofstream out(path);
    if (!out) {
        throw UsageError("waveform: cannot write " + path.string());
    }
    out << "t,phi\n";
    for (const Waveform::Sample& s : w.samples) {
        out << format_real(s.t) << ',' << format_real(s.phi) << '\n';
    }
}

KrausChannel load_custom_channel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("custom channel: cannot open " + path.string());
    }
    std::vector<std::vector<std::vector<Complex>>> blocks;
    std::vector<std::vector<Complex>> current;
    std::string line;
    auto flush = [&]() {
        if (!current.empty()) {
            blocks.push_back(current);
            current.clear();
        }
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            flush();
            continue;
        }
        std::istringstream row(line);
        std::vector<Complex> entries;
        double re, im;
        while (row >> re >> im) {
            entries.emplace_back(re, im);
        }
        if (entries.empty()) {
            throw UsageError("custom channel: malformed row \"" + line + "\"");
        }
        current.push_back(entries);
    }
    flush();
    if (blocks.empty()) {
        throw UsageError("custom channel: no operators in " + path.string());
    }
    const std::size_t dim = blocks[0].size();
    if (dim != 2 && dim != 4) {
        throw UsageError("custom channel: dim must be 2 or 4");
    }
    KrausChannel ch{"custom:" + path.filename().string(), static_cast<Eigen::Index>(dim), {}};
    for (const auto& block : blocks) {
        if (block.size() != dim) {
            throw UsageError("custom channel: operator block with wrong row count");
        }
        Operator e(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (block[i].size() != dim) {
                throw UsageError("custom channel: row with wrong entry count");
            }
            for (std::size_t j = 0; j < dim; ++j) {
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = block[i][j];
            }
        }
        if (!is_finite(e)) {
            throw UsageError("custom channel: non-finite entry");
        }
        ch.operators.push_back(e);
    }
    if (ch.completeness_residual() > 1e-10) {
        throw InvalidChannelError("custom channel: Kraus set fails completeness");
    }
    return ch;
}

namespace {

double get_param(const ChannelSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        throw SchemaError("channel.params." + key,
                          "required for channel '" + spec.name + "'");
    }
    return it->second;
}

}  // namespace

std::string ChannelSpec::primary_param() const {
    if (name == "phase_damping") return "lambda";
    if (name == "amplitude_damping") return "gamma";
    if (name == "phase_flip" || name == "bit_flip" || name == "bit_phase_flip" ||
        name == "depolarizing") {
        return "p";
    }
    if (name == "rtn") return "t";
    throw UsageError("channel '" + name + "' has no sweepable parameter");
}

KrausChannel ChannelSpec::build() const {
    if (name == "identity") return make_identity_channel();
    if (name == "phase_damping") return make_phase_damping(get_param(*this, "lambda"));
    if (name == "phase_flip") return make_phase_flip(get_param(*this, "p"));
    if (name == "bit_flip") return make_bit_flip(get_param(*this, "p"));
    if (name == "bit_phase_flip") return make_bit_phase_flip(get_param(*this, "p"));
    if (name == "amplitude_damping") {
        return make_amplitude_damping(get_param(*this, "gamma"));
    }
    if (name == "depolarizing") return make_depolarizing(get_param(*this, "p"));
    if (name == "rtn") {
        return make_rtn(get_param(*this, "nu"), get_param(*this, "coupling"),
                        get_param(*this, "t"));
    }
    if (name == "custom") {
        if (!custom_file) {
            throw SchemaError("channel.file", "required for custom channels");
        }
        return load_custom_channel(*custom_file);
    }
    throw SchemaError("channel.name", "unknown channel '" + name + "'");
}

KrausChannel ChannelSpec::build_at(double t) const {
    if (timeline.empty()) {
        return build();
    }
    double value = timeline.front().second;
    for (const auto& [start, param] : timeline) {
        if (start <= t) {
            value = param;
        } else {
            break;
        }
    }
    ChannelSpec at = *this;
    at.timeline.clear();
    at.params[primary_param()] = value;
    return at.build();
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw SchemaError(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw SchemaError(where + "." + key, "required number");
    }
    return obj[key].get<double>();
}

ChannelSpec parse_channel(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw SchemaError(where, "must be an object");
    }
    reject_unknown_keys(obj, where, {"name", "params", "file", "timeline"});
    ChannelSpec spec;
    if (!obj.contains("name") || !obj["name"].is_string()) {
        throw SchemaError(where + ".name", "required string");
    }
    spec.name = obj["name"].get<std::string>();
    if (obj.contains("params")) {
        if (!obj["params"].is_object()) {
            throw SchemaError(where + ".params", "must be an object of numbers");
        }
        for (const auto& [key, value] : obj["params"].items()) {
            if (!value.is_number()) {
                throw SchemaError(where + ".params." + key, "must be a number");
            }
            spec.params[key] = value.get<double>();
        }
    }
    if (obj.contains("file")) {
        spec.custom_file = obj["file"].get<std::string>();
    }
    if (obj.contains("timeline")) {
        if (!obj["timeline"].is_array() || obj["timeline"].empty()) {
            throw SchemaError(where + ".timeline", "must be a nonempty array");
        }
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < obj["timeline"].size(); ++i) {
            const json& entry = obj["timeline"][i];
            const std::string entry_path = where + ".timeline[" + std::to_string(i) + "]";
            reject_unknown_keys(entry, entry_path, {"t", "param"});
            const double t = require_number(entry, entry_path, "t");
            const double param = require_number(entry, entry_path, "param");
            if (t <= prev) {
                throw SchemaError(entry_path + ".t", "must be strictly increasing");
            }
            prev = t;
            spec.timeline.emplace_back(t, param);
        }
    }
    return spec;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("config: cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw SchemaError("(document)", e.what());
    }
    if (!root.is_object()) {
        throw SchemaError("(document)", "config must be a JSON object");
    }
    reject_unknown_keys(root, "", {"mode", "ensemble", "channel", "channel_r", "epsilon",
                                   "axis", "sampling", "gamma", "gamma_multiple",
                                   "correction", "waveform", "out_dir", "sweep"});

    RunConfig cfg;
    cfg.config_hash = fnv1a(bytes);

    if (!root.contains("mode") || !root["mode"].is_string()) {
        throw SchemaError("mode", "required string");
    }
    const std::string mode = root["mode"].get<std::string>();
    if (mode == "single") {
        cfg.mode = RunMode::Single;
    } else if (mode == "epr") {
        cfg.mode = RunMode::Epr;
    } else if (mode == "channel-info") {
        cfg.mode = RunMode::ChannelInfo;
    } else if (mode == "sweep") {
        cfg.mode = RunMode::Sweep;
    } else {
        throw SchemaError("mode", "must be single, epr, channel-info, or sweep");
    }

    if (root.contains("ensemble")) {
        if (!root["ensemble"].is_array() || root["ensemble"].empty()) {
            throw SchemaError("ensemble", "must be a nonempty array");
        }
        cfg.ensemble.components.clear();
        for (std::size_t i = 0; i < root["ensemble"].size(); ++i) {
            const json& c = root["ensemble"][i];
            const std::string where = "ensemble[" + std::to_string(i) + "]";
            reject_unknown_keys(c, where, {"weight", "theta"});
            cfg.ensemble.components.push_back(
                {require_number(c, where, "weight"), require_number(c, where, "theta")});
        }
        try {
            cfg.ensemble.validate();
        } catch (const UsageError& e) {
            throw SchemaError("ensemble", e.what());
        }
    }

    if (!root.contains("channel")) {
        throw SchemaError("channel", "required");
    }
    cfg.channel = parse_channel(root["channel"], "channel");
    if (root.contains("channel_r")) {
        cfg.channel_r = parse_channel(root["channel_r"], "channel_r");
    }
    if (root.contains("epsilon")) {
        cfg.epsilon = root["epsilon"].get<double>();
    }
    if (root.contains("axis")) {
        cfg.axis = root["axis"].get<double>();
    }
    if (!(cfg.epsilon > 0 && cfg.epsilon <= 0.2)) {
        throw SchemaError("epsilon", "must be in (0, 0.2]");
    }

    if (root.contains("sampling")) {
        const json& s = root["sampling"];
        reject_unknown_keys(s, "sampling",
                            {"total_photons", "trials", "seed", "exact", "allocation"});
        if (s.contains("total_photons")) {
            cfg.plan.total_photons = s["total_photons"].get<long long>();
        }
        if (s.contains("trials")) {
            cfg.plan.trials = s["trials"].get<long long>();
        }
        if (s.contains("seed")) {
            cfg.plan.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("exact")) {
            cfg.plan.exact = s["exact"].get<bool>();
        }
        if (s.contains("allocation")) {
            cfg.plan.allocation = s["allocation"].get<std::vector<double>>();
        }
    }
    if (cfg.mode != RunMode::ChannelInfo && !cfg.plan.exact &&
        cfg.plan.total_photons <= 0) {
        throw SchemaError("sampling.total_photons", "required positive integer");
    }

    if (root.contains("gamma")) {
        cfg.gamma = root["gamma"].get<double>();
        if (cfg.gamma < 0) {
            throw SchemaError("gamma", "must be nonnegative");
        }
    }
    if (root.contains("gamma_multiple")) {
        cfg.gamma_multiple = root["gamma_multiple"].get<double>();
    }

    if (root.contains("correction")) {
        const json& c = root["correction"];
        reject_unknown_keys(c, "correction", {"kind"});
        if (!c.contains("kind") || !c["kind"].is_string()) {
            throw SchemaError("correction.kind", "required string");
        }
        const std::string kind = c["kind"].get<std::string>();
        FlipCorrection fc{FlipKind::BitFlip, cfg.ensemble};
        if (kind == "bit_phase_flip") {
            fc.kind = FlipKind::BitPhaseFlip;
        } else if (kind != "bit_flip") {
            throw SchemaError("correction.kind", "must be bit_flip or bit_phase_flip");
        }
        cfg.correction = fc;
    }

    if (root.contains("waveform")) {
        cfg.waveform_in = root["waveform"].get<std::string>();
    }
    if (root.contains("out_dir")) {
        cfg.out_dir = root["out_dir"].get<std::string>();
    }

    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        reject_unknown_keys(s, "sweep",
                            {"photon_counts", "epsilons", "channel_params", "gammas", "phi"});
        auto axis_of = [&s](const char* key) {
            if (!s.contains(key) || !s[key].is_array() || s[key].empty()) {
                throw SchemaError(std::string("sweep.") + key, "required nonempty array");
            }
        };
        axis_of("photon_counts");
        axis_of("epsilons");
        axis_of("channel_params");
        axis_of("gammas");
        cfg.grid.photon_counts = s["photon_counts"].get<std::vector<long long>>();
        cfg.grid.epsilons = s["epsilons"].get<std::vector<double>>();
        cfg.grid.channel_params = s["channel_params"].get<std::vector<double>>();
        cfg.grid.gammas = s["gammas"].get<std::vector<double>>();
        if (s.contains("phi")) {
            cfg.sweep_phi = s["phi"].get<double>();
        }
    } else if (cfg.mode == RunMode::Sweep) {
        throw SchemaError("sweep", "required for sweep mode");
    }

    if ((cfg.mode == RunMode::Single || cfg.mode == RunMode::Epr) &&
        cfg.waveform_in.empty()) {
        throw SchemaError("waveform", "required for single/epr mode");
    }
    return cfg;
}

}  // namespace ftip
