#pragma once

// File formats for the batch front-end: "t,phi" waveforms, row-major
// complex-entry custom channel files, and the JSON run configuration.

#include "ftip/channels.hpp"
#include "ftip/codec.hpp"
#include "ftip/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftip {

// Configuration failed schema validation; `field` is the offending path.
struct SchemaError : std::runtime_error {
    std::string field;
    SchemaError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path + ": " + message), field(std::move(field_path)) {}
};

struct Waveform {
    struct Sample {
        double t;    // seconds, strictly increasing
        double phi;  // radians, |phi| <= 0.3
    };
    std::vector<Sample> samples;
};

// Parses "t,phi"-headed delimited text. Rejects non-monotonic t and
// |phi| > 0.3; warnings lists samples above the 0.05 comfort regime.
Waveform ingest_waveform(const std::filesystem::path& path,
                         std::vector<std::string>* warnings = nullptr);

// 17-significant-digit output, same header.
void emit_waveform(const std::filesystem::path& path, const Waveform& w);

// Custom channel file: one Kraus operator per blank-line-separated block,
// each block dim rows of dim "re im" pairs. Dim (2 or 4) inferred from the
// first block.
KrausChannel load_custom_channel(const std::filesystem::path& path);

// Channel named in a config: a catalog name plus parameters, or a custom
// matrix file.
struct ChannelSpec {
    std::string name;
    std::map<std::string, double> params;
    std::optional<std::filesystem::path> custom_file;
    // optional step-function timeline over the primary parameter
    std::vector<std::pair<double, double>> timeline;  // (t, param)

    KrausChannel build() const;
    KrausChannel build_at(double t) const;  // applies the timeline, if any
    // the single sweepable parameter, where the family has one
    std::string primary_param() const;
};

enum class RunMode { Single, Epr, ChannelInfo, Sweep };

struct RunConfig {
    RunMode mode = RunMode::Single;
    Ensemble ensemble = Ensemble::single(1.5707963267948966);
    ChannelSpec channel;                 // single-qubit path, and EPR arm s
    std::optional<ChannelSpec> channel_r;  // EPR arm r; defaults to `channel`
    double epsilon = 0.05;
    double axis = 1.5707963267948966;
    SamplingPlan plan;
    double gamma = 0;            // 0 = derive from spread
    double gamma_multiple = 3.0;
    std::optional<FlipCorrection> correction;
    SweepGrid grid;              // sweep mode only
    double sweep_phi = 0.01;     // constant signal used by sweep mode
    std::filesystem::path waveform_in;
    std::filesystem::path out_dir = ".";
    std::uint64_t config_hash = 0;  // FNV-1a of the config file bytes
};

// Parses and schema-validates the JSON config; unknown keys are rejected
// with their field path.
RunConfig load_config(const std::filesystem::path& path);

std::string format_real(double value);  // %.17g

}  // namespace ftip
