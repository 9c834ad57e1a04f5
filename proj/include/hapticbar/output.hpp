#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hapticbar/modal.hpp"
#include "hapticbar/response.hpp"
#include "hapticbar/sweep.hpp"

namespace hapticbar {

/// Public CSV headers.
inline constexpr std::string_view kSamplesHeader =
    "case_id,positions,frequencies_hz,stiffness_n_per_m,position_m,peak_g";
inline constexpr std::string_view kFieldHeader = "position_m,peak_g";
inline constexpr std::string_view kModesHeader =
    "index,real_rad_s,imag_rad_s,damped_frequency_hz,damping_ratio";

void write_samples_csv(std::ostream& out, const SampleSet& samples);
void write_field_csv(std::ostream& out, const PeakAccelerationField& field);
void write_modes_csv(std::ostream& out, const ModalResult& modal);

nlohmann::json to_json(const QuantileSummary& s);
nlohmann::json to_json(const BucketSummary& b);
nlohmann::json to_json(const std::vector<Interval>& intervals);

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

struct RunManifest {
  std::string config_digest;
  std::string tool_version;
  std::string subcommand;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
};

nlohmann::json to_json(const RunManifest& m);

/// Writes text to a file, throwing Error(ConfigParse) if it cannot be opened.
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hapticbar
