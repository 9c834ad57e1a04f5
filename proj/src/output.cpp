#include "hapticbar/output.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "hapticbar/error.hpp"
#include "hapticbar/units.hpp"

namespace hapticbar {

using units::format_17g;

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  out << kSamplesHeader << '\n';
  for (const auto& r : samples.records) {
    const SweepCase& c = samples.cases[r.case_index];
    out << std::to_string(c.id) << ',' << join_tuple(c.positions) << ','
        << join_tuple(c.frequencies_hz) << ',' << format_17g(c.stiffness) << ',' << format_17g(r.position) << ','
        << format_17g(r.peak_g) << '\n';
  }
}

void write_field_csv(std::ostream& out, const PeakAccelerationField& field) {
  out << kFieldHeader << '\n';
  for (std::size_t k = 0; k < field.positions.size(); ++k) {
    out << format_17g(field.positions[k]) << ',' << format_17g(field.peaks_g[k]) << '\n';
  }
}

void write_modes_csv(std::ostream& out, const ModalResult& modal) {
  out << kModesHeader << '\n';
  for (int j = 0; j < modal.state_size(); ++j) {
    out << std::to_string(j) << ',' << format_17g(modal.eigenvalues[j].real()) << ','
        << format_17g(modal.eigenvalues[j].imag()) << ','
        << format_17g(modal.damped_frequencies_hz[j]) << ','
        << format_17g(modal.modal_damping[j]) << '\n';
  }
}

nlohmann::json to_json(const QuantileSummary& s) {
  return {{"min", s.min},       {"q1", s.q1},     {"median", s.median}, {"q3", s.q3},
          {"max", s.max},       {"mean", s.mean}, {"count", s.count}};
}

nlohmann::json to_json(const BucketSummary& b) {
  return {{"below_1g", b.below_1g},
          {"between_1_and_5g", b.between_1_and_5g},
          {"above_5g", b.above_5g},
          {"count_below", b.count_below},
          {"count_between", b.count_between},
          {"count_above", b.count_above}};
}

nlohmann::json to_json(const std::vector<Interval>& intervals) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& i : intervals) arr.push_back({{"begin_m", i.begin}, {"end_m", i.end}});
  return arr;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * len);
  constexpr char kDigits[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex += kDigits[digest[i] >> 4];
    hex += kDigits[digest[i] & 0xF];
  }
  return hex;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"config_digest", m.config_digest},
          {"tool_version", m.tool_version},
          {"subcommand", m.subcommand},
          {"outputs", m.outputs},
          {"wall_time_s", m.wall_time_s}};
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigParse, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace hapticbar
