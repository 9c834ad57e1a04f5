#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hapticbar/model.hpp"
#include "hapticbar/response.hpp"

namespace hapticbar {

/// Human vibrotactile sensitivity band used as the default frequency grid.
inline constexpr double kHapticBandLowHz = 150.0;
inline constexpr double kHapticBandHighHz = 250.0;
inline constexpr double kDefaultGridStepHz = 5.0;

enum class PresetCase { Single, Dual, Triple };

PresetCase parse_preset_case(std::string_view label);

/// Actuator positions as fractions of the bar length, one tuple per
/// configuration, in table order.
std::vector<std::vector<double>> preset_fractions(PresetCase which);

/// preset_fractions scaled to metres.
std::vector<std::vector<double>> preset_configurations(PresetCase which, double length);

/// start, start + step, ... up to stop inclusive (with a small tolerance).
std::vector<double> frequency_grid(double start_hz, double stop_hz, double step_hz);

struct SweepSpec {
  /// Material, geometry, element count and gravity; attachments and
  /// excitations of the base are ignored.
  StudyConfig base;
  /// Properties shared by every actuator; the position is overridden.
  ActuatorAttachment actuator;
  std::vector<std::vector<double>> position_sets;  // m
  std::vector<double> frequency_grid_hz =
      frequency_grid(kHapticBandLowHz, kHapticBandHighHz, kDefaultGridStepHz);
  /// Empty means the actuator's own stiffness.
  std::vector<double> stiffness_values;
  /// true: every combination of grid frequencies across actuators.
  /// false: all actuators share each grid frequency.
  bool cross_product = true;
  /// Explicit per-actuator frequency tuples; overrides the grid when set.
  std::vector<std::vector<double>> frequency_tuples;
  /// 0 picks the hardware concurrency.
  int workers = 0;
};

struct SweepCase {
  int id = 0;
  int position_set = 0;  // index into SweepSpec::position_sets
  std::vector<double> positions;
  std::vector<double> frequencies_hz;
  double stiffness = 0.0;
};

struct SampleRecord {
  int case_index = 0;  // index into SampleSet::cases
  double position = 0.0;
  double peak_g = 0.0;
};

struct SkippedCase {
  int case_id = 0;
  std::string reason;
};

struct SampleSet {
  std::vector<SweepCase> cases;
  std::vector<SampleRecord> records;
  std::vector<SkippedCase> skipped;
};

/// Enumerates cases (position sets, then stiffness, then frequency tuples),
/// solves each and records the peak field at every node. Cases hitting an
/// undamped resonance are recorded as skipped. Output is independent of the
/// worker count. Throws Error(InvalidArgument) for an invalid spec.
SampleSet run_sweep(const SweepSpec& spec);

/// Peak field of a single sweep case, computed the same way as run_sweep.
PeakAccelerationField evaluate_case(const SweepSpec& spec, const SweepCase& sweep_case);

enum class GroupBy { PositionSet, Frequencies, Stiffness, Case };

struct QuantileSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

struct GroupSummary {
  std::string label;
  int key = 0;  // position-set index / case id / first-case index
  QuantileSummary stats;
};

/// Type-7 (linear interpolation) quantiles. Throws Error(EmptyGroup).
QuantileSummary summarize(std::vector<double> values);

/// Summary per group in order of first appearance.
std::vector<GroupSummary> quantile_summary(const SampleSet& samples, GroupBy group_by);

struct BucketSummary {
  double below_1g = 0.0;
  double between_1_and_5g = 0.0;
  double above_5g = 0.0;
  std::size_t count_below = 0;
  std::size_t count_between = 0;
  std::size_t count_above = 0;
};

/// Buckets the peak at the node nearest evaluation_position of every case.
/// Values equal to a threshold fall in the lower bucket. Throws
/// Error(NoSamplesAtPosition).
BucketSummary bucket_fractions(const SampleSet& samples, double evaluation_position,
                               double low_threshold_g = 1.0, double high_threshold_g = 5.0);

/// Records and cases of one position set only.
SampleSet filter_position_set(const SampleSet& samples, int position_set);

struct Interval {
  double begin = 0.0;
  double end = 0.0;
  double measure() const { return end - begin; }
};

/// Maximal intervals where the linearly interpolated peak is below the
/// threshold, sorted and disjoint.
std::vector<Interval> dead_zones(const PeakAccelerationField& field, double threshold_g = 1.0);

double total_measure(const std::vector<Interval>& intervals);

/// Dead zones of the pointwise maximum over fields sharing one grid.
/// Throws Error(GridMismatch).
std::vector<Interval> nullification_union(const std::vector<PeakAccelerationField>& fields,
                                          double threshold_g = 1.0);

/// "a;b;c" with 17 significant digits, used for tuple columns.
std::string join_tuple(const std::vector<double>& values);

}  // namespace hapticbar
