#include "hapticbar/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <map>
#include <optional>
#include <thread>

#include "hapticbar/error.hpp"
#include "hapticbar/fem.hpp"

namespace hapticbar {

namespace {

// Per-node w^2 sqrt(p^2 + q^2) of one actuator driven at one frequency.
struct Contribution {
  std::vector<double> per_node;
  std::optional<std::string> failure;
};

struct Group {
  int position_set = 0;
  double stiffness = 0.0;
  StudyConfig config;
  std::vector<std::vector<double>> distinct_frequencies;  // per actuator
  std::vector<std::vector<Contribution>> contributions;   // [actuator][frequency]
};

StudyConfig case_config(const SweepSpec& spec, const std::vector<double>& positions,
                        double stiffness) {
  StudyConfig cfg = spec.base;
  cfg.attachments.clear();
  cfg.excitations.clear();
  for (std::size_t j = 0; j < positions.size(); ++j) {
    ActuatorAttachment a = spec.actuator;
    a.id = "actuator" + std::to_string(j + 1);
    a.position = positions[j];
    a.stiffness = stiffness;
    cfg.attachments.push_back(a);
  }
  return cfg;
}

std::vector<std::vector<double>> frequency_tuples_for(const SweepSpec& spec, std::size_t arity) {
  if (!spec.frequency_tuples.empty()) {
    for (const auto& t : spec.frequency_tuples) {
      if (t.size() != arity) {
        throw Error(ErrorCode::InvalidArgument,
                    "frequency tuple size does not match the number of actuators");
      }
    }
    return spec.frequency_tuples;
  }
  std::vector<std::vector<double>> out;
  const auto& grid = spec.frequency_grid_hz;
  if (grid.empty()) return out;
  if (!spec.cross_product) {
    for (double f : grid) out.emplace_back(arity, f);
    return out;
  }
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    std::vector<double> tuple(arity);
    for (std::size_t j = 0; j < arity; ++j) tuple[j] = grid[idx[j]];
    out.push_back(std::move(tuple));
    std::size_t j = arity;
    while (j > 0) {
      --j;
      if (++idx[j] < grid.size()) break;
      idx[j] = 0;
      if (j == 0) return out;
    }
  }
}

void validate_spec(const SweepSpec& spec) {
  validate(spec.base.material);
  validate(spec.base.geometry);
  if (spec.base.element_count < 2) {
    throw Error(ErrorCode::InvalidArgument, "element count must be at least 2");
  }
  const double length = spec.base.geometry.length;
  for (const auto& set : spec.position_sets) {
    if (set.empty()) throw Error(ErrorCode::InvalidArgument, "empty actuator position set");
    for (double x : set) {
      if (!(x >= 0.0 && x <= length)) {
        throw Error(ErrorCode::PositionOutOfRange, "actuator position lies outside [0, L]");
      }
    }
  }
  for (double f : spec.frequency_grid_hz) {
    if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid frequencies must be positive");
  }
  for (const auto& t : spec.frequency_tuples) {
    for (double f : t) {
      if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequencies must be positive");
    }
  }
  for (double k : spec.stiffness_values) {
    if (!(k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "stiffness must be nonnegative");
  }
  ActuatorAttachment probe = spec.actuator;
  probe.position = 0.0;
  validate(probe, spec.base.geometry);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < count; i = next++) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

PresetCase parse_preset_case(std::string_view label) {
  const std::string key = lowercase(label);
  if (key == "single") return PresetCase::Single;
  if (key == "dual") return PresetCase::Dual;
  if (key == "triple") return PresetCase::Triple;
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(label) + "'");
}

std::vector<std::vector<double>> preset_fractions(PresetCase which) {
  switch (which) {
    case PresetCase::Single:
      return {{0.0}, {0.03}, {0.16}, {0.33}, {0.49}};
    case PresetCase::Dual:
      return {{0.0, 1.0}, {0.03, 0.97}, {0.16, 0.84}, {0.33, 0.67}, {0.49, 0.51}};
    case PresetCase::Triple:
      return {{0.0, 0.49, 1.0},
              {0.03, 0.49, 0.97},
              {0.16, 0.49, 0.84},
              {0.33, 0.49, 0.67},
              {0.43, 0.49, 0.57}};
  }
  return {};
}

std::vector<std::vector<double>> preset_configurations(PresetCase which, double length) {
  auto sets = preset_fractions(which);
  for (auto& set : sets) {
    for (auto& x : set) x = (x == 1.0) ? length : x * length;
  }
  return sets;
}

std::vector<double> frequency_grid(double start_hz, double stop_hz, double step_hz) {
  if (!(step_hz > 0.0) || !(start_hz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "frequency grid needs positive start and step");
  }
  std::vector<double> out;
  const double tol = 1e-9 * step_hz;
  for (long k = 0;; ++k) {
    const double f = start_hz + static_cast<double>(k) * step_hz;
    if (f > stop_hz + tol) break;
    out.push_back(f);
  }
  return out;
}

SampleSet run_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  SampleSet out;
  const std::vector<double> stiffness_axis =
      spec.stiffness_values.empty() ? std::vector<double>{spec.actuator.stiffness}
                                    : spec.stiffness_values;

  // Enumerate cases and the distinct (actuator, frequency) solves they need.
  std::vector<Group> groups;
  std::vector<std::vector<std::vector<int>>> case_slots;  // per group, per case: freq index
  std::vector<int> case_group;
  for (std::size_t p = 0; p < spec.position_sets.size(); ++p) {
    const auto& positions = spec.position_sets[p];
    const auto tuples = frequency_tuples_for(spec, positions.size());
    for (double k : stiffness_axis) {
      Group g;
      g.position_set = static_cast<int>(p);
      g.stiffness = k;
      g.config = case_config(spec, positions, k);
      g.distinct_frequencies.resize(positions.size());
      std::vector<std::vector<int>> slots;
      for (const auto& tuple : tuples) {
        std::vector<int> slot(positions.size());
        for (std::size_t j = 0; j < positions.size(); ++j) {
          auto& freqs = g.distinct_frequencies[j];
          auto it = std::find(freqs.begin(), freqs.end(), tuple[j]);
          if (it == freqs.end()) {
            freqs.push_back(tuple[j]);
            it = freqs.end() - 1;
          }
          slot[j] = static_cast<int>(it - freqs.begin());
        }
        SweepCase c;
        c.id = static_cast<int>(out.cases.size());
        c.position_set = g.position_set;
        c.positions = positions;
        c.frequencies_hz = tuple;
        c.stiffness = k;
        out.cases.push_back(std::move(c));
        case_group.push_back(static_cast<int>(groups.size()));
        slots.push_back(std::move(slot));
      }
      g.contributions.resize(positions.size());
      for (std::size_t j = 0; j < positions.size(); ++j) {
        g.contributions[j].resize(g.distinct_frequencies[j].size());
      }
      groups.push_back(std::move(g));
      case_slots.push_back(std::move(slots));
    }
  }
  if (out.cases.empty()) return out;

  std::vector<AssembledSystem> systems;
  systems.reserve(groups.size());
  for (const auto& g : groups) systems.push_back(build_system(g.config));

  struct Task {
    int group;
    int actuator;
    int frequency;
  };
  std::vector<Task> tasks;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t j = 0; j < groups[gi].distinct_frequencies.size(); ++j) {
      for (std::size_t fi = 0; fi < groups[gi].distinct_frequencies[j].size(); ++fi) {
        tasks.push_back({static_cast<int>(gi), static_cast<int>(j), static_cast<int>(fi)});
      }
    }
  }

  parallel_for(tasks.size(), resolve_workers(spec.workers), [&](std::size_t i) {
    const Task& task = tasks[i];
    Group& g = groups[task.group];
    const AssembledSystem& sys = systems[task.group];
    Contribution& slot = g.contributions[task.actuator][task.frequency];
    try {
      const double f = g.distinct_frequencies[task.actuator][task.frequency];
      const HarmonicExcitation ex =
          base_excitation_forces(sys, g.config.attachments[task.actuator], f);
      const SteadyState steady = steady_state(sys, std::span(&ex, 1));
      const SteadyComponent& c = steady.components.front();
      slot.per_node.assign(sys.mesh.node_count(), 0.0);
      for (int node = 0; node < sys.mesh.node_count(); ++node) {
        const auto dof = sys.translation_dof(node);
        if (dof) {
          slot.per_node[node] = c.omega * c.omega * std::hypot(c.cos_coeffs[*dof], c.sin_coeffs[*dof]);
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ResonanceSingular) throw;
      slot.failure = e.what();
    }
  });

  // Deterministic merge in case order. The summation order matches
  // peak_acceleration_field so both paths agree bit for bit.
  std::vector<int> case_in_group(groups.size(), 0);
  for (std::size_t ci = 0; ci < out.cases.size(); ++ci) {
    const int gi = case_group[ci];
    const Group& g = groups[gi];
    const auto& slot = case_slots[gi][case_in_group[gi]++];
    std::optional<std::string> failure;
    for (std::size_t j = 0; j < slot.size() && !failure; ++j) {
      failure = g.contributions[j][slot[j]].failure;
    }
    if (failure) {
      out.skipped.push_back({out.cases[ci].id, *failure});
      continue;
    }
    const Mesh& mesh = systems[gi].mesh;
    for (int node = 0; node < mesh.node_count(); ++node) {
      double peak = 0.0;
      for (std::size_t j = 0; j < slot.size(); ++j) {
        peak += g.contributions[j][slot[j]].per_node[node];
      }
      out.records.push_back(
          {static_cast<int>(ci), mesh.node_positions[node], peak / spec.base.gravity});
    }
  }
  return out;
}

PeakAccelerationField evaluate_case(const SweepSpec& spec, const SweepCase& sweep_case) {
  StudyConfig cfg = case_config(spec, sweep_case.positions, sweep_case.stiffness);
  for (std::size_t j = 0; j < sweep_case.positions.size(); ++j) {
    cfg.excitations.push_back(
        ExcitationCommand::actuator(cfg.attachments[j].id, sweep_case.frequencies_hz.at(j)));
  }
  const AssembledSystem sys = build_system(cfg);
  const auto excitations = build_excitations(cfg, sys);
  return peak_acceleration_field(sys, steady_state(sys, excitations), cfg.gravity);
}

QuantileSummary summarize(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyGroup, "cannot summarize an empty group");
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double prob) {
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  QuantileSummary s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.count = values.size();
  return s;
}

std::vector<GroupSummary> quantile_summary(const SampleSet& samples, GroupBy group_by) {
  std::vector<std::string> labels;
  std::vector<int> keys;
  std::vector<std::vector<double>> values;
  std::map<std::string, std::size_t> index;
  for (const auto& r : samples.records) {
    const SweepCase& c = samples.cases[r.case_index];
    std::string label;
    int key = 0;
    switch (group_by) {
      case GroupBy::PositionSet:
        label = join_tuple(c.positions);
        key = c.position_set;
        break;
      case GroupBy::Frequencies:
        label = join_tuple(c.frequencies_hz);
        key = r.case_index;
        break;
      case GroupBy::Stiffness:
        label = join_tuple({c.stiffness});
        key = r.case_index;
        break;
      case GroupBy::Case:
        label = std::to_string(c.id);
        key = c.id;
        break;
    }
    auto [it, inserted] = index.try_emplace(label, labels.size());
    if (inserted) {
      labels.push_back(label);
      keys.push_back(key);
      values.emplace_back();
    }
    values[it->second].push_back(r.peak_g);
  }
  std::vector<GroupSummary> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.push_back({labels[i], keys[i], summarize(values[i])});
  }
  return out;
}

BucketSummary bucket_fractions(const SampleSet& samples, double evaluation_position,
                               double low_threshold_g, double high_threshold_g) {
  // Records of one case are contiguous and sorted by position.
  BucketSummary out;
  std::size_t i = 0;
  while (i < samples.records.size()) {
    std::size_t end = i;
    while (end < samples.records.size() &&
           samples.records[end].case_index == samples.records[i].case_index) {
      ++end;
    }
    const SampleRecord* best = nullptr;
    for (std::size_t k = i; k < end; ++k) {
      const auto& r = samples.records[k];
      if (best == nullptr ||
          std::abs(r.position - evaluation_position) < std::abs(best->position - evaluation_position)) {
        best = &r;
      }
    }
    // The nearest node must lie within half of the element holding the point.
    bool bracketed = false;
    for (std::size_t k = i; k + 1 < end; ++k) {
      const double a = samples.records[k].position;
      const double b = samples.records[k + 1].position;
      if (evaluation_position >= a && evaluation_position <= b) {
        bracketed = std::abs(best->position - evaluation_position) <= 0.5 * (b - a);
        break;
      }
    }
    if (end - i == 1) bracketed = best->position == evaluation_position;
    if (bracketed) {
      if (best->peak_g <= low_threshold_g) {
        ++out.count_below;
      } else if (best->peak_g <= high_threshold_g) {
        ++out.count_between;
      } else {
        ++out.count_above;
      }
    }
    i = end;
  }
  const std::size_t total = out.count_below + out.count_between + out.count_above;
  if (total == 0) {
    throw Error(ErrorCode::NoSamplesAtPosition, "no samples near the evaluation position");
  }
  out.below_1g = static_cast<double>(out.count_below) / static_cast<double>(total);
  out.between_1_and_5g = static_cast<double>(out.count_between) / static_cast<double>(total);
  out.above_5g = static_cast<double>(out.count_above) / static_cast<double>(total);
  return out;
}

SampleSet filter_position_set(const SampleSet& samples, int position_set) {
  SampleSet out;
  std::vector<int> remap(samples.cases.size(), -1);
  for (std::size_t i = 0; i < samples.cases.size(); ++i) {
    if (samples.cases[i].position_set == position_set) {
      remap[i] = static_cast<int>(out.cases.size());
      out.cases.push_back(samples.cases[i]);
    }
  }
  for (const auto& r : samples.records) {
    if (remap[r.case_index] >= 0) out.records.push_back({remap[r.case_index], r.position, r.peak_g});
  }
  for (const auto& s : samples.skipped) {
    for (const auto& c : out.cases) {
      if (c.id == s.case_id) out.skipped.push_back(s);
    }
  }
  return out;
}

std::vector<Interval> dead_zones(const PeakAccelerationField& field, double threshold_g) {
  const auto& x = field.positions;
  const auto& y = field.peaks_g;
  std::vector<Interval> out;
  auto append = [&](double a, double b) {
    if (!out.empty() && out.back().end >= a) {
      out.back().end = std::max(out.back().end, b);
    } else {
      out.push_back({a, b});
    }
  };
  if (x.size() == 1) {
    if (y[0] < threshold_g) out.push_back({x[0], x[0]});
    return out;
  }
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double y0 = y[i];
    const double y1 = y[i + 1];
    const bool dead0 = y0 < threshold_g;
    const bool dead1 = y1 < threshold_g;
    if (dead0 && dead1) {
      append(x[i], x[i + 1]);
    } else if (dead0) {
      const double xc = x[i] + (threshold_g - y0) / (y1 - y0) * (x[i + 1] - x[i]);
      append(x[i], xc);
    } else if (dead1) {
      const double xc = x[i] + (threshold_g - y0) / (y1 - y0) * (x[i + 1] - x[i]);
      append(xc, x[i + 1]);
    }
  }
  return out;
}

double total_measure(const std::vector<Interval>& intervals) {
  double sum = 0.0;
  for (const auto& i : intervals) sum += i.measure();
  return sum;
}

std::vector<Interval> nullification_union(const std::vector<PeakAccelerationField>& fields,
                                          double threshold_g) {
  if (fields.empty()) return {};
  PeakAccelerationField envelope = fields.front();
  for (std::size_t f = 1; f < fields.size(); ++f) {
    if (fields[f].positions != envelope.positions) {
      throw Error(ErrorCode::GridMismatch, "fields do not share a position grid");
    }
    for (std::size_t k = 0; k < envelope.peaks_g.size(); ++k) {
      envelope.peaks_g[k] = std::max(envelope.peaks_g[k], fields[f].peaks_g[k]);
    }
  }
  return dead_zones(envelope, threshold_g);
}

std::string join_tuple(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += units::format_17g(values[i]);
  }
  return out;
}

}  // namespace hapticbar
