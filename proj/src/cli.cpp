#include "hapticbar/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hapticbar/config.hpp"
#include "hapticbar/error.hpp"
#include "hapticbar/fem.hpp"
#include "hapticbar/modal.hpp"
#include "hapticbar/oracle.hpp"
#include "hapticbar/output.hpp"
#include "hapticbar/response.hpp"
#include "hapticbar/sweep.hpp"
#include "hapticbar/units.hpp"

#ifndef HAPTICBAR_VERSION
#define HAPTICBAR_VERSION "0.0.0"
#endif

namespace hapticbar::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string material = "aluminum";
  int elements = 30;
  int count = 5;
  std::string out_dir;
  // respond
  bool oracle = false;
  double dt = 1e-5;
  double duration = 0.5;
  double settle = 0.1;
  // sweep
  std::string preset;
  std::vector<std::string> positions;
  std::string grid = "150:250:5";
  std::vector<std::string> frequencies;
  std::string stiffness;
  bool matched = false;
  double eval_position = 0.59;
  int workers = 0;
  // deadzones
  double threshold = 1.0;
};

class Context {
 public:
  Context(std::string subcommand, std::ostream& out, const Options& opt)
      : out_(out), opt_(opt), start_(std::chrono::steady_clock::now()) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.tool_version = HAPTICBAR_VERSION;
  }

  void set_digest_source(std::string_view bytes) { manifest_.config_digest = sha256_hex(bytes); }

  bool writing() const { return !opt_.out_dir.empty(); }

  void emit(const std::string& name, std::string_view text) {
    if (!writing()) return;
    fs::create_directories(opt_.out_dir);
    write_file(fs::path(opt_.out_dir) / name, text);
    manifest_.outputs.push_back(name);
  }

  void finish() {
    if (!writing()) return;
    manifest_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file(fs::path(opt_.out_dir) / "manifest.json", to_json(manifest_).dump(2) + "\n");
  }

  std::ostream& out() { return out_; }

 private:
  std::ostream& out_;
  const Options& opt_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < s.size() && s[used] == ' ') ++used;
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::ConfigParse, "'" + s + "' is not a number");
  }
  return v;
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
  return out;
}

std::string args_digest_source(const std::vector<std::string>& args) {
  std::string joined;
  for (std::size_t i = 1; i < args.size(); ++i) joined += args[i] + '\n';
  return joined;
}

int run_validate(const Options& opt, Context& ctx) {
  StudyConfig cfg;
  if (!opt.config.empty()) {
    Scenario sc = load_scenario(opt.config);
    ctx.set_digest_source(sc.raw);
    cfg = sc.study;
  } else {
    cfg.material = material_catalog(opt.material);
    cfg.geometry = reference_geometry();
    cfg.element_count = opt.elements;
  }
  cfg.attachments.clear();
  cfg.excitations.clear();
  cfg.pinned_positions = {0.0, cfg.geometry.length};

  const AssembledSystem sys = build_system(cfg);
  const std::vector<double> fe = modes(sys).oscillatory_frequencies_hz();
  const int count = std::min<int>(opt.count, static_cast<int>(fe.size()));
  const std::vector<double> exact = analytical_pinned_frequencies(cfg.material, cfg.geometry, count);

  ctx.out() << fmt::format("pinned-pinned {} bar, {} elements, {} DOF ({} free)\n",
                           cfg.material.name, sys.mesh.element_count(), sys.mesh.dof_count(),
                           sys.size());
  ctx.out() << fmt::format("{:>4} {:>16} {:>16} {:>12}\n", "mode", "analytical_hz", "fe_hz",
                           "error_pct");
  std::string csv = "mode,analytical_hz,fe_hz,error_pct\n";
  for (int k = 0; k < count; ++k) {
    const double pct = 100.0 * std::abs(fe[k] - exact[k]) / exact[k];
    ctx.out() << fmt::format("{:>4} {:>16.4f} {:>16.4f} {:>12.6f}\n", k + 1, exact[k], fe[k], pct);
    csv += std::to_string(k + 1) + "," + units::format_17g(exact[k]) + "," +
           units::format_17g(fe[k]) + "," + units::format_17g(pct) + "\n";
  }
  ctx.emit("validate.csv", csv);
  return kExitOk;
}

int run_modes(const Options& opt, Context& ctx) {
  const Scenario sc = load_scenario(opt.config);
  ctx.set_digest_source(sc.raw);
  const AssembledSystem sys = build_system(sc.study);
  const ModalResult modal = modes(sys);

  ctx.out() << fmt::format("{} DOF, {} eigenvalues\n", sys.size(), modal.state_size());
  ctx.out() << fmt::format("{:>5} {:>16} {:>16} {:>14} {:>12}\n", "index", "real_rad_s",
                           "imag_rad_s", "freq_hz", "damping");
  const int shown = std::min(modal.state_size(), 2 * opt.count);
  for (int j = 0; j < shown; ++j) {
    ctx.out() << fmt::format("{:>5} {:>16.6g} {:>16.6g} {:>14.6f} {:>12.3e}\n", j,
                             modal.eigenvalues[j].real(), modal.eigenvalues[j].imag(),
                             modal.damped_frequencies_hz[j], modal.modal_damping[j]);
  }
  std::ostringstream csv;
  write_modes_csv(csv, modal);
  ctx.emit("modes.csv", csv.str());
  return kExitOk;
}

int run_respond(const Options& opt, Context& ctx) {
  const Scenario sc = load_scenario(opt.config);
  ctx.set_digest_source(sc.raw);
  const StudyConfig& cfg = sc.study;
  const AssembledSystem sys = build_system(cfg);
  const auto excitations = build_excitations(cfg, sys);
  const SteadyState steady = steady_state(sys, excitations);
  const PeakAccelerationField field = peak_acceleration_field(sys, steady, cfg.gravity);

  ctx.out() << fmt::format("{} DOF, {} excitation(s)\n", sys.size(), excitations.size());
  ctx.out() << fmt::format("{:>12} {:>12}\n", "position_m", "peak_g");
  for (std::size_t k = 0; k < field.positions.size(); ++k) {
    ctx.out() << fmt::format("{:>12.6f} {:>12.6f}\n", field.positions[k], field.peaks_g[k]);
  }
  const double peak_max = *std::max_element(field.peaks_g.begin(), field.peaks_g.end());
  ctx.out() << fmt::format("max peak: {:.6f} g\n", peak_max);

  json summary = {{"dofs", sys.size()}, {"max_peak_g", peak_max}};
  json freqs = json::array();
  for (const auto& e : cfg.excitations) freqs.push_back(e.frequency_hz);
  summary["excitation_frequencies_hz"] = freqs;

  if (opt.oracle) {
    double f_max = 0.0;
    for (const auto& e : cfg.excitations) f_max = std::max(f_max, e.frequency_hz);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.size());
    const Trajectory numeric = newmark_integrate(
        sys, harmonic_forcing(excitations, sys.size()), zero, zero, opt.dt, opt.duration, f_max);
    const Trajectory analytic =
        complete_response(modes(sys), steady, zero, zero, numeric.times);
    std::vector<int> rows;
    for (int node = 0; node < sys.mesh.node_count(); ++node) {
      if (auto dof = sys.translation_dof(node)) rows.push_back(*dof);
    }
    const TrajectoryError e =
        compare_trajectories(select_dofs(analytic, rows), select_dofs(numeric, rows), opt.settle);
    ctx.out() << fmt::format("oracle: max_rel_error {:.3e}, rms_rel_error {:.3e}\n", e.max_rel,
                             e.rms_rel);
    summary["oracle"] = {{"dt_s", opt.dt},
                         {"duration_s", opt.duration},
                         {"settle_s", opt.settle},
                         {"max_rel_error", e.max_rel},
                         {"rms_rel_error", e.rms_rel}};
  }

  std::ostringstream csv;
  write_field_csv(csv, field);
  ctx.emit("field.csv", csv.str());
  ctx.emit("response.json", summary.dump(2) + "\n");
  return kExitOk;
}

int run_deadzones(const Options& opt, Context& ctx) {
  const Scenario sc = load_scenario(opt.config);
  ctx.set_digest_source(sc.raw);
  std::vector<std::vector<ExcitationCommand>> sets = sc.excitation_sets;
  if (sets.empty()) sets.push_back(sc.study.excitations);

  std::vector<PeakAccelerationField> fields;
  json report = {{"threshold_g", opt.threshold}};
  json per_set = json::array();
  std::string csv = "set_index,position_m,peak_g\n";
  // One mesh for all sets so the fields share a grid.
  StudyConfig all = sc.study;
  all.excitations.clear();
  for (const auto& s : sets) all.excitations.insert(all.excitations.end(), s.begin(), s.end());
  const AssembledSystem sys = build_system(all);

  for (std::size_t i = 0; i < sets.size(); ++i) {
    StudyConfig cfg = sc.study;
    cfg.excitations = sets[i];
    const PeakAccelerationField field =
        peak_acceleration_field(sys, steady_state(sys, build_excitations(cfg, sys)), cfg.gravity);
    const auto zones = dead_zones(field, opt.threshold);
    ctx.out() << fmt::format("set {}: {} dead zone(s), total {:.6f} m\n", i, zones.size(),
                             total_measure(zones));
    for (const auto& z : zones) {
      ctx.out() << fmt::format("  [{:.6f}, {:.6f}] m\n", z.begin, z.end);
    }
    per_set.push_back({{"intervals", to_json(zones)}, {"measure_m", total_measure(zones)}});
    for (std::size_t k = 0; k < field.positions.size(); ++k) {
      csv += std::to_string(i) + "," + units::format_17g(field.positions[k]) + "," +
             units::format_17g(field.peaks_g[k]) + "\n";
    }
    fields.push_back(field);
  }
  report["sets"] = per_set;
  if (fields.size() > 1) {
    const auto residual = nullification_union(fields, opt.threshold);
    ctx.out() << fmt::format("residual after switching: {} zone(s), total {:.6f} m\n",
                             residual.size(), total_measure(residual));
    report["residual"] = {{"intervals", to_json(residual)},
                          {"measure_m", total_measure(residual)}};
  }
  ctx.emit("fields.csv", csv);
  ctx.emit("deadzones.json", report.dump(2) + "\n");
  return kExitOk;
}

int run_sweep_command(const Options& opt, Context& ctx, const std::vector<std::string>& args) {
  SweepSpec spec;
  if (!opt.config.empty()) {
    const Scenario sc = load_scenario(opt.config);
    ctx.set_digest_source(sc.raw);
    spec.base = sc.study;
    if (sc.study.attachments.empty()) {
      throw Error(ErrorCode::ConfigParse, "sweep config needs one attachment as the template");
    }
    spec.actuator = sc.study.attachments.front();
  } else {
    ctx.set_digest_source(args_digest_source(args));
    spec.base.material = material_catalog(opt.material);
    spec.base.geometry = reference_geometry();
    spec.base.element_count = opt.elements;
    spec.actuator = reference_actuator();
  }
  spec.base.attachments.clear();
  spec.base.excitations.clear();
  const double length = spec.base.geometry.length;

  if (!opt.preset.empty()) {
    spec.position_sets = preset_configurations(parse_preset_case(opt.preset), length);
  }
  for (const auto& p : opt.positions) {
    std::vector<double> set;
    for (double fraction : parse_number_list(p)) {
      set.push_back(fraction == 1.0 ? length : fraction * length);
    }
    spec.position_sets.push_back(set);
  }
  if (spec.position_sets.empty()) {
    throw Error(ErrorCode::ConfigParse, "sweep needs --preset or --positions");
  }

  const auto grid = split(opt.grid, ':');
  if (grid.size() != 3) throw Error(ErrorCode::ConfigParse, "--grid expects start:stop:step");
  spec.frequency_grid_hz =
      frequency_grid(parse_number(grid[0]), parse_number(grid[1]), parse_number(grid[2]));
  for (const auto& f : opt.frequencies) spec.frequency_tuples.push_back(parse_number_list(f));
  spec.cross_product = !opt.matched;
  for (const auto& k : split(opt.stiffness, ',')) {
    spec.stiffness_values.push_back(units::parse_quantity(k, units::Dimension::Stiffness));
  }
  spec.workers = opt.workers;
  if (spec.workers <= 0) {
    if (const char* env = std::getenv(kWorkersEnv)) spec.workers = std::atoi(env);
  }

  const SampleSet samples = run_sweep(spec);
  const double eval_x = opt.eval_position * length;

  json summary = {{"case_count", samples.cases.size()},
                  {"record_count", samples.records.size()},
                  {"evaluation_position_m", eval_x}};
  json groups = json::array();
  ctx.out() << fmt::format("{} cases, {} records, {} skipped\n", samples.cases.size(),
                           samples.records.size(), samples.skipped.size());
  ctx.out() << fmt::format("{:>3} {:>28} {:>9} {:>9} {:>9} {:>9} {:>9}  {}\n", "set",
                           "positions_m", "min_g", "q1_g", "median_g", "q3_g", "max_g",
                           fmt::format("buckets@{:.3f}m (<1g/1-5g/>5g)", eval_x));
  for (std::size_t p = 0; p < spec.position_sets.size(); ++p) {
    const SampleSet subset = filter_position_set(samples, static_cast<int>(p));
    json g = {{"position_set", p + 1}, {"positions_m", spec.position_sets[p]}};
    if (subset.records.empty()) {
      groups.push_back(g);
      continue;
    }
    const QuantileSummary stats = quantile_summary(subset, GroupBy::PositionSet).front().stats;
    g["peak_g"] = to_json(stats);
    std::string bucket_text = "n/a";
    try {
      const BucketSummary b = bucket_fractions(subset, eval_x);
      g["buckets"] = to_json(b);
      bucket_text = fmt::format("{:.3f}/{:.3f}/{:.3f}", b.below_1g, b.between_1_and_5g, b.above_5g);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSamplesAtPosition) throw;
      g["buckets"] = nullptr;
    }
    groups.push_back(g);
    ctx.out() << fmt::format("{:>3} {:>28} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f}  {}\n",
                             p + 1, join_tuple(spec.position_sets[p]).substr(0, 28), stats.min,
                             stats.q1, stats.median, stats.q3, stats.max, bucket_text);
  }
  summary["groups"] = groups;
  json skipped = json::array();
  for (const auto& s : samples.skipped) {
    skipped.push_back({{"case_id", s.case_id}, {"reason", s.reason}});
  }
  summary["skipped"] = skipped;

  if (!ctx.writing()) throw Error(ErrorCode::ConfigParse, "sweep needs --out");
  std::ostringstream csv;
  write_samples_csv(csv, samples);
  ctx.emit("samples.csv", csv.str());
  ctx.emit("summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-element vibrotactile response of beam-type touch bars", "hapticbar"};
  app.require_subcommand(1);
  Options opt;

  auto* validate = app.add_subcommand("validate", "pinned-pinned frequencies vs closed form");
  validate->add_option("--material", opt.material, "catalog material")->capture_default_str();
  validate->add_option("--elements", opt.elements, "number of elements")->capture_default_str();
  validate->add_option("--modes", opt.count, "number of modes")->capture_default_str();
  validate->add_option("--config", opt.config, "scenario file (material, geometry, mesh)");
  validate->add_option("--out", opt.out_dir, "output directory");

  auto* modes_cmd = app.add_subcommand("modes", "damped modes of a configured system");
  modes_cmd->add_option("--config", opt.config, "scenario file")->required();
  modes_cmd->add_option("--count", opt.count, "modes to print")->capture_default_str();
  modes_cmd->add_option("--out", opt.out_dir, "output directory");

  auto* respond = app.add_subcommand("respond", "steady state and peak acceleration field");
  respond->add_option("--config", opt.config, "scenario file")->required();
  respond->add_flag("--oracle", opt.oracle, "cross-check against Newmark integration");
  respond->add_option("--dt", opt.dt, "oracle time step [s]")->capture_default_str();
  respond->add_option("--duration", opt.duration, "oracle duration [s]")->capture_default_str();
  respond->add_option("--settle", opt.settle, "oracle settle window [s]")->capture_default_str();
  respond->add_option("--out", opt.out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "actuator placement / frequency / stiffness sweep");
  sweep->add_option("--config", opt.config, "scenario file; first attachment is the template");
  sweep->add_option("--material", opt.material, "catalog material")->capture_default_str();
  sweep->add_option("--elements", opt.elements, "number of elements")->capture_default_str();
  sweep->add_option("--preset", opt.preset, "single | dual | triple");
  sweep->add_option("--positions", opt.positions, "comma list of fractions of L (repeatable)");
  sweep->add_option("--grid", opt.grid, "start:stop:step in Hz")->capture_default_str();
  sweep->add_option("--frequencies", opt.frequencies,
                    "explicit per-actuator frequency tuple in Hz (repeatable)");
  sweep->add_flag("--matched", opt.matched, "all actuators share each grid frequency");
  sweep->add_option("--stiffness", opt.stiffness, "comma list, e.g. \"10 kN/m,25 kN/m\"");
  sweep->add_option("--eval-position", opt.eval_position, "bucket position as fraction of L")
      ->capture_default_str();
  sweep->add_option("--workers", opt.workers, "worker threads (0: auto)");
  sweep->add_option("--out", opt.out_dir, "output directory")->required();

  auto* deadzones = app.add_subcommand("deadzones", "sub-threshold intervals of the field");
  deadzones->add_option("--config", opt.config, "scenario file")->required();
  deadzones->add_option("--threshold", opt.threshold, "threshold in g")->capture_default_str();
  deadzones->add_option("--out", opt.out_dir, "output directory");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Context ctx(chosen->get_name(), out, opt);
  ctx.set_digest_source(args_digest_source(args));
  try {
    int code = kExitOk;
    if (chosen == validate) code = run_validate(opt, ctx);
    if (chosen == modes_cmd) code = run_modes(opt, ctx);
    if (chosen == respond) code = run_respond(opt, ctx);
    if (chosen == sweep) code = run_sweep_command(opt, ctx, args);
    if (chosen == deadzones) code = run_deadzones(opt, ctx);
    ctx.finish();
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_solver_error(e.code()) ? kExitSolverError : kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverError;
  }
}

}  // namespace hapticbar::cli
