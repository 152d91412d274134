// entroplane: command-line front end for the entropy-concurrence plane.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "entroplane/acceptance.hpp"
#include "entroplane/experiments.hpp"

namespace ep = entroplane;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("cannot read '{}'", path));
  return buf.str();
}

// "-" or empty writes to stdout.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << text;
  out.close();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
}

struct StateArgs {
  std::string family;
  std::string matrix;
  double a = 0.0, b = 0.0, f = 0.0, c = 0.0, d = 0.0, theta = 0.0, phi = 0.0;
};

ep::DensityMatrix build_state(const StateArgs& s) {
  if (!s.matrix.empty()) return ep::parse_density_text(read_file(s.matrix));
  if (s.family == "e0") return ep::e0_state({s.a, s.b, s.c, s.theta});
  if (s.family == "e1") return ep::e1_state({s.a, s.b, s.f, s.c, s.d, s.theta, s.phi});
  if (s.family == "mems1") return ep::mems1(s.c, s.theta);
  if (s.family == "mems2") return ep::mems2(s.c, s.theta);
  throw CLI::ValidationError("--family", "expected e0, e1, mems1 or mems2");
}

int cmd_state(const StateArgs& args) {
  const ep::DensityMatrix rho = build_state(args);
  write_output("-", ep::to_json(ep::analyze_state(rho)).dump(2) + "\n");
  return kExitOk;
}

struct RegionsArgs {
  double tol = ep::acceptance::kEntropicAreaTol;
  int resolution = 2000;
  bool json = false;
};

int cmd_regions(const RegionsArgs& args) {
  const ep::AreaReport entropic = ep::entropic_region_areas(args.tol);
  const ep::AreaReport chsh = ep::chsh_region_areas(args.resolution);
  if (args.json) {
    const nlohmann::json j{{"entropic", ep::to_json(entropic)},
                           {"chsh", ep::to_json(chsh)}};
    write_output("-", j.dump(2) + "\n");
  } else {
    write_output("-", ep::format_region_table(entropic, chsh));
  }
  return kExitOk;
}

struct SampleArgs {
  std::string family = "e1";
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint32_t streams = 1;
  std::string out = "-";
};

int cmd_sample(const SampleArgs& args) {
  const ep::SamplingPlan plan{ep::family_from_string(args.family), args.n, args.seed,
                              args.streams};
  const std::string csv = ep::samples_csv(plan);
  write_output(args.out, csv);
  if (!args.out.empty() && args.out != "-") {
    write_output(args.out + ".manifest.json",
                 ep::to_json(ep::make_manifest(plan, csv)).dump(2) + "\n");
  }
  return kExitOk;
}

struct CurvesArgs {
  double step = 0.005;
  std::string out = "-";
  std::string chsh_out;
  int resolution = 400;
};

int cmd_curves(const CurvesArgs& args) {
  write_output(args.out, ep::curves_csv(args.step));
  if (!args.chsh_out.empty())
    write_output(args.chsh_out, ep::chsh_runs_csv(ep::chsh_slices(args.resolution)));
  return kExitOk;
}

struct PlotArgs {
  std::string kind = "plane";
  ep::PlotInputs inputs;
  std::string out = "-";
};

int cmd_plotscript(const PlotArgs& args) {
  write_output(args.out, ep::plot_script(ep::plot_kind_from_string(args.kind), args.inputs));
  return kExitOk;
}

int cmd_verify(const ep::acceptance::Options& options) {
  int failed = 0;
  int total = 0;
  ep::acceptance::run_all(options, [&](const ep::acceptance::CriterionResult& r) {
    ++total;
    if (!r.passed) ++failed;
    fmt::print("{} ({:.2f}s)\n", ep::acceptance::format_result(r), r.seconds);
    std::fflush(stdout);
  });
  fmt::print("{} of {} checks passed\n", total - failed, total);
  return failed == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-concurrence plane toolkit"};
  app.set_version_flag("--version", std::string(ep::kToolVersion));
  app.require_subcommand(1);

  StateArgs state;
  auto* state_cmd = app.add_subcommand("state", "Metrics of one two-qubit state as JSON");
  auto* family_opt = state_cmd->add_option("--family", state.family, "e0, e1, mems1 or mems2")
                         ->check(CLI::IsMember({"e0", "e1", "mems1", "mems2"}));
  auto* matrix_opt = state_cmd->add_option("--matrix", state.matrix, "Density-matrix text file");
  family_opt->excludes(matrix_opt);
  state_cmd->add_option("--a", state.a);
  state_cmd->add_option("--b", state.b);
  state_cmd->add_option("--f", state.f);
  state_cmd->add_option("--c", state.c);
  state_cmd->add_option("--d", state.d);
  state_cmd->add_option("--theta", state.theta);
  state_cmd->add_option("--phi", state.phi);

  RegionsArgs regions;
  auto* regions_cmd = app.add_subcommand("regions", "Entropic and CHSH region areas");
  regions_cmd->add_option("--tol", regions.tol, "Quadrature tolerance")
      ->check(CLI::PositiveNumber);
  regions_cmd->add_option("--resolution", regions.resolution, "CHSH scan cells in c")
      ->check(CLI::Range(2, 1'000'000));
  regions_cmd->add_flag("--json", regions.json, "Emit JSON");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Seeded random states as CSV");
  sample_cmd->add_option("--family", sample.family)
      ->check(CLI::IsMember({"e0", "e1", "separable", "full_rank"}));
  sample_cmd->add_option("--n", sample.n)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--streams", sample.streams)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--out", sample.out, "CSV path; a manifest is written next to it");

  CurvesArgs curves;
  auto* curves_cmd = app.add_subcommand("curves", "Boundary curves as CSV");
  curves_cmd->add_option("--step", curves.step)->check(CLI::PositiveNumber);
  curves_cmd->add_option("--out", curves.out);
  curves_cmd->add_option("--chsh-out", curves.chsh_out, "Also write CHSH label runs");
  curves_cmd->add_option("--resolution", curves.resolution, "CHSH slices")
      ->check(CLI::Range(2, 1'000'000));

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plotscript", "gnuplot script for a figure");
  plot_cmd->add_option("--kind", plot.kind)->check(CLI::IsMember({"plane", "scatter", "overlay"}));
  plot_cmd->add_option("--curves", plot.inputs.curves_csv);
  plot_cmd->add_option("--samples", plot.inputs.samples_csv);
  plot_cmd->add_option("--chsh", plot.inputs.chsh_csv);
  plot_cmd->add_option("--image", plot.inputs.image);
  plot_cmd->add_option("--out", plot.out);

  ep::acceptance::Options verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--resolution", verify.chsh_resolution)->check(CLI::Range(2, 1'000'000));
  verify_cmd->add_option("--consistency-samples", verify.consistency_samples);
  verify_cmd->add_option("--property-samples", verify.property_samples);
  verify_cmd->add_option("--detection-samples", verify.detection_samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*state_cmd) {
      if (state.family.empty() && state.matrix.empty()) {
        std::cerr << "state: one of --family or --matrix is required\n";
        return kExitUsage;
      }
      return cmd_state(state);
    }
    if (*regions_cmd) return cmd_regions(regions);
    if (*sample_cmd) return cmd_sample(sample);
    if (*curves_cmd) return cmd_curves(curves);
    if (*plot_cmd) return cmd_plotscript(plot);
    if (*verify_cmd) return cmd_verify(verify);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ep::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ep::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
