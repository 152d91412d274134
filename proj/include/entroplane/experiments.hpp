#pragma once

// Sampling experiments and the file formats behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "entroplane/measures.hpp"
#include "entroplane/plane.hpp"

namespace entroplane {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Family { E0, E1, Separable, FullRank };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);
std::vector<std::string> param_names(Family family);

/// One sampled state: its generating parameters and the derived metrics.
/// For the separable and full-rank ensembles the parameters are the 32
/// real and imaginary parts of the matrix, row-major.
struct SampleRecord {
  Family family = Family::E0;
  std::vector<double> params;
  double c = 0.0;
  double s = 0.0;
  double gap_a = 0.0;
  double gap_b = 0.0;
  double chsh = 0.0;
  RegionLabel region = RegionLabel::NonPhysical;
};

std::vector<double> draw_params(Family family, RngStream& rng);
DensityMatrix state_from_params(Family family, std::span<const double> params);
SampleRecord make_record(Family family, std::vector<double> params);

struct SamplingPlan {
  Family family = Family::E0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint32_t streams = 1;
};

/// Number of samples drawn by `stream`: the plan's n split into contiguous
/// blocks, the first n % streams blocks one larger.
std::uint64_t stream_share(const SamplingPlan& plan, std::uint32_t stream);

/// All records of one stream, in draw order.
std::vector<SampleRecord> sample_stream(const SamplingPlan& plan,
                                        std::uint32_t stream);

std::string samples_csv_header(Family family);
std::string format_sample_row(const SampleRecord& record);

/// Full CSV text (header and rows, streams concatenated in index order).
/// The output depends only on the plan, not on the worker count.
std::string samples_csv(const SamplingPlan& plan);

/// Parses a CSV produced by samples_csv. Throws ParseError.
std::vector<SampleRecord> read_samples_csv(std::istream& in);

struct RunManifest {
  std::string family;
  std::uint64_t seed = 0;
  std::uint32_t streams = 1;
  std::uint64_t n = 0;
  std::string sampler_id;
  std::string tool_version;
  std::string timestamp;
  std::string csv_sha256;
};

RunManifest make_manifest(const SamplingPlan& plan, const std::string& csv_text);
nlohmann::json to_json(const RunManifest& manifest);

std::string sha256_hex(std::string_view data);

/// Metrics reported for a single state.
struct StateReport {
  double purity = 0.0;
  double linear_entropy = 0.0;
  double von_neumann = 0.0;
  double von_neumann_a = 0.0;
  double von_neumann_b = 0.0;
  double renyi2 = 0.0;
  double conditional_renyi2 = 0.0;
  double conditional_tsallis2 = 0.0;
  ConcurrenceSpectrum concurrence;
  ViolationReport violation;
  double chsh_max = 0.0;
  RegionLabel region = RegionLabel::NonPhysical;
};

StateReport analyze_state(const DensityMatrix& rho);
nlohmann::json to_json(const StateReport& report);

nlohmann::json to_json(const AreaReport& report);
std::string format_region_table(const AreaReport& entropic, const AreaReport& chsh);

/// Boundary curves on a c-grid of the given step; the region junctions
/// 1/2, 2/3 and 1/sqrt2 are always included. Header
/// `c,frontier,s_l_minus,s_l_plus,nv_lower`; undefined values are empty.
std::string curves_csv(double step);
/// CHSH label runs, header `c,s_lo,s_hi,label`.
std::string chsh_runs_csv(const std::vector<ChshSlice>& slices);

enum class PlotKind { Plane, Scatter, Overlay };
PlotKind plot_kind_from_string(std::string_view name);

struct PlotInputs {
  std::string curves_csv = "curves.csv";
  std::string samples_csv = "samples.csv";
  std::string chsh_csv = "chsh.csv";
  std::string image = "plane.png";
};

/// A gnuplot script that renders the requested figure from the CSV files.
std::string plot_script(PlotKind kind, const PlotInputs& inputs);

/// Formats a double with 17 significant digits.
std::string format_real(double value);

}  // namespace entroplane
