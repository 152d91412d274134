#pragma once

// Exit criteria for the library, shared by `entroplane verify` and the
// acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "entroplane/experiments.hpp"

namespace entroplane::acceptance {

/// Percentages printed alongside the original region analysis.
struct PublishedPercentages {
  double v = 0.0;
  double zero = 0.0;
  double nv = 0.0;
};
inline constexpr PublishedPercentages kPublishedEntropic{28.390, 58.155, 13.455};
inline constexpr PublishedPercentages kPublishedChsh{26.577, 54.788, 18.635};

inline constexpr double kEntropicPercentTolerance = 0.05;
inline constexpr double kChshPercentTolerance = 0.3;
inline constexpr double kAnalyticRelativeTolerance = 1e-6;
inline constexpr double kEntropicAreaTol = 1e-10;
inline constexpr double kEntropicRuntimeLimit = 5.0;
inline constexpr double kChshRuntimeLimit = 60.0;
inline constexpr double kConsistencyRuntimeLimit = 180.0;
inline constexpr double kBoundaryBand = 1e-9;

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20061016;
  int chsh_resolution = 2000;
  std::uint64_t consistency_samples = 1'000'000;  // per family
  std::uint64_t property_samples = 100'000;
  std::uint64_t detection_samples = 1'000'000;
  std::uint64_t determinism_samples = 100'000;
  std::uint32_t determinism_streams = 4;
  std::uint64_t determinism_seed = 7;
};

/// Criterion 1: judges an entropic area report against the reference
/// percentages and the exact areas NV = 7/81, total = 52/81.
CriterionResult judge_entropic_areas(const AreaReport& report, double seconds);
CriterionResult check_entropic_areas(const BoundaryCurves& curves = {});

/// Criterion 2.
CriterionResult judge_chsh_areas(const AreaReport& report, double seconds);
CriterionResult check_chsh_areas(int resolution);

/// Criterion 3: MEMS I on 1000 grid points of (2/3, 1/sqrt2].
CriterionResult check_mems1_in_toto();

/// Criterion 4: curve anchors.
CriterionResult check_curve_anchors();

/// Criterion 5: classifier versus per-state verdicts on seeded E0 and E1
/// samples.
struct ConsistencyCounts {
  std::uint64_t samples = 0;
  std::uint64_t excluded = 0;
  std::uint64_t v_checked = 0;
  std::uint64_t nv_checked = 0;
  std::uint64_t counterexamples = 0;
};
ConsistencyCounts count_consistency(Family family, std::uint64_t n,
                                    std::uint64_t seed);
CriterionResult check_theorem_consistency(std::uint64_t n, std::uint64_t seed);

/// Criterion 6, one result per property (6a .. 6f).
std::vector<CriterionResult> check_properties(std::uint64_t n_property,
                                              std::uint64_t n_detection,
                                              std::uint64_t seed);

/// Criterion 7: two sampling runs give byte-identical CSV.
CriterionResult check_determinism(std::uint64_t n, std::uint64_t seed,
                                  std::uint32_t streams);

/// Runs every criterion in order, reporting each as soon as it finishes.
std::vector<CriterionResult> run_all(
    const Options& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& result);

}  // namespace entroplane::acceptance
