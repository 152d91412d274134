#include "entroplane/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "entroplane/parallel.hpp"

namespace entroplane::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Samples per RNG stream in the bulk checks. Stream indices are derived from
// a per-check base so that checks never share a stream.
constexpr std::uint64_t kChunk = 10'000;

template <class Counts, class Body>
Counts chunked(std::uint64_t n, std::uint64_t seed, std::uint64_t stream_base,
               Body&& body) {
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Counts> partial(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    RngStream rng(seed, stream_base + k);
    const std::uint64_t begin = k * kChunk;
    const std::uint64_t end = std::min(n, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) body(partial[k], rng, i);
  });
  Counts total{};
  for (const auto& p : partial) total += p;
  return total;
}

struct Tally {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t hits = 0;  // informative secondary count
  double worst = 0.0;

  Tally& operator+=(const Tally& o) {
    checked += o.checked;
    failures += o.failures;
    hits += o.hits;
    worst = std::max(worst, o.worst);
    return *this;
  }
};

struct ConsistencyTally {
  ConsistencyCounts counts;
  std::uint64_t nonphysical = 0;

  ConsistencyTally& operator+=(const ConsistencyTally& o) {
    counts.samples += o.counts.samples;
    counts.excluded += o.counts.excluded;
    counts.v_checked += o.counts.v_checked;
    counts.nv_checked += o.counts.nv_checked;
    counts.counterexamples += o.counts.counterexamples;
    nonphysical += o.nonphysical;
    return *this;
  }
};

DensityMatrix draw_state(Family family, RngStream& rng) {
  switch (family) {
    case Family::E0: return e0_state(sample_e0(rng));
    case Family::E1: return e1_state(sample_e1(rng));
    case Family::Separable: return sample_separable(rng);
    case Family::FullRank: return sample_full_rank(rng);
  }
  throw DomainError("unknown family");
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

bool within_percent(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

}  // namespace

CriterionResult judge_entropic_areas(const AreaReport& r, double seconds) {
  const PublishedPercentages& p = kPublishedEntropic;
  const double exact_total = 52.0 / 81.0;
  const double exact_nv = 7.0 / 81.0;
  const double exact_nv_percent = 700.0 / 52.0;
  const double rel_total = std::abs(r.total_area - exact_total) / exact_total;
  const double rel_nv = std::abs(r.nv_area - exact_nv) / exact_nv;
  const double rel_nv_pct = std::abs(r.nv_percent - exact_nv_percent) / exact_nv_percent;
  const double percent_sum = r.v_percent + r.zero_percent + r.nv_percent;
  const double percent_tol = 100.0 * r.tolerance / r.total_area;

  const bool near_reference =
      within_percent(r.v_percent, p.v, kEntropicPercentTolerance) &&
      within_percent(r.zero_percent, p.zero, kEntropicPercentTolerance) &&
      within_percent(r.nv_percent, p.nv, kEntropicPercentTolerance);
  const bool analytic = rel_total <= kAnalyticRelativeTolerance &&
                        rel_nv <= kAnalyticRelativeTolerance &&
                        rel_nv_pct <= kAnalyticRelativeTolerance;
  const bool additive = std::abs(percent_sum - 100.0) <= 2.0 * percent_tol;
  const bool fast = seconds < kEntropicRuntimeLimit;

  CriterionResult out;
  out.id = "1";
  out.name = "entropic region areas";
  out.passed = near_reference && analytic && additive && fast;
  out.seconds = seconds;
  out.detail = fmt::format(
      "V/Zero/NV = {:.4f}/{:.4f}/{:.4f} % (reference {:.3f}/{:.3f}/{:.3f}, tol "
      "{} pp){}; total rel err {:.2e}, NV rel err {:.2e} (tol {:.0e}){}; sum {:.12f}{}; "
      "{:.3f}s{}",
      r.v_percent, r.zero_percent, r.nv_percent, p.v, p.zero, p.nv,
      kEntropicPercentTolerance, near_reference ? "" : " MISMATCH", rel_total, rel_nv,
      kAnalyticRelativeTolerance, analytic ? "" : " MISMATCH", percent_sum,
      additive ? "" : " NOT ADDITIVE", seconds, fast ? "" : " TOO SLOW");
  return out;
}

CriterionResult check_entropic_areas(const BoundaryCurves& curves) {
  const auto start = Clock::now();
  const AreaReport report = entropic_region_areas(kEntropicAreaTol, curves);
  return judge_entropic_areas(report, seconds_since(start));
}

CriterionResult judge_chsh_areas(const AreaReport& r, double seconds) {
  const PublishedPercentages& p = kPublishedChsh;
  const bool near_reference = within_percent(r.v_percent, p.v, kChshPercentTolerance) &&
                         within_percent(r.zero_percent, p.zero, kChshPercentTolerance) &&
                         within_percent(r.nv_percent, p.nv, kChshPercentTolerance);
  const double percent_sum = r.v_percent + r.zero_percent + r.nv_percent;
  const double percent_tol = std::max(100.0 * r.tolerance / r.total_area, 1e-9);
  const bool additive = std::abs(percent_sum - 100.0) <= 2.0 * percent_tol;
  const bool fast = seconds < kChshRuntimeLimit;
  CriterionResult out;
  out.id = "2";
  out.name = "CHSH region areas";
  out.passed = near_reference && additive && fast;
  out.seconds = seconds;
  out.detail = fmt::format(
      "V/Zero/NV = {:.4f}/{:.4f}/{:.4f} % (reference {:.3f}/{:.3f}/{:.3f}, tol {} "
      "pp){}; sum {:.12f}{}; {:.3f}s{}",
      r.v_percent, r.zero_percent, r.nv_percent, p.v, p.zero, p.nv,
      kChshPercentTolerance, near_reference ? "" : " MISMATCH", percent_sum,
      additive ? "" : " NOT ADDITIVE", seconds, fast ? "" : " TOO SLOW");
  return out;
}

CriterionResult check_chsh_areas(int resolution) {
  const auto start = Clock::now();
  const AreaReport report = chsh_region_areas(resolution);
  return judge_chsh_areas(report, seconds_since(start));
}

CriterionResult check_mems1_in_toto() {
  const auto start = Clock::now();
  constexpr int kPoints = 1000;
  const double lo = kTwoThirds;
  const double hi = kInvSqrt2;
  int failures = 0;
  double worst_gap = 0.0;
  double worst_chsh = 0.0;
  double max_chsh = 0.0;
  for (int k = 1; k <= kPoints; ++k) {
    const double c = k == kPoints ? hi : lo + (hi - lo) * k / kPoints;
    const DensityMatrix rho = mems1(c);
    const ViolationReport v = entropic_violation(rho);
    const double chsh = chsh_max(rho);
    const double gap_exact = 1.5 * c * c - c;
    const double chsh_exact = 2.0 * std::sqrt(2.0 * c * c);
    worst_gap = std::max(worst_gap, std::abs(v.gap_a - gap_exact));
    worst_chsh = std::max(worst_chsh, std::abs(chsh - chsh_exact));
    max_chsh = std::max(max_chsh, chsh);
    const bool in_region = classify_entropic({c, s_l1(c)}) == RegionLabel::V_E;
    if (!v.violates_a || chsh > 2.0 + 1e-12 || std::abs(v.gap_a - gap_exact) > 1e-12 ||
        std::abs(chsh - chsh_exact) > 1e-12 || !in_region) {
      ++failures;
    }
  }
  CriterionResult out;
  out.id = "3";
  out.name = "MEMS I violates the entropic inequality in toto, not CHSH";
  out.passed = failures == 0;
  out.seconds = seconds_since(start);
  out.detail = fmt::format(
      "{} grid points, {} failures; max |gap - (3/2)c^2 + c| = {:.2e}, max |chsh - "
      "2 sqrt(2c^2)| = {:.2e}, max chsh = {:.15f}",
      kPoints, failures, worst_gap, worst_chsh, max_chsh);
  return out;
}

CriterionResult check_curve_anchors() {
  const auto start = Clock::now();
  struct Anchor {
    const char* what;
    double value;
    double expected;
  };
  std::vector<Anchor> anchors{
      {"S_L-(1/sqrt2)", s_l_minus(kInvSqrt2), 0.5},
      {"S_L+(1/sqrt2)", s_l_plus(kInvSqrt2), 0.5},
      {"S_L1(1/2)", s_l1(0.5), kTwoThirds},
      {"S_L1(2/3)", s_l1(kTwoThirds), 16.0 / 27.0},
      {"S_L2(2/3)", s_l2(kTwoThirds), 16.0 / 27.0},
      {"frontier(2/3)", frontier_mems(kTwoThirds), 16.0 / 27.0},
      {"S_L-(0)", s_l_minus(0.0), 0.0},
  };
  // NV lower bound continuity at c = 1/2: 2/3 on the left, S_L1 on the right.
  const double nv_left = kTwoThirds;
  anchors.push_back({"NV lower bound jump at 1/2", s_l1(0.5) - nv_left, 0.0});

  // The junction row of the emitted curves file.
  std::istringstream csv(curves_csv(0.01));
  std::string line;
  double junction = NAN;
  while (std::getline(csv, line)) {
    if (line.rfind(format_real(kTwoThirds) + ",", 0) == 0) {
      const auto comma = line.find(',');
      junction = std::stod(line.substr(comma + 1, line.find(',', comma + 1) - comma - 1));
    }
  }
  anchors.push_back({"curves.csv frontier at c = 2/3", junction, 16.0 / 27.0});

  std::string failed;
  double worst = 0.0;
  for (const auto& a : anchors) {
    const double err = std::abs(a.value - a.expected);
    worst = std::max(worst, std::isnan(err) ? INFINITY : err);
    if (!(err <= 1e-12)) failed += fmt::format(" {}={:.17g}", a.what, a.value);
  }
  CriterionResult out;
  out.id = "4";
  out.name = "curve anchors";
  out.passed = failed.empty();
  out.seconds = seconds_since(start);
  out.detail = failed.empty()
                   ? fmt::format("{} anchors, max error {:.2e}", anchors.size(), worst)
                   : "failed:" + failed;
  return out;
}

ConsistencyCounts count_consistency(Family family, std::uint64_t n,
                                    std::uint64_t seed) {
  const std::uint64_t base = family == Family::E0 ? 1'000'000 : 2'000'000;
  const ConsistencyTally t = chunked<ConsistencyTally>(
      n, seed, base, [family](ConsistencyTally& acc, RngStream& rng, std::uint64_t) {
        const DensityMatrix rho = draw_state(family, rng);
        const double c = concurrence(rho).concurrence;
        const double s = linear_entropy(rho);
        const double gap = purity(rho) - purity(partial_trace_B_out(rho));
        const bool violates = gap > kViolationThreshold;
        ++acc.counts.samples;
        const PlanePoint p = snap_to_physical({c, s});
        if (near_entropic_boundary(p, kBoundaryBand)) {
          ++acc.counts.excluded;
          return;
        }
        switch (classify_entropic(p)) {
          case RegionLabel::V_E:
            ++acc.counts.v_checked;
            if (!violates) ++acc.counts.counterexamples;
            break;
          case RegionLabel::NV_E:
            ++acc.counts.nv_checked;
            if (violates) ++acc.counts.counterexamples;
            break;
          case RegionLabel::Zero_E: break;
          case RegionLabel::NonPhysical:
            ++acc.nonphysical;
            ++acc.counts.counterexamples;
            break;
        }
      });
  return t.counts;
}

CriterionResult check_theorem_consistency(std::uint64_t n, std::uint64_t seed) {
  const auto start = Clock::now();
  const ConsistencyCounts e0 = count_consistency(Family::E0, n, seed);
  const ConsistencyCounts e1 = count_consistency(Family::E1, n, seed);
  const double seconds = seconds_since(start);
  CriterionResult out;
  out.id = "5";
  out.name = "region classifier agrees with per-state verdicts (E0, E1)";
  out.seconds = seconds;
  out.passed = e0.counterexamples == 0 && e1.counterexamples == 0 &&
               e0.v_checked > 0 && e0.nv_checked > 0 && e1.v_checked > 0 &&
               e1.nv_checked > 0 && seconds < kConsistencyRuntimeLimit;
  out.detail = fmt::format(
      "E0: {} samples, {} V / {} NV checked, {} in band, {} counterexamples; "
      "E1: {} samples, {} V / {} NV checked, {} in band, {} counterexamples; {:.1f}s{}",
      e0.samples, e0.v_checked, e0.nv_checked, e0.excluded, e0.counterexamples,
      e1.samples, e1.v_checked, e1.nv_checked, e1.excluded, e1.counterexamples, seconds,
      seconds < kConsistencyRuntimeLimit ? "" : " TOO SLOW");
  return out;
}

std::vector<CriterionResult> check_properties(std::uint64_t n_property,
                                              std::uint64_t n_detection,
                                              std::uint64_t seed) {
  std::vector<CriterionResult> results;
  auto finish = [&](const char* id, const char* name, const Tally& t,
                    Clock::time_point start, std::string detail) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.passed = t.failures == 0 && t.checked > 0;
    r.seconds = seconds_since(start);
    r.detail = std::move(detail);
    results.push_back(std::move(r));
  };

  {
    const auto start = Clock::now();
    const Tally t = chunked<Tally>(n_property, seed, 3'000'000,
                                   [](Tally& acc, RngStream& rng, std::uint64_t i) {
      const DensityMatrix rho = draw_state(i % 2 == 0 ? Family::E0 : Family::E1, rng);
      const double general = concurrence(rho).concurrence;
      const double closed = concurrence_x_closed_form(
          {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(3, 3).real()},
          rho(0, 3), rho(1, 2));
      const double err = std::abs(general - closed);
      ++acc.checked;
      acc.worst = std::max(acc.worst, err);
      if (err > 1e-10) ++acc.failures;
    });
    finish("6a", "concurrence: general route equals X-state closed form", t, start,
           fmt::format("{} states, {} failures, max diff {:.2e} (tol 1e-10)", t.checked,
                       t.failures, t.worst));
  }
  {
    const auto start = Clock::now();
    const Tally t = chunked<Tally>(n_property, seed, 4'000'000,
                                   [](Tally& acc, RngStream& rng, std::uint64_t) {
      const E0Params p = sample_e0(rng);
      const double err = std::abs(concurrence(e0_state(p)).concurrence - p.c);
      ++acc.checked;
      acc.worst = std::max(acc.worst, err);
      if (err > 1e-10) ++acc.failures;
    });
    finish("6b", "concurrence of E0 states equals c", t, start,
           fmt::format("{} states, {} failures, max diff {:.2e} (tol 1e-10)", t.checked,
                       t.failures, t.worst));
  }
  {
    const auto start = Clock::now();
    const Tally t = chunked<Tally>(n_property, seed, 5'000'000,
                                   [](Tally& acc, RngStream& rng, std::uint64_t) {
      const DensityMatrix rho = sample_full_rank(rng);
      const auto pt = hermitian_eigen(partial_transpose(rho));
      const bool ppt = pt.eigenvalues[3] >= -kPsdClamp;
      const bool zero = concurrence(rho).concurrence <= 1e-8;
      ++acc.checked;
      if (ppt) ++acc.hits;
      if (ppt != zero) ++acc.failures;
    });
    finish("6c", "PPT iff zero concurrence (full-rank states)", t, start,
           fmt::format("{} states ({} PPT), {} disagreements", t.checked, t.hits,
                       t.failures));
  }
  {
    const auto start = Clock::now();
    const Tally t = chunked<Tally>(n_property, seed, 6'000'000,
                                   [](Tally& acc, RngStream& rng, std::uint64_t) {
      const DensityMatrix rho = sample_separable(rng);
      const ViolationReport v = entropic_violation(rho);
      const double joint = von_neumann(rho);
      const double marginal = std::max(von_neumann(partial_trace_B_out(rho)),
                                       von_neumann(partial_trace_A_out(rho)));
      ++acc.checked;
      acc.worst = std::max({acc.worst, v.gap_a, v.gap_b});
      if (v.violates_any || joint < marginal - 1e-10) ++acc.failures;
    });
    finish("6d", "separable states: no entropic violation, S(AB) >= S(A), S(B)", t,
           start,
           fmt::format("{} states, {} failures, largest gap {:.2e}", t.checked,
                       t.failures, t.worst));
  }
  {
    const auto start = Clock::now();
    constexpr std::array<Family, 4> kMix{Family::E0, Family::E1, Family::Separable,
                                         Family::FullRank};
    const Tally t = chunked<Tally>(n_property, seed, 7'000'000,
                                   [&](Tally& acc, RngStream& rng, std::uint64_t i) {
      const DensityMatrix rho = draw_state(kMix[i % 4], rng);
      const double gap = entropic_violation(rho).gap_a;
      if (std::abs(gap) <= kViolationThreshold) {
        ++acc.hits;
        return;
      }
      ++acc.checked;
      const int expected = -sign_of(gap);
      if (sign_of(conditional_renyi(rho, 2.0)) != expected ||
          sign_of(conditional_tsallis(rho, 2.0)) != expected) {
        ++acc.failures;
      }
    });
    finish("6e", "sign(S2(B|A)) = sign(T2(B|A)) = -sign(gap_a)", t, start,
           fmt::format("{} states compared ({} skipped with |gap| <= 1e-12), {} "
                       "failures",
                       t.checked, t.hits, t.failures));
  }
  {
    const auto start = Clock::now();
    const Tally t = chunked<Tally>(n_detection, seed, 8'000'000,
                                   [](Tally& acc, RngStream& rng, std::uint64_t i) {
      const DensityMatrix rho = draw_state(i % 2 == 0 ? Family::E0 : Family::E1, rng);
      ++acc.checked;
      if (chsh_max(rho) > 2.0 + 1e-9) {
        ++acc.hits;
        if (!entropic_violation(rho).violates_any) ++acc.failures;
      }
    });
    finish("6f", "CHSH violation implies entropic violation", t, start,
           fmt::format("{} states, {} CHSH violators, {} not entropically detected",
                       t.checked, t.hits, t.failures));
  }
  return results;
}

CriterionResult check_determinism(std::uint64_t n, std::uint64_t seed,
                                  std::uint32_t streams) {
  const auto start = Clock::now();
  const SamplingPlan plan{Family::E1, n, seed, streams};
  const std::string first = samples_csv(plan);
  const std::string second = samples_csv(plan);
  const std::string h1 = sha256_hex(first);
  const std::string h2 = sha256_hex(second);
  CriterionResult out;
  out.id = "7";
  out.name = "sampling is byte-for-byte deterministic";
  out.passed = first == second && h1 == h2;
  out.seconds = seconds_since(start);
  out.detail = fmt::format("n={} seed={} streams={}: {} bytes, sha256 {} / {}", n, seed,
                           streams, first.size(), h1.substr(0, 16), h2.substr(0, 16));
  return out;
}

std::vector<CriterionResult> run_all(
    const Options& options,
    const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  auto guarded = [&](const char* id, const char* name, auto&& run) {
    try {
      run();
    } catch (const std::exception& e) {
      record({id, name, false, fmt::format("exception: {}", e.what()), 0.0});
    }
  };

  guarded("1", "entropic region areas", [&] { record(check_entropic_areas()); });
  guarded("2", "CHSH region areas",
          [&] { record(check_chsh_areas(options.chsh_resolution)); });
  guarded("3", "MEMS I in toto", [&] { record(check_mems1_in_toto()); });
  guarded("4", "curve anchors", [&] { record(check_curve_anchors()); });
  guarded("5", "theorem consistency", [&] {
    record(check_theorem_consistency(options.consistency_samples, options.seed));
  });
  guarded("6", "property suites", [&] {
    for (auto& r : check_properties(options.property_samples, options.detection_samples,
                                    options.seed))
      record(std::move(r));
  });
  guarded("7", "determinism", [&] {
    record(check_determinism(options.determinism_samples, options.determinism_seed,
                             options.determinism_streams));
  });
  return results;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("[{}] criterion {:<3} {}: {}", r.passed ? "PASS" : "FAIL", r.id,
                     r.name, r.detail);
}

}  // namespace entroplane::acceptance
