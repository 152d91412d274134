#include "entroplane/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "entroplane/parallel.hpp"

namespace entroplane {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

std::string_view to_string(Family family) {
  switch (family) {
    case Family::E0: return "e0";
    case Family::E1: return "e1";
    case Family::Separable: return "separable";
    case Family::FullRank: return "full_rank";
  }
  return "e0";
}

Family family_from_string(std::string_view name) {
  if (name == "e0") return Family::E0;
  if (name == "e1") return Family::E1;
  if (name == "separable") return Family::Separable;
  if (name == "full_rank") return Family::FullRank;
  throw DomainError(fmt::format("unknown family '{}'", name));
}

std::vector<std::string> param_names(Family family) {
  switch (family) {
    case Family::E0: return {"p_a", "p_b", "p_c", "p_theta"};
    case Family::E1: return {"p_a", "p_b", "p_f", "p_c", "p_d", "p_theta", "p_phi"};
    case Family::Separable:
    case Family::FullRank: {
      std::vector<std::string> names;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          names.push_back(fmt::format("m{}{}_re", i, j));
          names.push_back(fmt::format("m{}{}_im", i, j));
        }
      return names;
    }
  }
  return {};
}

namespace {

std::vector<double> flatten(const DensityMatrix& rho) {
  std::vector<double> out;
  out.reserve(32);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      out.push_back(rho(i, j).real());
      out.push_back(rho(i, j).imag());
    }
  return out;
}

void require_count(std::span<const double> params, std::size_t n, Family family) {
  if (params.size() != n) {
    throw DomainError(fmt::format("family {} expects {} parameters, got {}",
                                  to_string(family), n, params.size()));
  }
}

}  // namespace

std::vector<double> draw_params(Family family, RngStream& rng) {
  switch (family) {
    case Family::E0: {
      const E0Params p = sample_e0(rng);
      return {p.a, p.b, p.c, p.theta};
    }
    case Family::E1: {
      const E1Params p = sample_e1(rng);
      return {p.a, p.b, p.f, p.c, p.d, p.theta, p.phi};
    }
    case Family::Separable: return flatten(sample_separable(rng));
    case Family::FullRank: return flatten(sample_full_rank(rng));
  }
  return {};
}

DensityMatrix state_from_params(Family family, std::span<const double> params) {
  switch (family) {
    case Family::E0:
      require_count(params, 4, family);
      return e0_state({params[0], params[1], params[2], params[3]});
    case Family::E1:
      require_count(params, 7, family);
      return e1_state({params[0], params[1], params[2], params[3], params[4],
                       params[5], params[6]});
    case Family::Separable:
    case Family::FullRank: {
      require_count(params, 32, family);
      CMatrix4::Rows rows{};
      for (std::size_t k = 0; k < 16; ++k)
        rows[k / 4][k % 4] = Complex{params[2 * k], params[2 * k + 1]};
      return make_density(rows);
    }
  }
  throw DomainError("unknown family");
}

SampleRecord make_record(Family family, std::vector<double> params) {
  const DensityMatrix rho = state_from_params(family, params);
  const ViolationReport v = entropic_violation(rho);
  SampleRecord r;
  r.family = family;
  r.params = std::move(params);
  r.c = concurrence(rho).concurrence;
  r.s = linear_entropy(rho);
  r.gap_a = v.gap_a;
  r.gap_b = v.gap_b;
  r.chsh = chsh_max(rho);
  r.region = classify_entropic(snap_to_physical({r.c, r.s}));
  return r;
}

std::uint64_t stream_share(const SamplingPlan& plan, std::uint32_t stream) {
  const std::uint64_t k = plan.streams;
  return plan.n / k + (stream < plan.n % k ? 1 : 0);
}

std::vector<SampleRecord> sample_stream(const SamplingPlan& plan,
                                        std::uint32_t stream) {
  RngStream rng(plan.seed, stream);
  const std::uint64_t count = stream_share(plan, stream);
  std::vector<SampleRecord> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out.push_back(make_record(plan.family, draw_params(plan.family, rng)));
  return out;
}

std::string samples_csv_header(Family family) {
  std::string h = "family,c,s,gap_a,gap_b,chsh,region";
  for (const auto& name : param_names(family)) h += "," + name;
  return h + "\n";
}

std::string format_sample_row(const SampleRecord& r) {
  std::string row = fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}",
                                to_string(r.family), r.c, r.s, r.gap_a, r.gap_b,
                                r.chsh, to_string(r.region));
  for (double p : r.params) {
    row += ',';
    row += format_real(p);
  }
  row += '\n';
  return row;
}

std::string samples_csv(const SamplingPlan& plan) {
  if (plan.n < 1) throw DomainError("sample count must be >= 1");
  if (plan.streams < 1) throw DomainError("stream count must be >= 1");
  std::vector<std::string> bodies(plan.streams);
  parallel_for(plan.streams, [&](std::size_t stream) {
    const auto id = static_cast<std::uint32_t>(stream);
    RngStream rng(plan.seed, id);
    const std::uint64_t count = stream_share(plan, id);
    std::string& body = bodies[stream];
    for (std::uint64_t i = 0; i < count; ++i)
      body += format_sample_row(make_record(plan.family, draw_params(plan.family, rng)));
  });
  std::string out = samples_csv_header(plan.family);
  for (const auto& body : bodies) out += body;
  return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_field(std::string_view token, int line, int field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError(fmt::format("line {}, field {}: '{}' is not a number", line,
                                 field, token),
                     line, field);
  }
  return value;
}

}  // namespace

std::vector<SampleRecord> read_samples_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty samples CSV", 1, 0);
  const auto header = split_commas(line);
  if (header.size() < 8 || header[0] != "family") {
    throw ParseError("line 1: not a samples CSV header", 1, 0);
  }
  std::vector<SampleRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("line {}: expected {} fields, found {}", line_no,
                                   header.size(), fields.size()),
                       line_no, static_cast<int>(fields.size()));
    }
    SampleRecord r;
    try {
      r.family = family_from_string(fields[0]);
      r.region = region_from_string(fields[6]);
    } catch (const DomainError& e) {
      throw ParseError(fmt::format("line {}: {}", line_no, e.what()), line_no, 1);
    }
    r.c = parse_field(fields[1], line_no, 2);
    r.s = parse_field(fields[2], line_no, 3);
    r.gap_a = parse_field(fields[3], line_no, 4);
    r.gap_b = parse_field(fields[4], line_no, 5);
    r.chsh = parse_field(fields[5], line_no, 6);
    for (std::size_t k = 7; k < fields.size(); ++k)
      r.params.push_back(parse_field(fields[k], line_no, static_cast<int>(k) + 1));
    out.push_back(std::move(r));
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunManifest make_manifest(const SamplingPlan& plan, const std::string& csv_text) {
  RunManifest m;
  m.family = std::string(to_string(plan.family));
  m.seed = plan.seed;
  m.streams = plan.streams;
  m.n = plan.n;
  m.sampler_id = fmt::format("{};sampler={}-v1", RngStream::kAlgorithm,
                             to_string(plan.family));
  m.tool_version = std::string(kToolVersion);
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.timestamp = buf;
  m.csv_sha256 = sha256_hex(csv_text);
  return m;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"family", m.family},         {"seed", m.seed},
          {"streams", m.streams},       {"n", m.n},
          {"sampler_id", m.sampler_id}, {"tool_version", m.tool_version},
          {"timestamp", m.timestamp},   {"csv_sha256", m.csv_sha256}};
}

StateReport analyze_state(const DensityMatrix& rho) {
  const ReducedDensity rho_a = partial_trace_B_out(rho);
  const ReducedDensity rho_b = partial_trace_A_out(rho);
  StateReport r;
  r.purity = purity(rho);
  r.linear_entropy = linear_entropy(rho);
  r.von_neumann = von_neumann(rho);
  r.von_neumann_a = von_neumann(rho_a);
  r.von_neumann_b = von_neumann(rho_b);
  r.renyi2 = renyi(rho, 2.0).value;
  r.conditional_renyi2 = conditional_renyi(rho, 2.0);
  r.conditional_tsallis2 = conditional_tsallis(rho, 2.0);
  r.concurrence = concurrence(rho);
  r.violation = entropic_violation(rho);
  r.chsh_max = chsh_max(rho);
  r.region = classify_entropic(
      snap_to_physical({r.concurrence.concurrence, r.linear_entropy}));
  return r;
}

nlohmann::json to_json(const StateReport& r) {
  return {
      {"purity", r.purity},
      {"linear_entropy", r.linear_entropy},
      {"von_neumann", r.von_neumann},
      {"von_neumann_a", r.von_neumann_a},
      {"von_neumann_b", r.von_neumann_b},
      {"renyi2", r.renyi2},
      {"conditional_renyi2", r.conditional_renyi2},
      {"conditional_tsallis2", r.conditional_tsallis2},
      {"concurrence", r.concurrence.concurrence},
      {"concurrence_lambdas", r.concurrence.lambdas},
      {"gap_a", r.violation.gap_a},
      {"gap_b", r.violation.gap_b},
      {"violates_a", r.violation.violates_a},
      {"violates_b", r.violation.violates_b},
      {"violates_any", r.violation.violates_any},
      {"chsh_max", r.chsh_max},
      {"chsh_violation", r.chsh_max > 2.0},
      {"region", std::string(to_string(r.region))},
  };
}

nlohmann::json to_json(const AreaReport& r) {
  return {{"criterion", r.criterion},
          {"total_area", r.total_area},
          {"areas", {{"V", r.v_area}, {"Zero", r.zero_area}, {"NV", r.nv_area}}},
          {"percent", {{"V", r.v_percent}, {"Zero", r.zero_percent}, {"NV", r.nv_percent}}},
          {"method", r.method},
          {"tolerance", r.tolerance}};
}

std::string format_region_table(const AreaReport& e, const AreaReport& h) {
  std::string out;
  out += fmt::format("{:<8} {:>14} {:>14}\n", "region", "entropic [%]", "CHSH [%]");
  out += fmt::format("{:<8} {:>14.3f} {:>14.3f}\n", "V", e.v_percent, h.v_percent);
  out += fmt::format("{:<8} {:>14.3f} {:>14.3f}\n", "Zero", e.zero_percent, h.zero_percent);
  out += fmt::format("{:<8} {:>14.3f} {:>14.3f}\n", "NV", e.nv_percent, h.nv_percent);
  out += fmt::format("{:<8} {:>14.9f} {:>14.9f}\n", "area", e.total_area, h.total_area);
  return out;
}

std::string curves_csv(double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw DomainError("curve step must be positive");
  std::set<double> grid{0.5, kTwoThirds, kInvSqrt2, 1.0};
  const auto count = static_cast<long long>(std::floor(1.0 / step + 1e-9));
  for (long long k = 0; k <= count; ++k)
    grid.insert(std::min(1.0, static_cast<double>(k) * step));

  auto field = [](bool defined, double value) {
    return defined ? format_real(value) : std::string{};
  };
  std::string out = "c,frontier,s_l_minus,s_l_plus,nv_lower\n";
  for (double c : grid) {
    const bool has_frontier = c > 0.0;
    const bool has_pm = c <= kInvSqrt2;
    double nv_lower = 0.0;
    bool has_nv = false;
    if (c > 0.0 && c < 0.5) {
      nv_lower = kTwoThirds;
      has_nv = true;
    } else if (c >= 0.5 && c < kTwoThirds) {
      nv_lower = s_l1(c);
      has_nv = true;
    }
    out += fmt::format("{},{},{},{},{}\n", format_real(c),
                       field(has_frontier, has_frontier ? frontier_mems(c) : 0.0),
                       field(has_pm, has_pm ? s_l_minus(c) : 0.0),
                       field(has_pm, has_pm ? s_l_plus(c) : 0.0), field(has_nv, nv_lower));
  }
  return out;
}

std::string chsh_runs_csv(const std::vector<ChshSlice>& slices) {
  std::string out = "c,s_lo,s_hi,label\n";
  for (const auto& slice : slices)
    for (const auto& run : slice.runs)
      out += fmt::format("{},{},{},{}\n", format_real(slice.c), format_real(run.s_lo),
                         format_real(run.s_hi), to_string(run.label));
  return out;
}

PlotKind plot_kind_from_string(std::string_view name) {
  if (name == "plane") return PlotKind::Plane;
  if (name == "scatter") return PlotKind::Scatter;
  if (name == "overlay") return PlotKind::Overlay;
  throw DomainError(fmt::format("unknown plot kind '{}'", name));
}

std::string plot_script(PlotKind kind, const PlotInputs& in) {
  std::string s;
  s += "# gnuplot script generated by entroplane\n";
  s += "set terminal pngcairo size 900,700\n";
  s += fmt::format("set output '{}'\n", in.image);
  s += "set datafile separator ','\n";
  s += "set xlabel 'C (concurrence)'\nset ylabel 'S_L (linear entropy)'\n";
  s += "set xrange [0:1]\nset yrange [0:1]\nset key top right\n";
  const std::string curves = fmt::format(
      "'{0}' using 1:2 with lines lw 2 lc rgb 'black' title 'MEMS frontier', \\\n"
      "     '{0}' using 1:3 with lines lw 2 lc rgb 'red' title 'S_{{L-}}', \\\n"
      "     '{0}' using 1:4 with lines lw 2 lc rgb 'blue' title 'S_{{L+}}', \\\n"
      "     '{0}' using 1:5 with lines lw 2 lc rgb 'dark-green' title 'NV lower bound'",
      in.curves_csv);
  switch (kind) {
    case PlotKind::Plane:
      s += "set title 'Entropic regions on the (C, S_L) plane'\n";
      s += "plot " + curves + "\n";
      break;
    case PlotKind::Scatter:
      s += "set title 'Sampled states: violating (left) and satisfying (right)'\n";
      s += "set multiplot layout 1,2\n";
      s += fmt::format(
          "plot '{0}' every ::1 using 2:($4 > 1e-12 ? $3 : 1/0) with dots lc rgb "
          "'red' notitle, \\\n     {1}\n",
          in.samples_csv, curves);
      s += fmt::format(
          "plot '{0}' every ::1 using 2:($4 <= 1e-12 ? $3 : 1/0) with dots lc rgb "
          "'blue' notitle, \\\n     {1}\n",
          in.samples_csv, curves);
      s += "unset multiplot\n";
      break;
    case PlotKind::Overlay:
      s += "set title 'Entropic (solid) versus CHSH (dotted) region boundaries'\n";
      s += fmt::format(
          "plot {1}, \\\n"
          "     '{0}' every ::1 using 1:(stringcolumn(4) eq 'V_E' ? $3 : 1/0) with "
          "points pt 7 ps 0.2 lc rgb 'gray' title 'CHSH V upper edge', \\\n"
          "     '{0}' every ::1 using 1:(stringcolumn(4) eq 'NV_E' ? $2 : 1/0) with "
          "points pt 7 ps 0.2 lc rgb 'orange' title 'CHSH NV lower edge'\n",
          in.chsh_csv, curves);
      break;
  }
  return s;
}

}  // namespace entroplane
