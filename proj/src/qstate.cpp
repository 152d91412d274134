#include "entroplane/qstate.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace entroplane {

template <std::size_t N>
State<N> State<N>::make(const CMatrix<N>& m) {
  if (!m.all_finite()) throw NonFinite("density matrix has non-finite entries");
  const double defect = m.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw NotHermitian(fmt::format(
        "density matrix is not Hermitian: max |rho - rho^H| = {:.3e}", defect));
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex{1.0}) > kTraceTolerance) {
    throw TraceNotOne(fmt::format("density matrix trace is {:.17g}{:+.3e}i",
                                  tr.real(), tr.imag()));
  }
  const auto eig = hermitian_eigen(m);
  const double smallest = eig.eigenvalues[N - 1];
  if (smallest < -kPsdClamp) {
    throw NotPSD(fmt::format(
        "density matrix has negative eigenvalue {:.6e}", smallest));
  }
  return State(m, eig.eigenvalues);
}

template class State<2>;
template class State<4>;

DensityMatrix make_density(const CMatrix4::Rows& entries) {
  return DensityMatrix::make(CMatrix4::from_rows(entries));
}

DensityMatrix make_density(const CMatrix4& m) { return DensityMatrix::make(m); }

ReducedDensity partial_trace_B_out(const DensityMatrix& rho) {
  CMatrix2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) r(i, j) += rho(2 * i + k, 2 * j + k);
  return ReducedDensity::make(r);
}

ReducedDensity partial_trace_A_out(const DensityMatrix& rho) {
  CMatrix2 r;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t i = 0; i < 2; ++i) r(k, l) += rho(2 * i + k, 2 * i + l);
  return ReducedDensity::make(r);
}

CMatrix4 partial_transpose(const DensityMatrix& rho) {
  CMatrix4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = rho(2 * j + k, 2 * i + l);
  return r;
}

double linear_entropy(const DensityMatrix& rho) {
  return 4.0 / 3.0 * (1.0 - purity(rho));
}

namespace {

double parse_number(std::string_view token, int line, int field) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty() || !std::isfinite(value)) {
    throw ParseError(fmt::format("line {}, field {}: '{}' is not a finite number",
                                 line, field, token),
                     line, field);
  }
  return value;
}

}  // namespace

DensityMatrix parse_density_text(std::string_view text) {
  CMatrix4::Rows rows{};
  int row = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty()) continue;
    if (row == 4) {
      throw ParseError(fmt::format("line {}: more than 4 matrix rows", line_no),
                       line_no, 0);
    }
    if (tokens.size() != 4) {
      throw ParseError(fmt::format("line {}: expected 4 entries, found {}",
                                   line_no, tokens.size()),
                       line_no, static_cast<int>(tokens.size()));
    }
    for (std::size_t col = 0; col < 4; ++col) {
      const int field = static_cast<int>(col) + 1;
      const std::string_view tok = tokens[col];
      const std::size_t comma = tok.find(',');
      if (comma == std::string_view::npos ||
          tok.find(',', comma + 1) != std::string_view::npos) {
        throw ParseError(fmt::format("line {}, field {}: expected 're,im', got '{}'",
                                     line_no, field, tok),
                         line_no, field);
      }
      const double re = parse_number(tok.substr(0, comma), line_no, field);
      const double im = parse_number(tok.substr(comma + 1), line_no, field);
      rows[row][col] = Complex{re, im};
    }
    ++row;
  }
  if (row != 4) {
    throw ParseError(fmt::format("expected 4 matrix rows, found {}", row),
                     line_no, 0);
  }
  return make_density(rows);
}

std::string format_density_text(const DensityMatrix& rho) {
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (j > 0) out += ' ';
      out += fmt::format("{:.17g},{:.17g}", rho(i, j).real(), rho(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace entroplane
