#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/models.hpp"

namespace ptsym {

/// Shortest-safe round-trip text for a double: 17 significant digits.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Operator file contents. All matrices are d^2 x d^2 and dimensionless:
/// H in units of g, jumps in units of sqrt(rate). `o` is the optional local
/// d x d operator used for the symmetry parameter.
struct OperatorFile {
  std::size_t d = 0;
  ComplexMatrix h;
  std::vector<ComplexMatrix> jumps;
  std::optional<ComplexMatrix> o;
};

namespace detail {

inline void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
    }
    os << '\n';
  }
}

inline complex parse_entry(const std::string& tok, std::size_t line) {
  const auto comma = tok.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(tok), 0.0};
    return {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("operator file line " + std::to_string(line) + ": cannot parse entry '" + tok + "'");
  }
}

}  // namespace detail

inline void write_operator_file(std::ostream& os, const OperatorFile& f) {
  os << "d " << f.d << '\n';
  os << "H\n";
  detail::write_matrix(os, f.h);
  for (std::size_t k = 0; k < f.jumps.size(); ++k) {
    os << "JUMP " << k << '\n';
    detail::write_matrix(os, f.jumps[k]);
  }
  if (f.o) {
    os << "O\n";
    detail::write_matrix(os, *f.o);
  }
}

/// Parse the text format:
///
///   d <int>
///   H
///   <d^2 rows of d^2 whitespace-separated re,im pairs>
///   JUMP 0
///   ...
///   O            (optional, d x d)
///
/// Blank lines and lines starting with '#' are ignored.
inline OperatorFile read_operator_file(std::istream& is) {
  OperatorFile f;
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](std::string& out) {
    while (std::getline(is, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& msg) {
    throw InvalidArgument("operator file line " + std::to_string(lineno) + ": " + msg);
  };
  auto read_block = [&](std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!next(line)) fail("unexpected end of file inside a matrix block");
      std::istringstream ls(line);
      std::string tok;
      std::size_t j = 0;
      while (ls >> tok) {
        if (j >= dim) fail("too many entries in matrix row");
        m(i, j++) = detail::parse_entry(tok, lineno);
      }
      if (j != dim) fail("expected " + std::to_string(dim) + " entries, found " + std::to_string(j));
    }
    return m;
  };

  if (!next(line)) throw InvalidArgument("operator file is empty");
  {
    std::istringstream ls(line);
    std::string key;
    long long d = 0;
    if (!(ls >> key >> d) || key != "d" || d < 2) fail("first line must be 'd <int>' with d >= 2");
    f.d = static_cast<std::size_t>(d);
  }
  const std::size_t n = f.d * f.d;
  bool have_h = false;
  while (next(line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "H") {
      if (have_h) fail("duplicate H block");
      f.h = read_block(n);
      have_h = true;
    } else if (key == "JUMP") {
      std::size_t k = 0;
      if (!(ls >> k) || k != f.jumps.size()) fail("JUMP blocks must be numbered 0, 1, ... in order");
      f.jumps.push_back(read_block(n));
    } else if (key == "O") {
      if (f.o) fail("duplicate O block");
      f.o = read_block(f.d);
    } else {
      fail("unknown block label '" + key + "'");
    }
  }
  if (!have_h) throw InvalidArgument("operator file has no H block");
  if (f.jumps.empty()) throw InvalidArgument("operator file has no JUMP blocks");
  return f;
}

inline OperatorFile read_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open operator file '" + path + "'");
  return read_operator_file(in);
}

inline void write_operator_file(const std::string& path, const OperatorFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write operator file '" + path + "'");
  write_operator_file(out, f);
}

/// Dimensionless operators of a model; jump weights are folded into the jumps.
inline OperatorFile to_operator_file(const LindbladModel& m) {
  OperatorFile f;
  f.d = m.d;
  f.h = m.h_unit;
  for (std::size_t k = 0; k < m.unit_jumps.size(); ++k) {
    f.jumps.push_back(complex(std::sqrt(m.jump_weights[k])) * m.unit_jumps[k]);
  }
  if (m.local_op.size() > 0) f.o = m.local_op;
  return f;
}

/// Custom model from file operators: H -> g H, JUMP k -> sqrt(rate_factor Gamma) JUMP k.
inline LindbladModel model_from_operator_file(const OperatorFile& f, double g, double gamma,
                                              const ModelParams& params = {}) {
  detail::check_common(g, gamma, params);
  const std::size_t n = f.d * f.d;
  if (f.h.rows() != n || f.h.cols() != n) throw InvalidArgument("operator file: H is not d^2 x d^2");
  if (hermiticity_residual(f.h) > 1e-12 * std::max(1.0, max_abs(f.h))) {
    throw InvalidArgument("operator file: H is not Hermitian");
  }
  LindbladModel m;
  m.kind = ModelKind::custom;
  m.d = f.d;
  m.g = g;
  m.gamma = gamma;
  m.params = params;
  m.h_unit = f.h;
  m.unit_jumps = f.jumps;
  m.jump_weights.assign(f.jumps.size(), 1.0);
  if (f.o) {
    if (f.o->rows() != f.d || f.o->cols() != f.d) throw InvalidArgument("operator file: O is not d x d");
    m.local_op = *f.o;
  }
  m.pt = plain_pt_map(f.d);
  detail::finalize(m);
  return m;
}

}  // namespace ptsym
