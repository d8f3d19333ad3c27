#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/schwarz.hpp"

namespace fspace {

enum class ProblemKind { laplace1d, laplace2d };

inline const char* to_string(ProblemKind kind) {
  return kind == ProblemKind::laplace1d ? "laplace1d" : "laplace2d";
}

inline ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "laplace1d") return ProblemKind::laplace1d;
  if (name == "laplace2d") return ProblemKind::laplace2d;
  throw InvalidSpec("unknown problem kind: " + name);
}

// Desk-scale Dirichlet Laplacian instances: n interior points per dimension,
// split into N overlapping strips (2D strips are bands of grid rows).
struct ProblemSpec {
  ProblemKind kind = ProblemKind::laplace1d;
  std::size_t n = 0;
  std::size_t subdomains = 1;
  std::size_t overlap = 1;
};

namespace detail {

// width of each sliding strip: N strips of width w shifted across n cells
// can afford a pairwise overlap of overlap only if N*w >= n + (N-1)*overlap
inline std::size_t strip_width(std::size_t n, std::size_t count, std::size_t overlap) {
  const std::size_t padded = n + (count - 1) * overlap;
  return (padded + count - 1) / count;
}

}  // namespace detail

inline void validate(const ProblemSpec& spec) {
  if (spec.n == 0) throw InvalidSpec("n must be positive");
  if (spec.subdomains == 0) throw InvalidSpec("subdomain count must be positive");
  if (spec.overlap == 0) throw InvalidSpec("overlap must be positive");
  if (spec.subdomains > spec.n)
    throw InvalidSpec("more subdomains than strip cells: n >= N required");
  if (detail::strip_width(spec.n, spec.subdomains, spec.overlap) > spec.n)
    throw InvalidSpec("strips cannot cover: overlap too large for n and N");
}

inline std::size_t problem_dim(const ProblemSpec& spec) {
  return spec.kind == ProblemKind::laplace1d ? spec.n : spec.n * spec.n;
}

// Unscaled finite-difference stencils; SPD by diagonal dominance plus
// irreducibility, confirmed by the Cholesky gate in tests.
inline DenseSymMatrix laplacian(const ProblemSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  if (spec.kind == ProblemKind::laplace1d) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 2.0;
      if (i + 1 < n) {
        m(i, i + 1) = -1.0;
        m(i + 1, i) = -1.0;
      }
    }
    return DenseSymMatrix(m);
  }
  const std::size_t dim = n * n;
  DenseMatrix m(dim, dim);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t i = r * n + c;
      m(i, i) = 4.0;
      if (c + 1 < n) {
        m(i, i + 1) = -1.0;
        m(i + 1, i) = -1.0;
      }
      if (r + 1 < n) {
        m(i, i + n) = -1.0;
        m(i + n, i) = -1.0;
      }
    }
  return DenseSymMatrix(m);
}

// N sliding windows of equal width over the strip cells, with starts spread
// evenly by rounding; adjacent windows share at least `overlap` cells and the
// last window is flush with the end.
inline Decomposition strip_decomposition(const ProblemSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  const std::size_t count = spec.subdomains;
  const std::size_t width = detail::strip_width(n, count, spec.overlap);

  std::vector<std::size_t> starts(count, 0);
  for (std::size_t i = 1; i < count; ++i) {
    const double exact = static_cast<double>(i) * static_cast<double>(n - width) /
                         static_cast<double>(count - 1);
    starts[i] = static_cast<std::size_t>(std::llround(exact));
  }

  std::vector<std::vector<std::size_t>> subs(count);
  if (spec.kind == ProblemKind::laplace1d) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t k = 0; k < width; ++k) subs[i].push_back(starts[i] + k);
  } else {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t r = starts[i]; r < starts[i] + width; ++r)
        for (std::size_t c = 0; c < n; ++c) subs[i].push_back(r * n + c);
  }
  return Decomposition(problem_dim(spec), subs);
}

// key=value lines; '#' starts a comment; kind and n are required, subdomain
// count and overlap default to 1.
inline ProblemSpec parse_problem_config(const std::string& text) {
  ProblemSpec spec;
  bool have_kind = false;
  bool have_n = false;

  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const std::size_t first = s.find_first_not_of(ws);
    if (first == std::string::npos) return std::string();
    const std::size_t last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
  };
  auto parse_count = [&](const std::string& value, const std::string& key) {
    std::size_t pos = 0;
    unsigned long long parsed = 0;
    try {
      parsed = std::stoull(value, &pos);
    } catch (const std::exception&) {
      throw InvalidSpec("bad value for " + key + ": " + value);
    }
    if (pos != value.size() || value[0] == '-')
      throw InvalidSpec("bad value for " + key + ": " + value);
    return static_cast<std::size_t>(parsed);
  };

  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw InvalidSpec("expected key=value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw InvalidSpec("empty value for " + key);

    if (key == "kind") {
      spec.kind = problem_kind_from_string(value);
      have_kind = true;
    } else if (key == "n") {
      spec.n = parse_count(value, key);
      have_n = true;
    } else if (key == "subdomains") {
      spec.subdomains = parse_count(value, key);
    } else if (key == "overlap") {
      spec.overlap = parse_count(value, key);
    } else {
      throw InvalidSpec("unknown config key: " + key);
    }
  }

  if (!have_kind) throw InvalidSpec("config missing kind");
  if (!have_n) throw InvalidSpec("config missing n");
  validate(spec);
  return spec;
}

inline std::string problem_config_text(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "kind=" << to_string(spec.kind) << "\n";
  out << "n=" << spec.n << "\n";
  out << "subdomains=" << spec.subdomains << "\n";
  out << "overlap=" << spec.overlap << "\n";
  return out.str();
}

}  // namespace fspace
