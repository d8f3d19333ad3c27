#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "fspace/certify.hpp"
#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/io_util.hpp"
#include "fspace/pcg.hpp"
#include "fspace/schwarz.hpp"

namespace fspace {

// Ordered "key = value" report: insertion order is preserved so that equal
// inputs serialize to byte-identical text.
class KeyValueReport {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& e : entries_)
      if (e.first == key) {
        e.second = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  void set_real(const std::string& key, double v) { set(key, detail::format_real(v)); }
  void set_count(const std::string& key, std::uint64_t v) { set(key, std::to_string(v)); }
  void set_flag(const std::string& key, bool v) { set(key, v ? "true" : "false"); }

  bool has(const std::string& key) const {
    for (const auto& e : entries_)
      if (e.first == key) return true;
    return false;
  }
  const std::string& get(const std::string& key) const {
    for (const auto& e : entries_)
      if (e.first == key) return e.second;
    throw IoError("report key missing: " + key);
  }
  double get_real(const std::string& key) const {
    const std::string& text = get(key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      throw IoError("report value for " + key + " is not a number: " + text);
    return v;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_text() const {
    std::string out;
    for (const auto& e : entries_) {
      out += e.first;
      out += " = ";
      out += e.second;
      out += '\n';
    }
    return out;
  }

  static KeyValueReport parse(const std::string& text) {
    KeyValueReport rep;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string line = text.substr(pos, eol - pos);
      pos = eol + 1;
      if (line.empty()) continue;
      const std::size_t sep = line.find(" = ");
      if (sep == std::string::npos) throw IoError("malformed report line: " + line);
      rep.set(line.substr(0, sep), line.substr(sep + 3));
    }
    return rep;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Content hash of an instance, independent of where it was loaded from, so
// in-memory and re-read runs stamp reports identically.
inline std::string instance_hash(const DenseSymMatrix& a, const Decomposition& d) {
  detail::Fnv1a h;
  h.feed("matrix ");
  h.feed(std::to_string(a.dim()));
  h.feed("\n");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      h.feed(detail::format_real(a(i, j)));
      h.feed(",");
    }
  h.feed("\ndecomposition\n");
  h.feed(d.to_text());
  return h.hex();
}

inline KeyValueReport certificate_report(const SpectralCertificate& cert, std::uint64_t seed,
                                         const std::string& instance) {
  KeyValueReport rep;
  rep.set_real("c_minus", cert.c_minus);
  rep.set_real("c_plus", cert.c_plus);
  rep.set_real("kappa", cert.kappa);
  rep.set_real("route_residuals.witness_minus", cert.route_residuals.witness_minus_residual);
  rep.set_real("route_residuals.witness_plus", cert.route_residuals.witness_plus_residual);
  rep.set_real("route_residuals.disagreement_minus", cert.route_residuals.disagreement_minus);
  rep.set_real("route_residuals.disagreement_plus", cert.route_residuals.disagreement_plus);
  rep.set_real("route_residuals.inverse_identity", cert.route_residuals.inverse_identity);
  rep.set_real("route_residuals.agreement_tolerance",
               cert.route_residuals.agreement_tolerance);
  rep.set_count("seed", seed);
  rep.set("instance_hash", instance);
  return rep;
}

inline KeyValueReport solve_report(const SolveReport& rep, double tol, std::uint64_t seed,
                                   const std::string& instance) {
  KeyValueReport out;
  out.set_count("iterations", rep.iterations);
  out.set_flag("converged", rep.converged);
  out.set_real("kappa_used", rep.kappa_used);
  out.set_count("iteration_bound", rep.iteration_bound);
  out.set_real("tol", tol);
  out.set_real("final_residual",
               rep.residual_history.empty() ? 0.0 : rep.residual_history.back());
  out.set_count("seed", seed);
  out.set("instance_hash", instance);
  return out;
}

inline std::string residual_history_csv(const std::vector<double>& history) {
  std::string out = "iteration,relative_residual\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += detail::format_real(history[k]);
    out += '\n';
  }
  return out;
}

inline void write_report_file(const std::string& path, const KeyValueReport& rep) {
  detail::atomic_write_text(path, rep.to_text());
}

inline KeyValueReport read_report_file(const std::string& path) {
  return KeyValueReport::parse(detail::read_text_file(path));
}

}  // namespace fspace
