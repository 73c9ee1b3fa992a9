#pragma once

// File formats: field snapshots (CSV and binary), trace CSV, and the JSON
// documents for criterion, blow-up, monitor and concavity reports.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsflow/concavity.hpp"
#include "hsflow/criteria.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/integrator.hpp"

namespace hsflow {

inline constexpr const char* kTraceSchema = "hsflow.trace.v1";
inline constexpr const char* kCertificateSchema = "hsflow.certificate.v1";
inline constexpr const char* kCriterionSchema = "hsflow.criterion.v1";
inline constexpr const char* kConcavitySchema = "hsflow.concavity.v1";
inline constexpr const char* kSweepSchema = "hsflow.sweep.v1";
inline constexpr char kFieldMagic[4] = {'H', 'S', 'F', '1'};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips a double.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& tok, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw FormatError(what + ": trailing characters in '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError(what + ": cannot parse number '" + tok + "'");
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// ---- fields ---------------------------------------------------------------

/// Header line "nx,ny,lx,ly", its values, then "u1,u2,u3" and one row per node
/// in storage order (row-major in (i, j), j fastest, boundary ring included).
inline void write_field_csv(std::ostream& os, const Field3& u) {
  const GridSpec& g = u.grid();
  os << "nx,ny,lx,ly\n"
     << g.nx() << ',' << g.ny() << ',' << fmt_double(g.lx()) << ',' << fmt_double(g.ly())
     << "\nu1,u2,u3\n";
  for (const Vec3& v : u.values())
    os << fmt_double(v.x) << ',' << fmt_double(v.y) << ',' << fmt_double(v.z) << '\n';
}

inline Field3 read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("nx,ny,lx,ly", 0) != 0)
    throw FormatError("field csv: missing 'nx,ny,lx,ly' header");
  if (!std::getline(is, line)) throw FormatError("field csv: missing grid line");
  const auto head = split_csv_line(line);
  if (head.size() != 4) throw FormatError("field csv: grid line needs 4 values");
  const double nx = parse_double(head[0], "field csv nx");
  const double ny = parse_double(head[1], "field csv ny");
  if (nx < 0 || ny < 0 || nx != std::floor(nx) || ny != std::floor(ny))
    throw FormatError("field csv: nx, ny must be non-negative integers");
  Field3 u(GridSpec(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny),
                    parse_double(head[2], "field csv lx"), parse_double(head[3], "field csv ly")));
  if (!std::getline(is, line) || line.rfind("u1,u2,u3", 0) != 0)
    throw FormatError("field csv: missing 'u1,u2,u3' header");
  for (Vec3& v : u.values()) {
    if (!std::getline(is, line)) throw FormatError("field csv: truncated data");
    const auto tok = split_csv_line(line);
    if (tok.size() != 3) throw FormatError("field csv: expected 3 columns per node");
    v = {parse_double(tok[0], "field csv"), parse_double(tok[1], "field csv"),
         parse_double(tok[2], "field csv")};
  }
  return u;
}

/// "HSF1", uint64 nx, uint64 ny, double lx, double ly, then 3 doubles per
/// node in storage order. Native byte order.
inline void write_field_binary(std::ostream& os, const Field3& u) {
  const GridSpec& g = u.grid();
  const std::uint64_t nx = g.nx(), ny = g.ny();
  const double lx = g.lx(), ly = g.ly();
  os.write(kFieldMagic, 4);
  os.write(reinterpret_cast<const char*>(&nx), sizeof nx);
  os.write(reinterpret_cast<const char*>(&ny), sizeof ny);
  os.write(reinterpret_cast<const char*>(&lx), sizeof lx);
  os.write(reinterpret_cast<const char*>(&ly), sizeof ly);
  for (const Vec3& v : u.values()) {
    const double c[3] = {v.x, v.y, v.z};
    os.write(reinterpret_cast<const char*>(c), sizeof c);
  }
}

inline Field3 read_field_binary(std::istream& is) {
  char magic[4];
  std::uint64_t nx = 0, ny = 0;
  double lx = 0, ly = 0;
  if (!is.read(magic, 4) || std::string(magic, 4) != std::string(kFieldMagic, 4))
    throw FormatError("field binary: bad magic");
  if (!is.read(reinterpret_cast<char*>(&nx), sizeof nx) ||
      !is.read(reinterpret_cast<char*>(&ny), sizeof ny) ||
      !is.read(reinterpret_cast<char*>(&lx), sizeof lx) ||
      !is.read(reinterpret_cast<char*>(&ly), sizeof ly))
    throw FormatError("field binary: truncated header");
  Field3 u(GridSpec(nx, ny, lx, ly));
  for (Vec3& v : u.values()) {
    double c[3];
    if (!is.read(reinterpret_cast<char*>(c), sizeof c))
      throw FormatError("field binary: truncated data");
    v = {c[0], c[1], c[2]};
  }
  return u;
}

// ---- trace ----------------------------------------------------------------

inline void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "# " << kTraceSchema << "\n";
  os << "t,E,N,V,l2sq,gradsq,supnorm,dissipation,dt\n";
  for (const auto& r : trace.records) {
    const auto& s = r.snapshot;
    os << fmt_double(s.t) << ',' << fmt_double(s.e) << ',' << fmt_double(s.n) << ','
       << fmt_double(s.v) << ',' << fmt_double(s.l2sq) << ',' << fmt_double(s.gradsq) << ','
       << fmt_double(s.supnorm) << ',' << fmt_double(r.dissipation) << ',' << fmt_double(r.dt)
       << '\n';
  }
}

// ---- JSON -----------------------------------------------------------------

using nlohmann::ordered_json;

/// JSON cannot hold inf/nan; those map to null.
inline ordered_json json_number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

inline ordered_json json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : ordered_json(nullptr);
}

inline ordered_json to_json(const CriterionReport& r) {
  ordered_json j;
  j["h0"] = r.h0;
  j["lambda1_used"] = r.lambda1_used;
  j["e0"] = r.e0;
  j["l2sq0"] = r.l2sq0;
  j["gap"] = r.gap;
  j["li_satisfied"] = r.li_satisfied;
  j["t_bound"] = json_optional(r.t_bound);
  j["v0"] = r.v0;
  j["huang_e_threshold"] = r.huang_e_threshold;
  j["huang_v_threshold"] = r.huang_v_threshold;
  j["huang_satisfied"] = r.huang_satisfied;
  j["degenerate"] = r.degenerate;
  return j;
}

inline ordered_json to_json(const BlowupReport& r) {
  ordered_json j;
  j["detected"] = r.detected;
  j["t_detect"] = json_optional(r.t_detect);
  j["reason"] = std::string(to_string(r.reason));
  j["final_supnorm"] = json_number(r.final_supnorm);
  return j;
}

inline ordered_json series_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

/// Full per-snapshot monitor data.
inline ordered_json to_json(const MonitorReport& m) {
  ordered_json j;
  j["gronwall"] = {{"active", m.gronwall.active},
                   {"status", m.gronwall.status},
                   {"t", series_json(m.gronwall.t)},
                   {"lhs", series_json(m.gronwall.lhs)},
                   {"rhs", series_json(m.gronwall.rhs)},
                   {"defect", series_json(m.gronwall.defect)},
                   {"normalized", series_json(m.gronwall.normalized)}};
  j["growth"] = {{"active", m.growth.active},
                 {"status", m.growth.status},
                 {"t", series_json(m.growth.t)},
                 {"lhs", series_json(m.growth.lhs)},
                 {"rhs", series_json(m.growth.rhs)},
                 {"defect", series_json(m.growth.defect)},
                 {"normalized", series_json(m.growth.normalized)}};
  const auto& c = m.concavity;
  j["concavity"] = {{"active", c.active},
                    {"status", c.status},
                    {"beta", c.params.beta},
                    {"sigma", c.params.sigma},
                    {"t_horizon", c.params.t_horizon},
                    {"t", series_json(c.t)},
                    {"F", series_json(c.f)},
                    {"F_prime", series_json(c.f_prime)},
                    {"F_second", series_json(c.f_second)},
                    {"defect", series_json(c.defect)},
                    {"normalized", series_json(c.normalized)},
                    {"eta", series_json(c.eta)}};
  return j;
}

/// Worst-case defects only; null for inactive monitors.
inline ordered_json monitor_summary_json(const MonitorReport& m) {
  ordered_json j;
  j["gronwall_min_defect"] =
      m.gronwall.active ? json_number(m.gronwall.min_normalized) : ordered_json(nullptr);
  j["growth_min_defect"] =
      m.growth.active ? json_number(m.growth.min_normalized) : ordered_json(nullptr);
  j["concavity_min_defect"] =
      m.concavity.active ? json_number(m.concavity.min_normalized) : ordered_json(nullptr);
  j["eta_min"] = m.concavity.active ? json_number(m.concavity.min_eta) : ordered_json(nullptr);
  j["eta_min_ratio"] =
      m.concavity.active ? json_number(m.concavity.min_eta_ratio) : ordered_json(nullptr);
  j["gronwall_status"] = m.gronwall.status;
  j["growth_status"] = m.growth.status;
  j["concavity_status"] = m.concavity.status;
  return j;
}

inline ordered_json certificate_json(const CriterionReport& crit, const BlowupReport& blow,
                                     const MonitorReport& mon) {
  ordered_json j;
  j["schema"] = kCertificateSchema;
  j["criterion"] = to_json(crit);
  j["blowup"] = to_json(blow);
  j["monitors"] = monitor_summary_json(mon);
  return j;
}

inline ordered_json to_json(const ConcavityResult& r) {
  ordered_json j;
  j["schema"] = kConcavitySchema;
  j["min_defect"] = json_number(r.min_defect);
  j["min_relative_defect"] = json_number(r.min_relative_defect);
  j["bound"] = json_optional(r.bound);
  j["hypothesis_ok"] = r.hypothesis_ok;
  return j;
}

/// Reads (t, psi) pairs. Blank lines and lines starting with '#' are skipped;
/// a non-numeric first row is taken as a header.
inline ConcavitySample read_concavity_csv(std::istream& is, double theta) {
  ConcavitySample s;
  s.theta = theta;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tok = split_csv_line(line);
    if (tok.size() != 2)
      throw FormatError("concavity csv line " + std::to_string(lineno) + ": expected 2 columns");
    if (first) {
      first = false;
      char* end = nullptr;
      std::strtod(tok[0].c_str(), &end);
      if (end == tok[0].c_str()) continue;  // header row
    }
    s.times.push_back(parse_double(tok[0], "concavity csv line " + std::to_string(lineno)));
    s.psi.push_back(parse_double(tok[1], "concavity csv line " + std::to_string(lineno)));
  }
  return s;
}

}  // namespace hsflow
