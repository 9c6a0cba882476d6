#include "nsplast/trajectory_io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <string_view>
#include <system_error>
#include <vector>

namespace nsplast {

namespace {

using nlohmann::json;

constexpr std::string_view kTrajectoryHeader =
    "t,eps,v,eps_p,xi_i,xi_k,sigma,beta_i,beta_k,E_tot,D_cum,S_e,S_p,gamma_cum";
constexpr std::string_view kEventsHeader =
    "t,lambda,d_eps_p,d_xi_i,d_xi_k,d_S_e,d_S_p,dissipated,sigma,p_before,p_after";

// 17 significant digits: rereads reproduce the double bit-exactly, and the
// text is locale independent.
void append_number(std::string& out, double value) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out.push_back(',');
    append_number(out, v);
    first = false;
  }
  out.push_back('\n');
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              const std::filesystem::path& path, std::size_t line_no) {
  std::vector<double> values;
  values.reserve(expected);
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (true) {
    const char* comma = p;
    while (comma != end && *comma != ',') ++comma;
    double v = 0.0;
    const auto res = std::from_chars(p, comma, v);
    if (res.ec != std::errc{} || res.ptr != comma)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed number '" + std::string(p, comma) + "'");
    values.push_back(v);
    if (comma == end) break;
    p = comma + 1;
  }
  if (values.size() != expected)
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(expected) + " columns, got " +
                             std::to_string(values.size()));
  return values;
}

void check_header(const std::vector<std::string>& lines, std::string_view header,
                  const std::filesystem::path& path) {
  if (lines.empty() || lines.front() != header)
    throw std::runtime_error(path.string() + ": missing or wrong header");
}

json ledger_to_json(const LedgerReport& ledger) {
  json j;
  j["pass"] = ledger.pass;
  json clauses = json::array();
  for (const auto& c : ledger.clauses)
    clauses.push_back({{"name", c.name},
                       {"residual", c.residual},
                       {"tolerance", c.tolerance},
                       {"applicable", c.applicable},
                       {"pass", c.pass},
                       {"detail", c.detail}});
  j["clauses"] = clauses;
  return j;
}

LedgerReport ledger_from_json(const json& j) {
  LedgerReport ledger;
  ledger.pass = j.at("pass").get<bool>();
  for (const auto& cj : j.at("clauses")) {
    LedgerClause c;
    c.name = cj.at("name").get<std::string>();
    c.residual = cj.at("residual").get<double>();
    c.tolerance = cj.at("tolerance").get<double>();
    c.applicable = cj.at("applicable").get<bool>();
    c.pass = cj.at("pass").get<bool>();
    c.detail = cj.at("detail").get<std::string>();
    ledger.clauses.push_back(std::move(c));
  }
  return ledger;
}

}  // namespace

std::filesystem::path events_path_for(const std::filesystem::path& csv_path) {
  if (csv_path.extension() == ".csv") {
    std::filesystem::path p = csv_path;
    p.replace_extension(".events.csv");
    return p;
  }
  return std::filesystem::path(csv_path.string() + ".events.csv");
}

void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& csv_path) {
  std::string out;
  out.reserve(trajectory.samples.size() * 200 + 64);
  out.append(kTrajectoryHeader);
  out.push_back('\n');
  for (const auto& s : trajectory.samples)
    append_row(out, {s.state.time, s.state.strain, s.state.strain_rate,
                     s.state.plastic_strain, s.state.hardening_iso, s.state.hardening_kin,
                     s.sigma, s.back_iso, s.back_kin, s.energy_total, s.dissipated_cum,
                     s.state.entropy_elastic, s.state.entropy_plastic, s.production_cum});
  write_file(csv_path, out);

  std::string ev_out;
  ev_out.reserve(trajectory.events.size() * 160 + 64);
  ev_out.append(kEventsHeader);
  ev_out.push_back('\n');
  for (const auto& e : trajectory.events)
    append_row(ev_out, {e.time, e.lambda, e.d_plastic_strain, e.d_hardening_iso,
                        e.d_hardening_kin, e.d_entropy_elastic, e.d_entropy_plastic,
                        e.dissipated, e.sigma, e.momentum_before, e.momentum_after});
  write_file(events_path_for(csv_path), ev_out);
}

Trajectory read_trajectory(const std::filesystem::path& csv_path, const RunInfo& info) {
  Trajectory trajectory;
  trajectory.info = info;

  const auto lines = read_lines(csv_path);
  check_header(lines, kTrajectoryHeader, csv_path);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto v = parse_row(lines[i], 14, csv_path, i + 1);
    TrajectorySample s;
    s.state.time = v[0];
    s.state.strain = v[1];
    s.state.strain_rate = v[2];
    s.state.plastic_strain = v[3];
    s.state.hardening_iso = v[4];
    s.state.hardening_kin = v[5];
    s.sigma = v[6];
    s.back_iso = v[7];
    s.back_kin = v[8];
    s.energy_total = v[9];
    s.dissipated_cum = v[10];
    s.state.entropy_elastic = v[11];
    s.state.entropy_plastic = v[12];
    s.production_cum = v[13];
    trajectory.samples.push_back(s);
  }

  const auto ev_path = events_path_for(csv_path);
  const auto ev_lines = read_lines(ev_path);
  check_header(ev_lines, kEventsHeader, ev_path);
  for (std::size_t i = 1; i < ev_lines.size(); ++i) {
    if (ev_lines[i].empty()) continue;
    const auto v = parse_row(ev_lines[i], 11, ev_path, i + 1);
    PlasticEvent e;
    e.time = v[0];
    e.lambda = v[1];
    e.d_plastic_strain = v[2];
    e.d_hardening_iso = v[3];
    e.d_hardening_kin = v[4];
    e.d_entropy_elastic = v[5];
    e.d_entropy_plastic = v[6];
    e.dissipated = v[7];
    e.sigma = v[8];
    e.momentum_before = v[9];
    e.momentum_after = v[10];
    trajectory.events.push_back(e);
  }
  return trajectory;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  json j;
  j["config"] = json::parse(manifest.config_json);
  j["artifacts"] = {{"trajectory", manifest.trajectory_path},
                    {"events", manifest.events_path}};
  j["tool_version"] = manifest.tool_version;
  j["wall_seconds"] = manifest.wall_seconds;
  j["ledger"] = ledger_to_json(manifest.ledger);
  write_file(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }
  RunManifest manifest;
  try {
    manifest.config_json = j.at("config").dump();
    manifest.trajectory_path = j.at("artifacts").at("trajectory").get<std::string>();
    manifest.events_path = j.at("artifacts").at("events").get<std::string>();
    manifest.tool_version = j.at("tool_version").get<std::string>();
    manifest.wall_seconds = j.at("wall_seconds").get<double>();
    manifest.ledger = ledger_from_json(j.at("ledger"));
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return manifest;
}

}  // namespace nsplast
