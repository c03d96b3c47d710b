#pragma once

// Machine-readable check outcomes and their JSON / CSV serialisation.

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kgal {

using ordered_json = nlohmann::ordered_json;

enum class Status { Pass, Fail, ReportOnly };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::ReportOnly: return "report-only";
  }
  return "fail";
}

inline Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "report-only") return Status::ReportOnly;
  return Status::Fail;
}

struct CheckReport {
  std::string check_id;
  std::vector<std::pair<std::string, std::string>> params;
  Status status = Status::Fail;
  std::string residual = "0";
  ordered_json artifacts = ordered_json::object();

  bool passed() const { return status == Status::Pass; }
  bool failed() const { return status == Status::Fail; }

  CheckReport& param(std::string key, std::string value) {
    params.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

/// Shortest round-trippable decimal form of a double.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  // Prefer the shorter %.15g form when it round-trips.
  char shortbuf[64];
  std::snprintf(shortbuf, sizeof shortbuf, "%.15g", x);
  if (std::stod(shortbuf) == x) s = shortbuf;
  return s;
}

inline ordered_json to_json(const CheckReport& r) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  ordered_json j;
  j["check_id"] = r.check_id;
  j["params"] = params;
  j["status"] = to_string(r.status);
  j["residual"] = r.residual;
  j["artifacts"] = r.artifacts;
  return j;
}

inline CheckReport from_json(const ordered_json& j) {
  CheckReport r;
  r.check_id = j.at("check_id").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, v.get<std::string>());
  r.status = status_from_string(j.at("status").get<std::string>());
  r.residual = j.at("residual").get<std::string>();
  r.artifacts = j.value("artifacts", ordered_json::object());
  return r;
}

inline std::string emit_json(const std::vector<CheckReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

/// Columns: check_id,status,residual,params,artifacts. params is "k=v;k=v".
inline std::string emit_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "check_id,status,residual,params,artifacts\n";
  for (const auto& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (!params.empty()) params += ";";
      params += k + "=" + v;
    }
    os << detail::csv_field(r.check_id) << ',' << to_string(r.status) << ',' << detail::csv_field(r.residual) << ','
       << detail::csv_field(params) << ',' << detail::csv_field(r.artifacts.dump()) << '\n';
  }
  return os.str();
}

/// 0 iff no report has status fail.
inline int exit_code(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (r.failed()) return 1;
  return 0;
}

}  // namespace kgal
