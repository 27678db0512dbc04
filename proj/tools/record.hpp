#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <masep/core.hpp>

namespace masep::cli {

using json = nlohmann::json;

/// One line of a config file. `query` holds the command payload.
struct RunConfig {
  std::string command;
  json query = json::object();
  json quadrature = json::object();
  std::string method = "auto";
  std::uint64_t seed = 0;
  std::string out;
};

struct ResultRecord {
  std::string command;
  json input = json::object();
  double value = 0.0;
  double error = 0.0;
  std::string method;
  double wall_clock = 0.0;
  std::string version = masep::version;
  json extra = json::object();

  bool operator==(const ResultRecord&) const = default;
};

namespace detail {

inline void write_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  out += s;
}

inline void write_value(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        write_value(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_value(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      write_double(out, j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

inline double read_double(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace detail

/// Compact JSON with sorted keys and doubles at 17 significant digits.
inline std::string dump_line(const json& j) {
  std::string s;
  detail::write_value(s, j);
  return s;
}

inline json to_json(const ResultRecord& r) {
  json j;
  j["command"] = r.command;
  j["input"] = r.input;
  j["value"] = r.value;
  j["error"] = r.error;
  j["method"] = r.method;
  j["wall_clock"] = r.wall_clock;
  j["version"] = r.version;
  j["extra"] = r.extra;
  return j;
}

inline ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  r.command = j.at("command").get<std::string>();
  r.input = j.at("input");
  r.value = detail::read_double(j.at("value"));
  r.error = detail::read_double(j.at("error"));
  r.method = j.at("method").get<std::string>();
  r.wall_clock = detail::read_double(j.at("wall_clock"));
  r.version = j.at("version").get<std::string>();
  r.extra = j.value("extra", json::object());
  return r;
}

inline std::string record_line(const ResultRecord& r) { return dump_line(to_json(r)); }

/// The record with wall-clock time removed; equal across runs of a deterministic query.
inline std::string canonical_line(ResultRecord r) {
  r.wall_clock = 0.0;
  return record_line(r);
}

inline ResultRecord parse_record_line(const std::string& line) { return record_from_json(json::parse(line)); }

inline std::vector<ResultRecord> read_records(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(parse_record_line(line));
  return out;
}

inline RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config line must be a JSON object");
  RunConfig c;
  c.command = j.value("command", std::string());
  c.query = j.value("query", json::object());
  c.quadrature = j.value("quadrature", json::object());
  c.method = j.value("method", std::string("auto"));
  c.seed = j.value("seed", std::uint64_t{0});
  c.out = j.value("out", std::string());
  return c;
}

inline json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["query"] = c.query;
  j["quadrature"] = c.quadrature;
  j["method"] = c.method;
  j["seed"] = c.seed;
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

/// Config lines; blank lines and lines starting with '#' are skipped.
inline std::vector<RunConfig> read_configs(std::istream& in) {
  std::vector<RunConfig> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("config line " + std::to_string(number) + ": " + e.what());
    }
    out.push_back(config_from_json(j));
  }
  return out;
}

inline std::vector<RunConfig> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  return read_configs(in);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

inline std::string csv_header() { return "row,command,method,value,error,input"; }

inline std::string csv_row(std::size_t row, const ResultRecord& r) {
  std::string v, e;
  detail::write_double(v, r.value);
  detail::write_double(e, r.error);
  return std::to_string(row) + "," + r.command + "," + csv_escape(r.method) + "," + v + "," + e + "," +
         csv_escape(dump_line(r.input));
}

}  // namespace masep::cli
