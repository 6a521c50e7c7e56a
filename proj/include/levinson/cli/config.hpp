#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "levinson/error.hpp"
#include "levinson/model.hpp"

namespace levinson::cli {

using json = nlohmann::json;

/// Malformed or inconsistent configuration document.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct PotentialSpec {
  std::string kind = "zero";  // zero | rank_one | table | random
  double v0 = 0.0;
  long site = 0;
  std::vector<double> values;
  double amplitude = 1.0;
  double rho_gen = 3.0;
  std::uint64_t seed = 0;
  long length = 64;
  double rho = 3.0;

  Potential build() const {
    if (kind == "zero") return Potential::zero(rho);
    if (kind == "rank_one") return Potential::rank_one(v0, std::size_t(site), rho);
    if (kind == "table") return Potential::from_table(values, rho);
    return Potential::random_decaying(amplitude, rho_gen, seed, std::size_t(length), rho);
  }

  json to_json() const {
    json j{{"kind", kind}, {"rho", rho}};
    if (kind == "rank_one") {
      j["v0"] = v0;
      j["site"] = site;
    } else if (kind == "table") {
      j["values"] = values;
    } else if (kind == "random") {
      j["amplitude"] = amplitude;
      j["rho_gen"] = rho_gen;
      j["seed"] = seed;
      j["length"] = length;
    }
    return j;
  }
};

struct OutputSpec {
  std::string directory = ".";
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& format) const {
    for (const auto& f : formats)
      if (f == format) return true;
    return false;
  }
};

struct RunConfig {
  PotentialSpec potential;
  GridSpec grids;
  OutputSpec outputs;

  /// Every field with defaults filled in; keys are sorted, so the dump is canonical.
  json normalized() const {
    json grid{{"m_theta", grids.m_theta},     {"n_site", grids.n_site},
              {"n_tail", grids.n_tail},       {"beta_max", grids.beta_max},
              {"m_beta", grids.m_beta},       {"scan_points", grids.scan_points},
              {"n_edge", grids.n_edge},       {"alpha_max", grids.alpha_max}};
    grid["z_max"] = grids.z_max ? json(*grids.z_max) : json(nullptr);
    return json{{"potential", potential.to_json()},
                {"grids", grid},
                {"tolerances",
                 {{"threshold", grids.tol_threshold},
                  {"root", grids.tol_root},
                  {"winding", grids.tol_winding}}},
                {"outputs", {{"directory", outputs.directory}, {"formats", outputs.formats}}}};
  }

  /// 64-bit FNV-1a of the normalized document, as 16 hex digits.
  std::string hash() const {
    const std::string text = normalized().dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline PotentialSpec parse_potential(const json& j) {
  PotentialSpec p;
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("potential needs a 'kind'");
  read(j, "kind", p.kind);
  if (p.kind == "zero") {
    reject_unknown(j, {"kind", "rho"}, "potential");
  } else if (p.kind == "rank_one") {
    reject_unknown(j, {"kind", "v0", "site", "rho"}, "potential");
    if (!j.contains("v0")) throw ConfigError("rank_one potential needs 'v0'");
    read(j, "v0", p.v0);
    read(j, "site", p.site);
    if (p.site < 0) throw ConfigError("site must be >= 0");
  } else if (p.kind == "table") {
    reject_unknown(j, {"kind", "values", "rho"}, "potential");
    if (!j.contains("values")) throw ConfigError("table potential needs 'values'");
    read(j, "values", p.values);
  } else if (p.kind == "random") {
    reject_unknown(j, {"kind", "amplitude", "rho_gen", "seed", "length", "rho"}, "potential");
    read(j, "amplitude", p.amplitude);
    read(j, "rho_gen", p.rho_gen);
    read(j, "seed", p.seed);
    read(j, "length", p.length);
    if (p.length < 1) throw ConfigError("length must be >= 1");
  } else {
    throw ConfigError("unknown potential kind '" + p.kind + "'");
  }
  read(j, "rho", p.rho);
  return p;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  detail::reject_unknown(j, {"potential", "grids", "tolerances", "outputs"}, "config");
  if (!j.contains("potential")) throw ConfigError("config needs a 'potential' block");
  RunConfig c;
  c.potential = detail::parse_potential(j.at("potential"));
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    detail::reject_unknown(g, {"m_theta", "n_site", "n_tail", "beta_max", "m_beta", "z_max", "scan_points",
                               "n_edge", "alpha_max"},
                           "grids");
    detail::read(g, "m_theta", c.grids.m_theta);
    detail::read(g, "n_site", c.grids.n_site);
    detail::read(g, "n_tail", c.grids.n_tail);
    detail::read(g, "beta_max", c.grids.beta_max);
    detail::read(g, "m_beta", c.grids.m_beta);
    detail::read(g, "scan_points", c.grids.scan_points);
    detail::read(g, "n_edge", c.grids.n_edge);
    detail::read(g, "alpha_max", c.grids.alpha_max);
    if (g.contains("z_max") && !g.at("z_max").is_null()) {
      double z = 0.0;
      detail::read(g, "z_max", z);
      c.grids.z_max = z;
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    detail::reject_unknown(t, {"threshold", "root", "winding"}, "tolerances");
    detail::read(t, "threshold", c.grids.tol_threshold);
    detail::read(t, "root", c.grids.tol_root);
    detail::read(t, "winding", c.grids.tol_winding);
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    detail::reject_unknown(o, {"directory", "formats"}, "outputs");
    detail::read(o, "directory", c.outputs.directory);
    detail::read(o, "formats", c.outputs.formats);
    for (const auto& f : c.outputs.formats)
      if (f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
  }
  try {
    c.grids.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace levinson::cli
