#pragma once

// Profile files and builtin names.
//
//   {"kind": "sphere"}
//   {"kind": "ellipsoid", "ratio": 2}
//   {"kind": "revolution", "b": 0.3, "c": 0.2}
//   {"kind": "spindle", "delta": 0.05, "eps": 0.1}
//   {"kind": "noncon", "delta": 0.1, "eps": 0.9}
//   {"kind": "samples", "ell": 3.14159, "t": [...], "gamma": [...]}
//
// Builtins: sphere, ellipsoid:R, revolution:B,C, spindle:D,E, noncon:D,E.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "magflow/error.hpp"
#include "magflow/profile.hpp"

namespace magflow {

using json = nlohmann::json;

inline ProfileFunction profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw domain_error("profile JSON needs a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sphere" || kind == "round_sphere") return make_sphere();
  if (kind == "ellipsoid") return make_ellipsoid(j.at("ratio").get<double>());
  if (kind == "revolution") return make_revolution(j.at("b").get<double>(), j.at("c").get<double>());
  if (kind == "spindle") return make_spindle(j.at("delta").get<double>(), j.at("eps").get<double>());
  if (kind == "noncon" || kind == "negative_action") return make_negative_action(j.at("delta").get<double>(), j.at("eps").get<double>());
  if (kind == "samples") {
    auto t = j.at("t").get<std::vector<double>>();
    auto g = j.at("gamma").get<std::vector<double>>();
    if (j.contains("ell") && !t.empty() && std::abs(t.back() - j.at("ell").get<double>()) > 1e-12 * std::max(1.0, t.back()))
      throw domain_error("samples: last t must equal ell");
    return make_sampled(t, g);
  }
  throw domain_error("unknown profile kind: " + kind);
}

namespace detail {

inline std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw domain_error("not a number: '" + item + "'");
    }
    if (pos != item.size()) throw domain_error("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Recipe JSON for a builtin name.
inline json builtin_recipe(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<double>{} : detail::parse_numbers(name.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw domain_error("builtin '" + head + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (head == "sphere") {
    need(0);
    return {{"kind", "sphere"}};
  }
  if (head == "ellipsoid") {
    need(1);
    return {{"kind", "ellipsoid"}, {"ratio", args[0]}};
  }
  if (head == "revolution") {
    need(2);
    return {{"kind", "revolution"}, {"b", args[0]}, {"c", args[1]}};
  }
  if (head == "spindle" || head == "noncon") {
    need(2);
    return {{"kind", head}, {"delta", args[0]}, {"eps", args[1]}};
  }
  throw domain_error("unknown builtin profile: " + name);
}

/// A file path holding profile JSON, or a builtin name.
inline json profile_recipe(const std::string& source) {
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream in(source);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw domain_error("cannot parse profile file " + source + ": " + e.what());
    }
    return j;
  }
  return builtin_recipe(source);
}

inline ProfileFunction load_profile(const std::string& source) { return profile_from_json(profile_recipe(source)); }

/// Samples form of a profile on n + 1 uniform points.
inline json profile_samples_json(const ProfileFunction& p, std::size_t n) {
  std::vector<double> t(n + 1), g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    t[i] = p.ell() * double(i) / double(n);
    g[i] = p.gamma(t[i]);
  }
  t.back() = p.ell();
  g.front() = g.back() = 0.0;
  return {{"kind", "samples"}, {"ell", p.ell()}, {"t", t}, {"gamma", g}};
}

inline json profile_summary_json(const ProfileFunction& p) {
  json params = json::object();
  for (const auto& [k, v] : p.info().params) params[k] = v;
  json j{{"kind", to_string(p.kind())}, {"ell", p.ell()}, {"area", area(p)}, {"Gamma_end", p.Gamma(p.ell())}, {"params", params}};
  if (!p.info().note.empty()) j["note"] = p.info().note;
  return j;
}

inline json validation_json(const ValidationReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"condition", e.condition}, {"passed", e.passed}, {"residual", e.residual}});
  return {{"passed", r.passed()}, {"entries", entries}};
}

}  // namespace magflow
