#pragma once

#include <string>

#include "json.hpp"
#include "molinfer/descriptors.hpp"
#include "molinfer/spec.hpp"

namespace molinfer {

inline json feature_to_json(const FeatureVector& f, const ElementTable& t) {
  json j;
  j["n"] = f.n;
  j["cs"] = f.cs;
  j["ch"] = f.ch;
  j["bl"] = f.bl;
  j["ms"] = {f.ms_bar.num, f.ms_bar.den};
  j["ns_h"] = f.ns_h;
  j["dg_co"] = f.dg_co;
  j["dg_nc"] = f.dg_nc;
  j["bd_co"] = f.bd_co;
  j["bd_in"] = f.bd_in;
  j["bd_ex"] = f.bd_ex;
  auto syms = [&](const std::map<ChemSym, int>& m) {
    json o = json::object();
    for (auto& [s, c] : m) o[sym_str(t, s)] = c;
    return o;
  };
  j["ns_co"] = syms(f.ns_co);
  j["ns_nc"] = syms(f.ns_nc);
  auto cfgs = [&](const std::map<EdgeConfig, int>& m) {
    json o = json::object();
    for (auto& [g, c] : m)
      o[sym_str(t, g.mu) + " " + sym_str(t, g.xi) + " " + std::to_string(g.mult)] = c;
    return o;
  };
  j["ec_co"] = cfgs(f.ec_co);
  j["ec_in"] = cfgs(f.ec_in);
  j["ec_ex"] = cfgs(f.ec_ex);
  return j;
}

inline FeatureVector feature_from_json(const json& j, const ElementTable& t) {
  FeatureVector f;
  f.n = j.at("n").get<int>();
  f.cs = j.at("cs").get<int>();
  f.ch = j.at("ch").get<int>();
  f.bl = j.at("bl").get<int>();
  f.ms_bar = Rational(j.at("ms")[0].get<std::int64_t>(), j.at("ms")[1].get<std::int64_t>());
  f.ns_h = j.at("ns_h").get<int>();
  for (int i = 0; i < 4; ++i) {
    f.dg_co[size_t(i)] = j.at("dg_co")[size_t(i)].get<int>();
    f.dg_nc[size_t(i)] = j.at("dg_nc")[size_t(i)].get<int>();
  }
  for (int i = 0; i < 2; ++i) {
    f.bd_co[size_t(i)] = j.at("bd_co")[size_t(i)].get<int>();
    f.bd_in[size_t(i)] = j.at("bd_in")[size_t(i)].get<int>();
    f.bd_ex[size_t(i)] = j.at("bd_ex")[size_t(i)].get<int>();
  }
  for (auto& [k, v] : j.at("ns_co").items()) f.ns_co[specdetail::parse_sym(t, k)] = v.get<int>();
  for (auto& [k, v] : j.at("ns_nc").items()) f.ns_nc[specdetail::parse_sym(t, k)] = v.get<int>();
  for (auto& [k, v] : j.at("ec_co").items())
    f.ec_co[specdetail::parse_config_key(t, k)] = v.get<int>();
  for (auto& [k, v] : j.at("ec_in").items())
    f.ec_in[specdetail::parse_config_key(t, k)] = v.get<int>();
  for (auto& [k, v] : j.at("ec_ex").items())
    f.ec_ex[specdetail::parse_config_key(t, k)] = v.get<int>();
  return f;
}

}  // namespace molinfer
