#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace molinfer {

struct MilpVariable {
  std::string name;
  long long lb = 0, ub = 0;
  bool binary = false;
  std::string family;
};

struct LinTerm {
  int var = -1;
  long long coef = 0;
};

struct MilpConstraint {
  std::string name;
  std::string family;
  std::vector<LinTerm> terms;
  int rel = 0;  // -1: <=, 0: ==, +1: >=
  long long rhs = 0;
};

// Pure-integer linear model with named variables and constraint families.
class MilpModel {
 public:
  int add_var(const std::string& name, long long lb, long long ub, const std::string& family) {
    if (lb > ub) throw std::logic_error("variable with empty domain: " + name);
    if (name.size() > 64) throw std::logic_error("variable name too long: " + name);
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw std::logic_error("bad character in variable name: " + name);
    auto [it, fresh] = index_.emplace(name, int(vars_.size()));
    if (!fresh) throw std::logic_error("variable name collision: " + name);
    vars_.push_back({name, lb, ub, lb == 0 && ub == 1, family});
    return it->second;
  }

  int id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown variable: " + name);
    return it->second;
  }
  bool has(const std::string& name) const { return index_.count(name) > 0; }

  void add_con(const std::string& family, std::vector<LinTerm> terms, int rel, long long rhs) {
    // merge duplicate variables, drop zero coefficients
    std::map<int, long long> acc;
    for (const auto& t : terms) acc[t.var] += t.coef;
    std::vector<LinTerm> merged;
    for (auto& [v, c] : acc)
      if (c != 0) merged.push_back({v, c});
    int k = family_counter_[family]++;
    cons_.push_back({family + "_" + std::to_string(k), family, std::move(merged), rel, rhs});
  }

  void set_objective(std::vector<LinTerm> terms) { objective_ = std::move(terms); }

  const std::vector<MilpVariable>& vars() const { return vars_; }
  const std::vector<MilpConstraint>& cons() const { return cons_; }
  const std::vector<LinTerm>& objective() const { return objective_; }

  nlohmann::json stats() const {
    std::map<std::string, std::pair<int, int>> fam;
    for (const auto& v : vars_) fam[v.family].first++;
    for (const auto& c : cons_) fam[c.family].second++;
    nlohmann::json j = nlohmann::json::object();
    for (auto& [name, vc] : fam) j[name] = {{"vars", vc.first}, {"cons", vc.second}};
    return j;
  }

  // CPLEX-LP dialect subset: Minimize / Subject To / Bounds / Generals /
  // Binaries / End, byte-identical across runs for the same model.
  void emit_lp(std::ostream& out) const {
    out << "Minimize\n obj:";
    if (objective_.empty()) {
      out << " 0 zero_var";
    } else {
      for (const auto& t : objective_) out << term_str(t);
    }
    out << "\nSubject To\n";
    for (const auto& c : cons_) {
      out << " " << c.name << ":";
      if (c.terms.empty()) out << " 0 zero_var";
      for (const auto& t : c.terms) out << term_str(t);
      out << (c.rel < 0 ? " <= " : c.rel == 0 ? " = " : " >= ") << c.rhs << "\n";
    }
    out << "Bounds\n";
    out << " zero_var = 0\n";
    for (const auto& v : vars_) {
      if (v.binary || v.name == "zero_var") continue;
      if (v.lb == v.ub)
        out << " " << v.name << " = " << v.lb << "\n";
      else
        out << " " << v.lb << " <= " << v.name << " <= " << v.ub << "\n";
    }
    bool any_general = false;
    for (const auto& v : vars_)
      if (!v.binary) any_general = true;
    if (any_general) {
      out << "Generals\n";
      for (const auto& v : vars_)
        if (!v.binary) out << " " << v.name << "\n";
    }
    bool any_binary = false;
    for (const auto& v : vars_)
      if (v.binary) any_binary = true;
    if (any_binary) {
      out << "Binaries\n";
      for (const auto& v : vars_)
        if (v.binary) out << " " << v.name << "\n";
    }
    out << "End\n";
  }

  std::string lp_string() const {
    std::ostringstream os;
    emit_lp(os);
    return os.str();
  }

 private:
  std::string term_str(const LinTerm& t) const {
    std::string s = t.coef < 0 ? " - " : " + ";
    long long mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) s += std::to_string(mag) + " ";
    return s + vars_[size_t(t.var)].name;
  }

  std::vector<MilpVariable> vars_;
  std::map<std::string, int> index_;
  std::vector<MilpConstraint> cons_;
  std::vector<LinTerm> objective_;
  std::map<std::string, int> family_counter_;
};

}  // namespace molinfer
