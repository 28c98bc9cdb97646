#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "perm2/term.hpp"
#include "perm2/types.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// 1-signatures: a set of sorts and typed operations over sequents.
// Sort and operation names are interned to dense ids.
// ---------------------------------------------------------------------------

struct Signature1 {
  std::vector<std::string> sort_names;
  std::unordered_map<std::string, int> sort_ids;
  std::vector<std::string> op_names;
  std::unordered_map<std::string, int> op_ids;
  std::vector<Sequent> op_sequents;

  int add_sort(const std::string& name) {
    auto it = sort_ids.find(name);
    if (it != sort_ids.end()) return it->second;
    int id = static_cast<int>(sort_names.size());
    sort_names.push_back(name);
    sort_ids.emplace(name, id);
    return id;
  }
  int add_op(const std::string& name, Sequent seq) {
    auto it = op_ids.find(name);
    if (it != op_ids.end()) return it->second;
    int id = static_cast<int>(op_names.size());
    op_names.push_back(name);
    op_ids.emplace(name, id);
    op_sequents.push_back(std::move(seq));
    return id;
  }
  int sort_id(const std::string& name) const {
    auto it = sort_ids.find(name);
    if (it == sort_ids.end()) throw Error(Errc::UnknownSort, "unknown sort " + name);
    return it->second;
  }
  int op_id(const std::string& name) const {
    auto it = op_ids.find(name);
    if (it == op_ids.end())
      throw Error(Errc::UnknownConstant, "unknown operation " + name);
    return it->second;
  }
  const Sequent& sequent_of(int op) const {
    if (op < 0 || static_cast<size_t>(op) >= op_sequents.size())
      throw Error(Errc::UnknownConstant, "unknown operation id");
    return op_sequents[static_cast<size_t>(op)];
  }
};

// A rewrite rule: a named pair of parallel terms over a context. Both sides
// are stored in beta-eta-normal form and typecheck at `type` in `ctx`; this
// is exactly membership of the pair in the parallel-pair set of the base
// signature.
struct RewriteRule {
  std::string name;
  Context ctx;
  TermPtr lhs, rhs;
  TypePtr type;
};

struct Signature2 {
  Signature1 base;
  std::vector<RewriteRule> rules;
  std::unordered_map<std::string, int> rule_ids;

  int add_rule(RewriteRule r) {
    auto it = rule_ids.find(r.name);
    if (it != rule_ids.end()) return it->second;
    int id = static_cast<int>(rules.size());
    rule_ids.emplace(r.name, id);
    rules.push_back(std::move(r));
    return id;
  }
  int rule_id(const std::string& name) const {
    auto it = rule_ids.find(name);
    if (it == rule_ids.end()) throw Error(Errc::UnknownRule, "unknown rule " + name);
    return it->second;
  }
  const RewriteRule& rule(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= rules.size())
      throw Error(Errc::UnknownRule, "unknown rule id");
    return rules[static_cast<size_t>(id)];
  }
  const std::string& rule_name(int id) const { return rule(id).name; }
};

// A validation diagnostic. `where` names the offending item.
struct Violation {
  std::string kind;
  std::string where;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::string where, std::string detail = "") {
    violations.push_back({std::move(kind), std::move(where), std::move(detail)});
  }
};

// Checks that every sort mentioned in `ty` exists in `sig`.
inline bool type_wf(const TypePtr& ty, const Signature1& sig) {
  switch (ty->kind) {
    case Type::Kind::Sort:
      return ty->sort >= 0 &&
             static_cast<size_t>(ty->sort) < sig.sort_names.size();
    case Type::Kind::Unit: return true;
    default: return type_wf(ty->a, sig) && type_wf(ty->b, sig);
  }
}

}  // namespace perm2
