#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace perm2 {

// Error codes shared across the library. Validators report diagnostics as
// data; operations with a single hard precondition throw Error.
enum class Errc {
  UnboundVariable,
  ArityMismatch,
  TypeMismatch,
  UnknownConstant,
  UnknownSort,
  UnknownRule,
  UnknownItem,
  UnknownEquation,
  MiddleMismatch,
  DuplicateVariable,
  IllTyped,
  NonPatternLhs,
  InvalidStep,
  ParseError,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::UnknownConstant: return "UnknownConstant";
    case Errc::UnknownSort: return "UnknownSort";
    case Errc::UnknownRule: return "UnknownRule";
    case Errc::UnknownItem: return "UnknownItem";
    case Errc::UnknownEquation: return "UnknownEquation";
    case Errc::MiddleMismatch: return "MiddleMismatch";
    case Errc::DuplicateVariable: return "DuplicateVariable";
    case Errc::IllTyped: return "IllTyped";
    case Errc::NonPatternLhs: return "NonPatternLhs";
    case Errc::InvalidStep: return "InvalidStep";
    case Errc::ParseError: return "ParseError";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// Types: sorts closed under 1, binary products and exponentials.
// Sorts are interned; a Type carries the sort id of the owning signature.
// There is no type-level reduction, so equality is syntactic.
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Sort, Unit, Product, Exponential };
  Kind kind;
  int sort = -1;        // Kind::Sort
  TypePtr a, b;         // Product: a*b.  Exponential: codomain b ^ domain a.

  static TypePtr mk_sort(int id) {
    auto t = std::make_shared<Type>();
    t->kind = Kind::Sort;
    t->sort = id;
    return t;
  }
  static TypePtr mk_unit() {
    auto t = std::make_shared<Type>();
    t->kind = Kind::Unit;
    return t;
  }
  static TypePtr mk_product(TypePtr l, TypePtr r) {
    auto t = std::make_shared<Type>();
    t->kind = Kind::Product;
    t->a = std::move(l);
    t->b = std::move(r);
    return t;
  }
  // exp(dom, cod) is written cod ^ dom in the surface syntax.
  static TypePtr mk_exp(TypePtr dom, TypePtr cod) {
    auto t = std::make_shared<Type>();
    t->kind = Kind::Exponential;
    t->a = std::move(dom);
    t->b = std::move(cod);
    return t;
  }
  const TypePtr& domain() const { return a; }
  const TypePtr& codomain() const { return b; }
};

inline bool type_equal(const TypePtr& x, const TypePtr& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Type::Kind::Sort: return x->sort == y->sort;
    case Type::Kind::Unit: return true;
    case Type::Kind::Product:
    case Type::Kind::Exponential:
      return type_equal(x->a, y->a) && type_equal(x->b, y->b);
  }
  return false;
}

// Homomorphic replacement of sorts (the bind of the type monad).
// `sortmap` must be total on the sorts occurring in `a`; it may signal a
// missing sort by returning nullptr, which is reported as UnknownSort.
inline TypePtr subst_type(const TypePtr& a,
                          const std::function<TypePtr(int)>& sortmap) {
  switch (a->kind) {
    case Type::Kind::Sort: {
      TypePtr r = sortmap(a->sort);
      if (!r) throw Error(Errc::UnknownSort, "subst_type: no image for sort");
      return r;
    }
    case Type::Kind::Unit: return a;
    case Type::Kind::Product:
      return Type::mk_product(subst_type(a->a, sortmap), subst_type(a->b, sortmap));
    case Type::Kind::Exponential:
      return Type::mk_exp(subst_type(a->a, sortmap), subst_type(a->b, sortmap));
  }
  throw Error(Errc::UnknownSort, "subst_type: bad type");
}

inline int type_size(const TypePtr& a) {
  switch (a->kind) {
    case Type::Kind::Sort:
    case Type::Kind::Unit: return 1;
    default: return 1 + type_size(a->a) + type_size(a->b);
  }
}

// Sequents: a list of premise types and a conclusion type.
struct Sequent {
  std::vector<TypePtr> premises;
  TypePtr conclusion;
};

inline bool sequent_equal(const Sequent& s, const Sequent& t) {
  if (s.premises.size() != t.premises.size()) return false;
  for (size_t i = 0; i < s.premises.size(); ++i)
    if (!type_equal(s.premises[i], t.premises[i])) return false;
  return type_equal(s.conclusion, t.conclusion);
}

}  // namespace perm2
