#pragma once

#include <string>
#include <vector>

#include "mefit/error.hpp"

namespace mefit {

/// One interaction term of a model formula: an unordered set of variable
/// names.  Set semantics make X:X collapse to X.  The term's order is the
/// number of distinct variables in it.
class Term {
 public:
  Term() = default;
  explicit Term(std::vector<std::string> variables);

  /// Variables, sorted and de-duplicated.
  const std::vector<std::string>& variables() const { return variables_; }
  int order() const { return static_cast<int>(variables_.size()); }
  bool contains(const std::string& name) const;

  /// Union of the two variable sets (the `:` operator).
  Term combined_with(const Term& other) const;
  /// The term with one variable removed (a margin of this term).
  Term without(const std::string& name) const;

  /// Variables joined by ":" in sorted order.
  std::string label() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.variables_ == b.variables_;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  std::vector<std::string> variables_;
};

/// A canonicalized model formula: response, ordered term list, intercept
/// flag.  Terms are unique and sorted by ascending order; ties keep the
/// order of first appearance in the source text.
struct Formula {
  std::string response;
  std::vector<Term> terms;
  bool intercept = true;

  bool has_term(const Term& t) const;

  /// Exact structural equality (same response, intercept, term sequence).
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.response == b.response && a.intercept == b.intercept &&
           a.terms == b.terms;
  }
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }
};

/// Parses a Wilkinson-notation formula string into canonical form.
///
/// Grammar: `response ~ rhs` where rhs is an expression over variable
/// names, `1`, `0`, `+`, `-`, `*`, `:` and parentheses.  `:` binds
/// tighter than `*`, which binds tighter than `+`/`-`.
///
/// Expansion rules applied during parsing:
///   - `X*Y` expands to `X + Y + X:Y` (and asserts the intercept);
///   - `X:Y` forms the union of the operands' variable sets and
///     distributes over sums, so `(A+B):C` becomes `A:C + B:C`;
///   - `X:X` collapses to `X`;
///   - `- T` removes term T after expansion (removing an absent term is
///     a no-op);
///   - the intercept is implicit; `0` or `- 1` removes it, a later `+ 1`
///     restores it (last mention wins).
///
/// Throws FormulaError on malformed input, including the unsupported
/// operators `^`, `/`, `%in%` and inline expressions `I(...)`.
Formula parse(const std::string& text);

/// Canonical pretty-printer.  Terms joined by " + ", interaction
/// variables by ":", with "- 1" appended when the intercept is absent.
/// parse(render(f)) == f for every canonical formula f.
std::string render(const Formula& f);

/// True iff the formulas denote the same model specification: same
/// response, same intercept flag and the same set of terms (insensitive
/// to the tie-break ordering of equal-order terms).
bool formulas_equal(const Formula& a, const Formula& b);

}  // namespace mefit
