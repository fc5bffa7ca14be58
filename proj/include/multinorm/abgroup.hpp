#pragma once

#include <set>
#include <string>
#include <vector>

#include "multinorm/snf.hpp"

namespace multinorm {

using Element = std::vector<Int>;

/// Finite abelian group in invariant-factor form: d1 | d2 | ... | dk, every
/// factor at least 2, the trivial group being the empty list.  Equality of
/// factor lists is the isomorphism test.
class FinAbGroup {
 public:
  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<Int> factors);

  static FinAbGroup trivial() { return FinAbGroup(); }

  const std::vector<Int>& invariant_factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  Int order() const;
  Int exponent() const;  // 1 for the trivial group
  bool is_trivial() const { return factors_.empty(); }
  bool is_cyclic() const { return factors_.size() <= 1; }

  Element zero() const { return Element(factors_.size()); }
  Element reduce(const Element& v) const;
  Element add(const Element& a, const Element& b) const;
  Element negate(const Element& a) const;
  Element scale(const Int& c, const Element& a) const;
  Int element_order(const Element& a) const;

  /// All elements in lexicographic coordinate order; guarded against
  /// non-desk-scale groups.
  std::vector<Element> elements(std::size_t limit = 1 << 20) const;

  bool operator==(const FinAbGroup&) const = default;

  /// "Z/2 (+) Z/4" style rendering; "trivial" for the empty list.
  std::string to_string() const;

 private:
  std::vector<Int> factors_;
};

/// Structure-theorem isomorphism test: canonical forms are equal.
bool is_isomorphic(const FinAbGroup& g, const FinAbGroup& h);

/// Homomorphism between finite abelian groups as an integer matrix whose
/// column j is the image of the j-th source generator, stored reduced
/// modulo the target's invariant factors.  Construction checks
/// well-definedness: d_j * column_j must vanish in the target.
class AbHom {
 public:
  AbHom(FinAbGroup source, FinAbGroup target, IntMatrix matrix);

  static AbHom identity(const FinAbGroup& g);
  static AbHom zero(const FinAbGroup& source, const FinAbGroup& target);

  const FinAbGroup& source() const { return source_; }
  const FinAbGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  Element apply(const Element& x) const;

  bool operator==(const AbHom&) const = default;

 private:
  FinAbGroup source_, target_;
  IntMatrix matrix_;
};

AbHom hom_compose(const AbHom& g, const AbHom& f);  // g after f
AbHom hom_add(const AbHom& f, const AbHom& g);
AbHom hom_negate(const AbHom& f);

/// A subgroup of `ambient` with its abstract invariant-factor structure and
/// the injective inclusion homomorphism realizing it.
struct Subgroup {
  FinAbGroup ambient;
  std::vector<Element> generators;  // reduced, as given
  FinAbGroup abstract;
  AbHom inclusion;  // abstract -> ambient

  Int order() const { return abstract.order(); }
  bool is_trivial() const { return abstract.is_trivial(); }
  bool is_cyclic() const { return abstract.is_cyclic(); }
};

/// Structure of the subgroup generated by `gens`, by lattice pullback of the
/// ambient relations through the generator matrix.
Subgroup subgroup_structure(const FinAbGroup& ambient, const std::vector<Element>& gens);

Subgroup whole_group(const FinAbGroup& g);
Subgroup trivial_subgroup(const FinAbGroup& g);

bool subgroup_contains(const Subgroup& s, const Element& x);
/// Same underlying subgroup of the same ambient group (element-wise).
bool same_subgroup(const Subgroup& a, const Subgroup& b);

/// Quotient presentation data: Q with the surjection and a fixed section of
/// it on generators (proj . lift = identity).
struct QuotientData {
  FinAbGroup group;
  AbHom proj;
  IntMatrix lift;  // ambient-coordinates of each Q generator
};

/// Quotient of `ambient` by the subgroup generated by the columns of `cols`.
QuotientData quotient_by_columns(const FinAbGroup& ambient, const IntMatrix& cols);

QuotientData cokernel(const AbHom& f);
Subgroup kernel(const AbHom& f);
Subgroup image(const AbHom& f);
QuotientData quotient_by(const Subgroup& sub);

bool is_surjective(const AbHom& f);
bool is_injective(const AbHom& f);

/// Renormalization of a presentation (+) Z/o_i (orders arbitrary, 1 allowed)
/// to canonical invariant-factor form, with exact coordinate changes both
/// ways.
struct Renormalization {
  FinAbGroup group;
  std::vector<Int> raw_orders;
  IntMatrix raw_to_canon;  // group.rank x n
  IntMatrix canon_to_raw;  // n x group.rank
};
Renormalization renormalize_orders(std::vector<Int> orders);

struct DirectSum {
  FinAbGroup group;
  std::vector<AbHom> injections;   // part i -> sum
  std::vector<AbHom> projections;  // sum -> part i
  Renormalization renorm;          // raw = concatenated part coordinates
  std::vector<std::size_t> offsets;
};
DirectSum direct_sum(const std::vector<FinAbGroup>& parts);
FinAbGroup direct_sum(const FinAbGroup& a, const FinAbGroup& b);

/// All elements of the subgroup generated by `gens` (closure under
/// addition), as canonical vectors.
std::set<Element> closure_elements(const FinAbGroup& ambient, const std::vector<Element>& gens);

}  // namespace multinorm
