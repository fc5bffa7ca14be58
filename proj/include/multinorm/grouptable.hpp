#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multinorm/abgroup.hpp"

namespace multinorm {

/// A finite (possibly nonabelian) group as an explicit multiplication table.
/// Construction validates the Latin-square property, the identity, and
/// associativity over all triples, so instances are honest groups.
class CayleyGroup {
 public:
  static constexpr std::size_t kMaxOrder = 256;

  explicit CayleyGroup(std::vector<std::vector<std::size_t>> table,
                       std::vector<std::string> names = {});

  std::size_t order() const { return order_; }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * order_ + b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  std::size_t commutator(std::size_t a, std::size_t b) const;

  bool is_abelian() const;
  std::size_t element_order(std::size_t a) const;
  const std::vector<std::string>& names() const { return names_; }
  std::string name_of(std::size_t a) const;

 private:
  std::size_t order_;
  std::vector<std::size_t> table_;
  std::size_t identity_;
  std::vector<std::size_t> inverse_;
  std::vector<std::string> names_;
};

/// Closure of permutations under composition, numbered by breadth-first
/// search from the identity in generator order.  `elements[i]` is the
/// permutation of element i; generators appear at their first occurrence.
struct GeneratedGroup {
  CayleyGroup group;
  std::vector<std::vector<std::size_t>> elements;

  std::optional<std::size_t> index_of(const std::vector<std::size_t>& perm) const;
};
GeneratedGroup group_from_generators(std::size_t order_bound,
                                     const std::vector<std::vector<std::size_t>>& generators);

/// Sorted element indices of the subgroup generated by `gens`.
std::vector<std::size_t> subgroup_closure_table(const CayleyGroup& g,
                                                const std::vector<std::size_t>& gens);

/// Subgroup generated by all commutators [x, y]; always normal.
std::vector<std::size_t> commutator_subgroup(const CayleyGroup& g);

bool is_normal_subgroup(const CayleyGroup& g, const std::vector<std::size_t>& elems);

struct QuotientTable {
  CayleyGroup group;
  std::vector<std::size_t> coset_of;    // parent element -> quotient element
  std::vector<std::size_t> coset_reps;  // quotient element -> smallest parent rep
};
QuotientTable quotient_by_normal(const CayleyGroup& g, const std::vector<std::size_t>& elems);

struct SubgroupTable {
  CayleyGroup group;
  std::vector<std::size_t> to_parent;  // subgroup element -> parent element
};
SubgroupTable subgroup_table(const CayleyGroup& g, const std::vector<std::size_t>& elems);

/// Map between table groups given by per-element images; construction
/// verifies multiplicativity on all pairs.
struct GroupMap {
  CayleyGroup source;
  CayleyGroup target;
  std::vector<std::size_t> images;

  GroupMap(CayleyGroup src, CayleyGroup tgt, std::vector<std::size_t> imgs);
  static GroupMap identity(const CayleyGroup& g);
};
GroupMap inclusion_map(const SubgroupTable& sub, const CayleyGroup& parent);

/// G/[G,G] in invariant-factor form with the quotient map as coordinates of
/// every element, plus a parent-element representative for each canonical
/// generator (used to build induced maps).
struct Abelianization {
  FinAbGroup group;
  std::vector<Element> coords;              // per parent element
  std::vector<std::size_t> generator_reps;  // per canonical generator
  std::vector<std::size_t> commutator;      // the derived subgroup, sorted
};
Abelianization abelianization(const CayleyGroup& g);

AbHom induced_ab_map(const GroupMap& f, const Abelianization& src, const Abelianization& tgt);
AbHom induced_ab_map(const GroupMap& f);

}  // namespace multinorm
