#include "multinorm/abgroup.hpp"

#include <algorithm>
#include <sstream>

#include "multinorm/errors.hpp"

namespace multinorm {

FinAbGroup::FinAbGroup(std::vector<Int> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) throw input_error("invariant factors must be at least 2");
    if (i + 1 < factors_.size() && factors_[i + 1] % factors_[i] != 0)
      throw input_error("invariant factors must form a divisibility chain");
  }
}

Int FinAbGroup::order() const {
  Int n = 1;
  for (const Int& d : factors_) n *= d;
  return n;
}

Int FinAbGroup::exponent() const { return factors_.empty() ? Int(1) : factors_.back(); }

Element FinAbGroup::reduce(const Element& v) const {
  if (v.size() != factors_.size()) throw input_error("element has wrong coordinate count");
  Element out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mod_pos(v[i], factors_[i]);
  return out;
}

Element FinAbGroup::add(const Element& a, const Element& b) const {
  Element out(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) out[i] = mod_pos(a[i] + b[i], factors_[i]);
  return out;
}

Element FinAbGroup::negate(const Element& a) const {
  Element out(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) out[i] = mod_pos(-a[i], factors_[i]);
  return out;
}

Element FinAbGroup::scale(const Int& c, const Element& a) const {
  Element out(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) out[i] = mod_pos(c * a[i], factors_[i]);
  return out;
}

Int FinAbGroup::element_order(const Element& a) const {
  Int ord = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    ord = lcm_int(ord, factors_[i] / gcd_int(factors_[i], a[i]));
  return ord;
}

std::vector<Element> FinAbGroup::elements(std::size_t limit) const {
  if (order() > Int(limit)) throw input_error("group too large to enumerate");
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(order()));
  Element cur = zero();
  for (;;) {
    out.push_back(cur);
    // lexicographic increment, first coordinate most significant
    std::size_t i = factors_.size();
    while (i > 0) {
      --i;
      cur[i] += 1;
      if (cur[i] < factors_[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (factors_.empty()) return out;
  }
}

std::string FinAbGroup::to_string() const {
  if (factors_.empty()) return "trivial";
  std::ostringstream out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out << " ⊕ ";
    out << "Z/" << factors_[i];
  }
  return out.str();
}

bool is_isomorphic(const FinAbGroup& g, const FinAbGroup& h) { return g == h; }

AbHom::AbHom(FinAbGroup source, FinAbGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank())
    throw internal_error("hom matrix has wrong shape");
  matrix_.reduce_rows_mod(target_.invariant_factors());
  const auto& d = source_.invariant_factors();
  const auto& e = target_.invariant_factors();
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
      if ((d[j] * matrix_(i, j)) % e[i] != 0)
        throw internal_error("hom is not well defined on generator orders");
}

AbHom AbHom::identity(const FinAbGroup& g) {
  return AbHom(g, g, IntMatrix::identity(g.rank()));
}

AbHom AbHom::zero(const FinAbGroup& source, const FinAbGroup& target) {
  return AbHom(source, target, IntMatrix(target.rank(), source.rank()));
}

Element AbHom::apply(const Element& x) const {
  return target_.reduce(multinorm::apply(matrix_, source_.reduce(x)));
}

AbHom hom_compose(const AbHom& g, const AbHom& f) {
  if (!(f.target() == g.source())) throw input_error("hom composition type mismatch");
  return AbHom(f.source(), g.target(), g.matrix() * f.matrix());
}

AbHom hom_add(const AbHom& f, const AbHom& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw input_error("hom sum type mismatch");
  return AbHom(f.source(), f.target(), f.matrix() + g.matrix());
}

AbHom hom_negate(const AbHom& f) { return AbHom(f.source(), f.target(), -f.matrix()); }

QuotientData quotient_by_columns(const FinAbGroup& ambient, const IntMatrix& cols) {
  if (cols.rows() != ambient.rank()) throw input_error("relation columns have wrong height");
  const std::size_t m = ambient.rank();
  IntMatrix rel = hstack(cols, IntMatrix::diagonal(ambient.invariant_factors()));
  SnfResult s = smith_normal_form(rel);
  if (s.rank != m) throw internal_error("quotient relation matrix lost full rank");
  std::vector<std::size_t> keep;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < m; ++i)
    if (s.d(i, i) >= 2) {
      keep.push_back(i);
      factors.push_back(s.d(i, i));
    }
  FinAbGroup q(factors);
  AbHom proj(ambient, q, s.u.select_rows(keep));
  IntMatrix lift = s.uinv.select_columns(keep);
  lift.reduce_rows_mod(ambient.invariant_factors());
  return QuotientData{std::move(q), std::move(proj), std::move(lift)};
}

QuotientData cokernel(const AbHom& f) { return quotient_by_columns(f.target(), f.matrix()); }

namespace {

IntMatrix generator_matrix(const FinAbGroup& ambient, const std::vector<Element>& gens) {
  IntMatrix m(ambient.rank(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) m.set_column(j, ambient.reduce(gens[j]));
  return m;
}

// First `head` coordinates of each kernel-basis vector of [m | diag(e)]:
// the relations among the columns of m modulo the ambient relations.
IntMatrix pullback_relations(const IntMatrix& m, const std::vector<Int>& e, std::size_t head) {
  IntMatrix stacked = hstack(m, IntMatrix::diagonal(e));
  auto null_basis = lattice_kernel(stacked);
  IntMatrix rel(head, null_basis.size());
  for (std::size_t j = 0; j < null_basis.size(); ++j)
    for (std::size_t i = 0; i < head; ++i) rel(i, j) = null_basis[j][i];
  return rel;
}

}  // namespace

Subgroup subgroup_structure(const FinAbGroup& ambient, const std::vector<Element>& gens) {
  IntMatrix gm = generator_matrix(ambient, gens);
  IntMatrix rel = pullback_relations(gm, ambient.invariant_factors(), gens.size());
  SnfResult s = smith_normal_form(rel);
  std::vector<std::size_t> keep;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i < s.rank && s.d(i, i) >= 2) {
      keep.push_back(i);
      factors.push_back(s.d(i, i));
    } else if (i >= s.rank) {
      throw internal_error("subgroup relation lattice is not full rank");
    }
  }
  FinAbGroup abstract(factors);
  IntMatrix incl = gm * s.uinv.select_columns(keep);
  AbHom inclusion(abstract, ambient, std::move(incl));

  // Order consistency certifies injectivity of the inclusion:
  // |<gens>| = |ambient| / |ambient/<gens>| must equal |abstract|.
  Int index = quotient_by_columns(ambient, gm).group.order();
  if (abstract.order() * index != ambient.order())
    throw internal_error("subgroup structure order mismatch");

  std::vector<Element> reduced;
  reduced.reserve(gens.size());
  for (const auto& g : gens) reduced.push_back(ambient.reduce(g));
  return Subgroup{ambient, std::move(reduced), std::move(abstract), std::move(inclusion)};
}

Subgroup whole_group(const FinAbGroup& g) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    Element e = g.zero();
    e[i] = 1;
    gens.push_back(e);
  }
  return subgroup_structure(g, gens);
}

Subgroup trivial_subgroup(const FinAbGroup& g) {
  return subgroup_structure(g, std::vector<Element>{});
}

bool subgroup_contains(const Subgroup& s, const Element& x) {
  IntMatrix span = hstack(s.inclusion.matrix(), IntMatrix::diagonal(s.ambient.invariant_factors()));
  return LatticeSolver(span).contains(s.ambient.reduce(x));
}

bool same_subgroup(const Subgroup& a, const Subgroup& b) {
  if (!(a.ambient == b.ambient)) return false;
  if (!(a.abstract == b.abstract)) return false;
  for (const auto& g : b.generators)
    if (!subgroup_contains(a, g)) return false;
  for (const auto& g : a.generators)
    if (!subgroup_contains(b, g)) return false;
  return true;
}

Subgroup kernel(const AbHom& f) {
  IntMatrix rel = pullback_relations(f.matrix(), f.target().invariant_factors(),
                                     f.source().rank());
  std::vector<Element> gens;
  for (std::size_t j = 0; j < rel.cols(); ++j) gens.push_back(f.source().reduce(rel.column(j)));
  return subgroup_structure(f.source(), gens);
}

Subgroup image(const AbHom& f) {
  std::vector<Element> gens;
  for (std::size_t j = 0; j < f.matrix().cols(); ++j) gens.push_back(f.matrix().column(j));
  return subgroup_structure(f.target(), gens);
}

QuotientData quotient_by(const Subgroup& sub) {
  return quotient_by_columns(sub.ambient, generator_matrix(sub.ambient, sub.generators));
}

bool is_surjective(const AbHom& f) { return cokernel(f).group.is_trivial(); }

bool is_injective(const AbHom& f) { return kernel(f).abstract.is_trivial(); }

Renormalization renormalize_orders(std::vector<Int> orders) {
  for (const Int& o : orders)
    if (o < 1) throw internal_error("presentation orders must be positive");
  SnfResult s = smith_normal_form(IntMatrix::diagonal(orders));
  std::vector<std::size_t> keep;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (s.d(i, i) >= 2) {
      keep.push_back(i);
      factors.push_back(s.d(i, i));
    }
  FinAbGroup group(factors);
  IntMatrix raw_to_canon = s.u.select_rows(keep);
  raw_to_canon.reduce_rows_mod(group.invariant_factors());
  IntMatrix canon_to_raw = s.uinv.select_columns(keep);
  canon_to_raw.reduce_rows_mod(orders);
  return Renormalization{std::move(group), std::move(orders), std::move(raw_to_canon),
                         std::move(canon_to_raw)};
}

DirectSum direct_sum(const std::vector<FinAbGroup>& parts) {
  std::vector<Int> orders;
  std::vector<std::size_t> offsets;
  for (const auto& p : parts) {
    offsets.push_back(orders.size());
    const auto& f = p.invariant_factors();
    orders.insert(orders.end(), f.begin(), f.end());
  }
  Renormalization ren = renormalize_orders(orders);
  DirectSum out{ren.group, {}, {}, std::move(ren), std::move(offsets)};
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::vector<std::size_t> cols(parts[p].rank());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = out.offsets[p] + j;
    out.injections.emplace_back(parts[p], out.group, out.renorm.raw_to_canon.select_columns(cols));
    out.projections.emplace_back(out.group, parts[p], out.renorm.canon_to_raw.select_rows(cols));
  }
  return out;
}

FinAbGroup direct_sum(const FinAbGroup& a, const FinAbGroup& b) {
  return direct_sum(std::vector<FinAbGroup>{a, b}).group;
}

std::set<Element> closure_elements(const FinAbGroup& ambient, const std::vector<Element>& gens) {
  std::set<Element> seen;
  std::vector<Element> queue;
  Element z = ambient.zero();
  seen.insert(z);
  queue.push_back(z);
  std::vector<Element> reduced;
  for (const auto& g : gens) reduced.push_back(ambient.reduce(g));
  while (!queue.empty()) {
    Element cur = queue.back();
    queue.pop_back();
    for (const auto& g : reduced) {
      Element nxt = ambient.add(cur, g);
      if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return seen;
}

}  // namespace multinorm
