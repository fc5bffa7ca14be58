#include "multinorm/grouptable.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "multinorm/errors.hpp"

namespace multinorm {

CayleyGroup::CayleyGroup(std::vector<std::vector<std::size_t>> table,
                         std::vector<std::string> names)
    : order_(table.size()), names_(std::move(names)) {
  if (order_ == 0) throw input_error("a group table needs at least the identity");
  if (order_ > kMaxOrder) throw input_error("group table exceeds the supported order");
  table_.resize(order_ * order_);
  for (std::size_t i = 0; i < order_; ++i) {
    if (table[i].size() != order_) throw input_error("group table is not square");
    for (std::size_t j = 0; j < order_; ++j) {
      if (table[i][j] >= order_) throw input_error("group table entry out of range");
      table_[i * order_ + j] = table[i][j];
    }
  }
  if (!names_.empty() && names_.size() != order_)
    throw input_error("element name count mismatch");

  // Latin square
  for (std::size_t i = 0; i < order_; ++i) {
    std::vector<bool> seen_row(order_, false), seen_col(order_, false);
    for (std::size_t j = 0; j < order_; ++j) {
      if (seen_row[mul(i, j)]) throw input_error("group table row repeats an element");
      seen_row[mul(i, j)] = true;
      if (seen_col[mul(j, i)]) throw input_error("group table column repeats an element");
      seen_col[mul(j, i)] = true;
    }
  }
  // two-sided identity
  bool found = false;
  for (std::size_t e = 0; e < order_ && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < order_ && ok; ++x)
      ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw input_error("group table has no identity");
  // associativity, all triples
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b)
      for (std::size_t c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw input_error("group table is not associative");
  inverse_.resize(order_);
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b)
      if (mul(a, b) == identity_) inverse_[a] = b;
}

std::size_t CayleyGroup::commutator(std::size_t a, std::size_t b) const {
  return mul(mul(a, b), mul(inv(a), inv(b)));
}

bool CayleyGroup::is_abelian() const {
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::size_t CayleyGroup::element_order(std::size_t a) const {
  std::size_t ord = 1, x = a;
  while (x != identity_) {
    x = mul(x, a);
    ++ord;
  }
  return ord;
}

std::string CayleyGroup::name_of(std::size_t a) const {
  if (!names_.empty()) return names_[a];
  return "g" + std::to_string(a);
}

std::optional<std::size_t> GeneratedGroup::index_of(const std::vector<std::size_t>& perm) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == perm) return i;
  return std::nullopt;
}

GeneratedGroup group_from_generators(std::size_t order_bound,
                                     const std::vector<std::vector<std::size_t>>& generators) {
  std::size_t domain = generators.empty() ? 1 : generators.front().size();
  if (domain == 0) throw input_error("permutations need a nonempty domain");
  for (const auto& p : generators) {
    if (p.size() != domain) throw input_error("generator permutations act on different sets");
    std::vector<bool> seen(domain, false);
    for (std::size_t v : p) {
      if (v >= domain || seen[v]) throw input_error("generator is not a permutation");
      seen[v] = true;
    }
  }
  std::vector<std::size_t> id(domain);
  for (std::size_t i = 0; i < domain; ++i) id[i] = i;

  std::vector<std::vector<std::size_t>> elems{id};
  std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : generators) {
      std::vector<std::size_t> prod(domain);
      for (std::size_t i = 0; i < domain; ++i) prod[i] = elems[head][g[i]];
      if (index.emplace(prod, elems.size()).second) {
        elems.push_back(prod);
        if (elems.size() > order_bound)
          throw input_error("generated group exceeds the order bound");
      }
    }
  }
  std::vector<std::vector<std::size_t>> table(elems.size(),
                                              std::vector<std::size_t>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) {
      std::vector<std::size_t> prod(domain);
      for (std::size_t i = 0; i < domain; ++i) prod[i] = elems[a][elems[b][i]];
      auto it = index.find(prod);
      if (it == index.end()) throw internal_error("permutation closure is not closed");
      table[a][b] = it->second;
    }
  return GeneratedGroup{CayleyGroup(std::move(table)), std::move(elems)};
}

std::vector<std::size_t> subgroup_closure_table(const CayleyGroup& g,
                                                const std::vector<std::size_t>& gens) {
  std::set<std::size_t> seen{g.identity()};
  std::vector<std::size_t> queue{g.identity()};
  while (!queue.empty()) {
    std::size_t cur = queue.back();
    queue.pop_back();
    for (std::size_t gen : gens) {
      if (gen >= g.order()) throw input_error("subgroup generator index out of range");
      for (std::size_t nxt : {g.mul(cur, gen), g.mul(cur, g.inv(gen))})
        if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return std::vector<std::size_t>(seen.begin(), seen.end());
}

std::vector<std::size_t> commutator_subgroup(const CayleyGroup& g) {
  std::vector<std::size_t> gens;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) gens.push_back(g.commutator(a, b));
  return subgroup_closure_table(g, gens);
}

bool is_normal_subgroup(const CayleyGroup& g, const std::vector<std::size_t>& elems) {
  std::set<std::size_t> in(elems.begin(), elems.end());
  if (!in.count(g.identity())) return false;
  for (std::size_t h : elems) {
    for (std::size_t k : elems)
      if (!in.count(g.mul(h, k))) return false;
    if (!in.count(g.inv(h))) return false;
    for (std::size_t x = 0; x < g.order(); ++x)
      if (!in.count(g.mul(g.mul(x, h), g.inv(x)))) return false;
  }
  return true;
}

QuotientTable quotient_by_normal(const CayleyGroup& g, const std::vector<std::size_t>& elems) {
  if (!is_normal_subgroup(g, elems)) throw input_error("subgroup is not normal");
  const std::size_t n = g.order();
  std::vector<std::size_t> coset_of(n, SIZE_MAX);
  std::vector<std::size_t> reps;
  for (std::size_t x = 0; x < n; ++x) {
    if (coset_of[x] != SIZE_MAX) continue;
    std::size_t c = reps.size();
    reps.push_back(x);
    for (std::size_t h : elems) coset_of[g.mul(x, h)] = c;
  }
  std::vector<std::vector<std::size_t>> table(reps.size(), std::vector<std::size_t>(reps.size()));
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      table[a][b] = coset_of[g.mul(reps[a], reps[b])];
  return QuotientTable{CayleyGroup(std::move(table)), std::move(coset_of), std::move(reps)};
}

SubgroupTable subgroup_table(const CayleyGroup& g, const std::vector<std::size_t>& elems) {
  std::vector<std::size_t> sorted(elems.begin(), elems.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < sorted.size(); ++i) pos[sorted[i]] = i;
  std::vector<std::vector<std::size_t>> table(sorted.size(),
                                              std::vector<std::size_t>(sorted.size()));
  for (std::size_t a = 0; a < sorted.size(); ++a)
    for (std::size_t b = 0; b < sorted.size(); ++b) {
      auto it = pos.find(g.mul(sorted[a], sorted[b]));
      if (it == pos.end()) throw input_error("element set is not closed under products");
      table[a][b] = it->second;
    }
  return SubgroupTable{CayleyGroup(std::move(table)), std::move(sorted)};
}

GroupMap::GroupMap(CayleyGroup src, CayleyGroup tgt, std::vector<std::size_t> imgs)
    : source(std::move(src)), target(std::move(tgt)), images(std::move(imgs)) {
  if (images.size() != source.order()) throw input_error("group map image count mismatch");
  for (std::size_t v : images)
    if (v >= target.order()) throw input_error("group map image out of range");
  for (std::size_t a = 0; a < source.order(); ++a)
    for (std::size_t b = 0; b < source.order(); ++b)
      if (images[source.mul(a, b)] != target.mul(images[a], images[b]))
        throw input_error("group map is not multiplicative");
}

GroupMap GroupMap::identity(const CayleyGroup& g) {
  std::vector<std::size_t> imgs(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) imgs[i] = i;
  return GroupMap(g, g, std::move(imgs));
}

GroupMap inclusion_map(const SubgroupTable& sub, const CayleyGroup& parent) {
  return GroupMap(sub.group, parent, sub.to_parent);
}

namespace {

// Structure of an abelian table group: greedy generating set, brute-force
// discrete logs over the exponent box, relation lattice by Smith reduction.
struct AbelianTableStructure {
  FinAbGroup group;
  std::vector<Element> coords;              // per table element
  std::vector<std::size_t> generator_reps;  // per canonical generator
};

AbelianTableStructure abelian_table_structure(const CayleyGroup& q) {
  if (!q.is_abelian()) throw internal_error("abelian structure of a nonabelian table");
  std::vector<std::size_t> gens;
  std::vector<std::size_t> span = subgroup_closure_table(q, {});
  for (std::size_t x = 0; x < q.order() && span.size() < q.order(); ++x) {
    if (std::binary_search(span.begin(), span.end(), x)) continue;
    gens.push_back(x);
    span = subgroup_closure_table(q, gens);
  }
  const std::size_t t = gens.size();
  std::vector<Int> orders(t);
  std::size_t box = 1;
  for (std::size_t i = 0; i < t; ++i) {
    orders[i] = Int(q.element_order(gens[i]));
    box *= q.element_order(gens[i]);
  }
  if (box > (1u << 22)) throw internal_error("exponent box too large for discrete logs");

  // walk the box; record a discrete log per element and every relation
  std::vector<std::vector<Int>> relations;
  std::vector<std::vector<Int>> dlog(q.order());
  std::vector<bool> have(q.order(), false);
  std::vector<Int> exps(t);
  std::size_t elem = q.identity();
  // mixed-radix counter over the exponent box; `elem` tracks the product
  std::vector<std::size_t> powers;  // not needed: incremental update below
  for (std::size_t step = 0;; ++step) {
    if (!have[elem]) {
      have[elem] = true;
      dlog[elem] = exps;
    } else if (elem == q.identity()) {
      bool zero = true;
      for (const Int& e : exps) zero &= e == 0;
      if (!zero) relations.push_back(exps);
    }
    // increment
    std::size_t i = t;
    bool done = true;
    while (i > 0) {
      --i;
      exps[i] += 1;
      elem = q.mul(elem, gens[i]);
      if (exps[i] < orders[i]) {
        done = false;
        break;
      }
      exps[i] = 0;  // gens[i]^orders[i] is the identity, elem already wrapped
    }
    if (done || step > box + 2) break;
  }
  for (std::size_t x = 0; x < q.order(); ++x)
    if (!have[x]) throw internal_error("greedy generators fail to cover the table group");

  IntMatrix rel(t, relations.size() + t);
  for (std::size_t j = 0; j < relations.size(); ++j)
    for (std::size_t i = 0; i < t; ++i) rel(i, j) = relations[j][i];
  for (std::size_t i = 0; i < t; ++i) rel(i, relations.size() + i) = orders[i];

  SnfResult s = smith_normal_form(rel);
  std::vector<std::size_t> keep;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < t; ++i)
    if (i < s.rank && s.d(i, i) >= 2) {
      keep.push_back(i);
      factors.push_back(s.d(i, i));
    }
  FinAbGroup group(factors);
  IntMatrix to_canon = s.u.select_rows(keep);
  to_canon.reduce_rows_mod(group.invariant_factors());

  std::vector<Element> coords(q.order());
  for (std::size_t x = 0; x < q.order(); ++x) coords[x] = group.reduce(apply(to_canon, dlog[x]));

  IntMatrix from_canon = s.uinv.select_columns(keep);
  std::vector<std::size_t> reps(keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    std::size_t x = q.identity();
    for (std::size_t i = 0; i < t; ++i) {
      Int e = mod_pos(from_canon(i, c), orders[i]);
      for (Int k = 0; k < e; ++k) x = q.mul(x, gens[i]);
    }
    reps[c] = x;
  }
  if (group.order() != Int(q.order())) throw internal_error("abelian structure order mismatch");
  return AbelianTableStructure{std::move(group), std::move(coords), std::move(reps)};
}

}  // namespace

Abelianization abelianization(const CayleyGroup& g) {
  std::vector<std::size_t> derived = commutator_subgroup(g);
  QuotientTable q = quotient_by_normal(g, derived);
  AbelianTableStructure s = abelian_table_structure(q.group);
  std::vector<Element> coords(g.order());
  for (std::size_t x = 0; x < g.order(); ++x) coords[x] = s.coords[q.coset_of[x]];
  std::vector<std::size_t> reps(s.generator_reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c) reps[c] = q.coset_reps[s.generator_reps[c]];
  return Abelianization{std::move(s.group), std::move(coords), std::move(reps),
                        std::move(derived)};
}

AbHom induced_ab_map(const GroupMap& f, const Abelianization& src, const Abelianization& tgt) {
  IntMatrix m(tgt.group.rank(), src.group.rank());
  for (std::size_t c = 0; c < src.group.rank(); ++c)
    m.set_column(c, tgt.coords[f.images[src.generator_reps[c]]]);
  return AbHom(src.group, tgt.group, std::move(m));
}

AbHom induced_ab_map(const GroupMap& f) {
  return induced_ab_map(f, abelianization(f.source), abelianization(f.target));
}

}  // namespace multinorm
