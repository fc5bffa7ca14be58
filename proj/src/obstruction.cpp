#include "multinorm/obstruction.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "multinorm/errors.hpp"

namespace multinorm {

namespace {

// Practical ceiling for section enumeration; the engine targets desk-scale
// Galois groups.
constexpr std::size_t kSectionLimit = 1 << 16;

std::size_t lex_index(const FinAbGroup& g, const Element& v) {
  // last coordinate least significant, matching FinAbGroup::elements()
  Int idx = 0;
  const auto& d = g.invariant_factors();
  for (std::size_t i = 0; i < d.size(); ++i) idx = idx * d[i] + v[i];
  return static_cast<std::size_t>(idx);
}

IntMatrix generator_columns(const FinAbGroup& ambient, const std::vector<Element>& gens) {
  IntMatrix m(ambient.rank(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) m.set_column(j, ambient.reduce(gens[j]));
  return m;
}

Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b) {
  if (!(a.ambient == b.ambient)) throw input_error("subgroup intersection ambient mismatch");
  const FinAbGroup& g = a.ambient;
  const IntMatrix& b1 = a.inclusion.matrix();
  const IntMatrix& b2 = b.inclusion.matrix();
  IntMatrix stacked = hstack(hstack(b1, -b2), IntMatrix::diagonal(g.invariant_factors()));
  auto null_basis = lattice_kernel(stacked);
  std::vector<Element> gens;
  for (const auto& z : null_basis) {
    std::vector<Int> head(z.begin(), z.begin() + b1.cols());
    gens.push_back(g.reduce(apply(b1, head)));
  }
  return subgroup_structure(g, gens);
}

}  // namespace

void LocalFamily::validate() const {
  for (const auto& p : places)
    if (!(p.ambient == ambient)) throw input_error("family place has a different ambient group");
  if (!labels.empty() && labels.size() != places.size())
    throw input_error("family label count mismatch");
}

AbHom epsilon_map(const FinAbGroup& g, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == g)) throw input_error("family ambient does not match the group");
  WedgeSquare wg = exterior_square(g);
  std::vector<FinAbGroup> parts;
  IntMatrix blocks(wg.group.rank(), 0);
  for (const auto& p : f.places) {
    WedgeSquare wv = exterior_square(p.abstract);
    parts.push_back(wv.group);
    blocks = hstack(blocks, wedge_hom(p.inclusion, wv, wg).matrix());
  }
  DirectSum ds = direct_sum(parts);
  return AbHom(ds.group, wg.group, blocks * ds.renorm.canon_to_raw);
}

namespace {

// Concatenated wedge-inclusion image columns; cyclic places contribute none.
IntMatrix family_wedge_columns(const WedgeSquare& wg, const LocalFamily& f) {
  IntMatrix blocks(wg.group.rank(), 0);
  for (const auto& p : f.places) {
    if (p.is_cyclic()) continue;
    blocks = hstack(blocks, wedge_hom(p.inclusion, exterior_square(p.abstract), wg).matrix());
  }
  return blocks;
}

}  // namespace

ShaData sha_data(const FinAbGroup& g, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == g)) throw input_error("family ambient does not match the group");
  WedgeSquare wg = exterior_square(g);
  IntMatrix cols = family_wedge_columns(wg, f);
  QuotientData q = quotient_by_columns(wg.group, cols);
  return ShaData{std::move(wg), std::move(q)};
}

FinAbGroup sha_abelian(const FinAbGroup& g, const LocalFamily& f) {
  return sha_data(g, f).coker.group;
}

LocalFamily push_family(const AbHom& pi, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == pi.source())) throw input_error("family ambient does not match the map");
  if (!is_surjective(pi)) throw input_error("push_family requires a surjective map");
  LocalFamily out{pi.target(), {}, f.labels};
  for (const auto& p : f.places) {
    std::vector<Element> imgs;
    for (const auto& x : p.generators) imgs.push_back(pi.apply(x));
    out.places.push_back(subgroup_structure(pi.target(), imgs));
  }
  return out;
}

AbHom sha_restriction_map(const AbHom& pi, const LocalFamily& f) {
  ShaData src = sha_data(pi.source(), f);
  LocalFamily pushed = push_family(pi, f);
  ShaData tgt = sha_data(pi.target(), pushed);
  AbHom wpi = wedge_hom(pi, src.wedge, tgt.wedge);
  AbHom t(src.group(), tgt.group(), tgt.coker.proj.matrix() * wpi.matrix() * src.coker.lift);
  if (!(hom_compose(t, src.coker.proj) == hom_compose(tgt.coker.proj, wpi)))
    throw internal_error("restriction map fails to commute with the projections");
  return t;
}

AbelianTower::AbelianTower(FinAbGroup g, Subgroup n1, Subgroup n2)
    : g_(std::move(g)),
      n1_(std::move(n1)),
      n2_(std::move(n2)),
      q1_(quotient_by(n1_)),
      q2_(quotient_by(n2_)),
      qe_(quotient_by_columns(
          g_, hstack(generator_columns(g_, n1_.generators), generator_columns(g_, n2_.generators)))),
      rho1_(q1_.group, qe_.group, qe_.proj.matrix() * q1_.lift),
      rho2_(q2_.group, qe_.group, qe_.proj.matrix() * q2_.lift) {
  if (!(n1_.ambient == g_) || !(n2_.ambient == g_))
    throw input_error("tower kernels must live in the tower group");
  if (!subgroup_intersection(n1_, n2_).is_trivial())
    throw input_error("tower kernels must intersect trivially (L must be the compositum)");
  if (!(hom_compose(rho1_, q1_.proj) == qe_.proj) || !(hom_compose(rho2_, q2_.proj) == qe_.proj))
    throw internal_error("tower projections fail to commute");
}

TowerWedges tower_wedges(const AbelianTower& t) {
  WedgeSquare wg = exterior_square(t.g());
  WedgeSquare w1 = exterior_square(t.g1());
  WedgeSquare w2 = exterior_square(t.g2());
  WedgeSquare we = exterior_square(t.ge());
  AbHom wpi1 = wedge_hom(t.pi1(), wg, w1);
  AbHom wpi2 = wedge_hom(t.pi2(), wg, w2);
  AbHom wrho1 = wedge_hom(t.rho1(), w1, we);
  AbHom wrho2 = wedge_hom(t.rho2(), w2, we);

  if (t.g().order() > Int(kSectionLimit))
    throw input_error("tower too large for section enumeration");

  // mu: lexicographically smallest preimage under rho, per element of G_E.
  std::vector<Element> kernel_elems;
  {
    std::vector<Element> gens = t.n1().generators;
    gens.insert(gens.end(), t.n2().generators.begin(), t.n2().generators.end());
    auto closure = closure_elements(t.g(), gens);
    kernel_elems.assign(closure.begin(), closure.end());
  }
  std::vector<Element> ge_elems = t.ge().elements(kSectionLimit);
  std::vector<Element> mu(ge_elems.size()), mu1(ge_elems.size());
  for (std::size_t i = 0; i < ge_elems.size(); ++i) {
    Element lift = t.g().reduce(apply(t.qe().lift, ge_elems[i]));
    Element best = t.g().add(lift, kernel_elems.front());
    for (const auto& n : kernel_elems) best = std::min(best, t.g().add(lift, n));
    mu[i] = best;
    mu1[i] = t.pi1().apply(best);
  }

  // Pure wedges mu1(e_i) /\ mu1(e_j) over the raw pair basis of G_E /\ G_E.
  IntMatrix s_raw(w1.group.rank(), we.basis.pairs.size());
  for (std::size_t p = 0; p < we.basis.pairs.size(); ++p) {
    auto [i, j] = we.basis.pairs[p];
    Element ei = t.ge().zero(), ej = t.ge().zero();
    ei[i] = 1;
    ej[j] = 1;
    s_raw.set_column(p, w1.encode(mu1[lex_index(t.ge(), ei)], mu1[lex_index(t.ge(), ej)]));
  }
  return TowerWedges{t,  std::move(wg), std::move(w1),   std::move(w2),   std::move(we),
                     std::move(wpi1), std::move(wpi2), std::move(wrho1), std::move(wrho2),
                     std::move(mu),   std::move(mu1),  std::move(s_raw)};
}

PlaceWedgeColumns place_wedge_columns(const TowerWedges& tw, const Subgroup& place) {
  if (!(place.ambient == tw.tower.g()))
    throw input_error("family place has a different ambient group");
  if (place.is_cyclic()) {
    return PlaceWedgeColumns{
        IntMatrix(tw.wg.group.rank(), 0), IntMatrix(tw.w1.group.rank(), 0),
        IntMatrix(tw.w2.group.rank(), 0), IntMatrix(tw.we.group.rank(), 0)};
  }
  PlaceWedgeColumns out;
  out.at_l = wedge_hom(place.inclusion, exterior_square(place.abstract), tw.wg).matrix();
  auto pushed = [&](const AbHom& pi, const WedgeSquare& wt) {
    std::vector<Element> imgs;
    for (const auto& x : place.generators) imgs.push_back(pi.apply(x));
    Subgroup s = subgroup_structure(pi.target(), imgs);
    return wedge_hom(s.inclusion, exterior_square(s.abstract), wt).matrix();
  };
  out.at_1 = pushed(tw.tower.pi1(), tw.w1);
  out.at_2 = pushed(tw.tower.pi2(), tw.w2);
  out.at_e = pushed(tw.tower.rho(), tw.we);
  return out;
}

namespace {

struct Levels {
  QuotientData ql, q1, q2, qe;
};

Levels build_levels(const TowerWedges& tw, const std::vector<const PlaceWedgeColumns*>& places) {
  auto assemble = [&](const WedgeSquare& w, IntMatrix PlaceWedgeColumns::* member) {
    IntMatrix cols(w.group.rank(), 0);
    for (const auto* p : places) cols = hstack(cols, (*p).*member);
    return quotient_by_columns(w.group, cols);
  };
  return Levels{assemble(tw.wg, &PlaceWedgeColumns::at_l),
                assemble(tw.w1, &PlaceWedgeColumns::at_1),
                assemble(tw.w2, &PlaceWedgeColumns::at_2),
                assemble(tw.we, &PlaceWedgeColumns::at_e)};
}

struct TAssembly {
  AbHom t1, t2, t;
  DirectSum sum12;
  QuotientData coker;
};

TAssembly build_t(const TowerWedges& tw, const Levels& lv) {
  AbHom t1(lv.ql.group, lv.q1.group, lv.q1.proj.matrix() * tw.wpi1.matrix() * lv.ql.lift);
  if (!(hom_compose(t1, lv.ql.proj) == hom_compose(lv.q1.proj, tw.wpi1)))
    throw internal_error("restriction to L1 fails to commute");
  AbHom t2(lv.ql.group, lv.q2.group, lv.q2.proj.matrix() * tw.wpi2.matrix() * lv.ql.lift);
  if (!(hom_compose(t2, lv.ql.proj) == hom_compose(lv.q2.proj, tw.wpi2)))
    throw internal_error("restriction to L2 fails to commute");
  DirectSum sum12 = direct_sum(std::vector<FinAbGroup>{lv.q1.group, lv.q2.group});
  AbHom t = hom_add(hom_compose(sum12.injections[0], t1), hom_compose(sum12.injections[1], t2));
  QuotientData ct = cokernel(t);
  return TAssembly{std::move(t1), std::move(t2), std::move(t), std::move(sum12), std::move(ct)};
}

}  // namespace

CokerG coker_g(const AbelianTower& t, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == t.g())) throw input_error("family ambient does not match the tower");
  TowerWedges tw = tower_wedges(t);
  std::vector<PlaceWedgeColumns> cols;
  cols.reserve(f.places.size());
  for (const auto& p : f.places) cols.push_back(place_wedge_columns(tw, p));
  std::vector<const PlaceWedgeColumns*> ptrs;
  for (const auto& c : cols) ptrs.push_back(&c);
  Levels lv = build_levels(tw, ptrs);
  TAssembly ta = build_t(tw, lv);
  return CokerG{ta.coker.group,
                ta.t,
                ta.coker,
                ta.sum12,
                ShaData{tw.wg, lv.ql},
                ShaData{tw.w1, lv.q1},
                ShaData{tw.w2, lv.q2}};
}

CertificateOutcome certificate_from_columns(const TowerWedges& tw,
                                            const std::vector<const PlaceWedgeColumns*>& places) {
  Levels lv = build_levels(tw, places);
  CertificateOutcome out{Theorem1Certificate{FinAbGroup::trivial(), lv.qe.group, tw.mu, tw.mu1,
                                             std::nullopt, std::nullopt, false, ""},
                         lv.ql.group.order(), lv.q1.group.order(), lv.q2.group.order(),
                         lv.qe.group.order(), Int(0)};
  Theorem1Certificate& cert = out.cert;
  const FinAbGroup& sha_e = lv.qe.group;
  const AbHom& proj_e = lv.qe.proj;

  auto fail = [&](const std::string& name) -> CertificateOutcome& {
    cert.verdict = false;
    cert.failed_check = name;
    return out;
  };

  try {
    TAssembly ta = build_t(tw, lv);
    cert.coker_t = ta.coker.group;
    out.coker_t_order = ta.coker.group.order();

    // P from the signed pair (+rho1/\rho1, -rho2/\rho2), pushed down to the
    // cokernels one quotient at a time.
    AbHom p_w1 = hom_compose(proj_e, tw.wrho1);
    AbHom p_w2 = hom_negate(hom_compose(proj_e, tw.wrho2));
    AbHom p_q1(lv.q1.group, sha_e, p_w1.matrix() * lv.q1.lift);
    if (!(hom_compose(p_q1, lv.q1.proj) == p_w1)) return fail("P-descends-L1");
    AbHom p_q2(lv.q2.group, sha_e, p_w2.matrix() * lv.q2.lift);
    if (!(hom_compose(p_q2, lv.q2.proj) == p_w2)) return fail("P-descends-L2");
    AbHom p_sum = hom_add(hom_compose(p_q1, ta.sum12.projections[0]),
                          hom_compose(p_q2, ta.sum12.projections[1]));
    if (!(hom_compose(p_sum, ta.t) == AbHom::zero(lv.ql.group, sha_e)))
      return fail("P-kills-image-of-T");
    AbHom map_p(ta.coker.group, sha_e, p_sum.matrix() * ta.coker.lift);
    if (!(hom_compose(map_p, ta.coker.proj) == p_sum)) return fail("P-descends-coker");
    cert.map_p = map_p;

    // S from the section mu: on the wedge of G_E first, then through the
    // quotient by the local image.
    IntMatrix s_canon = tw.s_raw * tw.we.renorm.canon_to_raw;
    IntMatrix to_ct = ta.coker.proj.matrix() * ta.sum12.injections[0].matrix() *
                      lv.q1.proj.matrix() * s_canon;
    AbHom s_wedge(tw.we.group, ta.coker.group, std::move(to_ct));
    AbHom map_s(sha_e, ta.coker.group, s_wedge.matrix() * lv.qe.lift);
    if (!(hom_compose(map_s, proj_e) == s_wedge)) return fail("S-descends");
    cert.map_s = map_s;

    if (!(hom_compose(map_p, map_s) == AbHom::identity(sha_e))) return fail("PS-identity");
    if (!is_surjective(map_p)) return fail("P-surjective");
    if (!is_surjective(map_s)) return fail("S-surjective");
    if (!is_isomorphic(ta.coker.group, sha_e)) return fail("isomorphic");
  } catch (const internal_error& e) {
    return fail(std::string("construction: ") + e.what());
  }
  cert.verdict = true;
  return out;
}

Theorem1Certificate theorem1_certificate(const AbelianTower& t, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == t.g())) throw input_error("family ambient does not match the tower");
  TowerWedges tw = tower_wedges(t);
  std::vector<PlaceWedgeColumns> cols;
  cols.reserve(f.places.size());
  for (const auto& p : f.places) cols.push_back(place_wedge_columns(tw, p));
  std::vector<const PlaceWedgeColumns*> ptrs;
  for (const auto& c : cols) ptrs.push_back(&c);
  return certificate_from_columns(tw, ptrs).cert;
}

FinAbGroup multinorm_obstruction(const AbelianTower& t, const LocalFamily& f) {
  Theorem1Certificate cert = theorem1_certificate(t, f);
  if (!cert.verdict)
    throw internal_error("multinorm certificate failed: " + cert.failed_check);
  return cert.sha_e;
}

Int intersection_obstruction_order(const AbelianTower& t, const LocalFamily& f) {
  f.validate();
  if (!(f.ambient == t.g())) throw input_error("family ambient does not match the tower");
  Int o1 = sha_abelian(t.g1(), push_family(t.pi1(), f)).order();
  Int o2 = sha_abelian(t.g2(), push_family(t.pi2(), f)).order();
  Int oe = sha_abelian(t.ge(), push_family(t.rho(), f)).order();
  if ((o1 * o2) % oe != 0)
    throw internal_error("intersection obstruction order is not integral");
  return o1 * o2 / oe;
}

namespace {

void check_normal_pair(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                       const std::vector<std::size_t>& n2) {
  std::vector<std::size_t> c1 = subgroup_closure_table(g, n1);
  std::vector<std::size_t> c2 = subgroup_closure_table(g, n2);
  if (!is_normal_subgroup(g, c1) || !is_normal_subgroup(g, c2))
    throw input_error("kernels must be normal subgroups");
  std::vector<std::size_t> common;
  std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(common));
  if (common.size() != 1) throw input_error("kernels must intersect trivially");
}

}  // namespace

Int second_obstruction_bound(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                             const std::vector<std::size_t>& n2) {
  check_normal_pair(g, n1, n2);
  Abelianization ab = abelianization(g);
  QuotientTable t1 = quotient_by_normal(g, subgroup_closure_table(g, n1));
  QuotientTable t2 = quotient_by_normal(g, subgroup_closure_table(g, n2));
  Abelianization ab1 = abelianization(t1.group);
  Abelianization ab2 = abelianization(t2.group);
  DirectSum sum = direct_sum(std::vector<FinAbGroup>{ab1.group, ab2.group});
  std::set<Element> seen;
  std::vector<Element> gens;
  for (std::size_t x = 0; x < g.order(); ++x) {
    Element v = sum.group.add(sum.injections[0].apply(ab1.coords[t1.coset_of[x]]),
                              sum.injections[1].apply(ab2.coords[t2.coset_of[x]]));
    if (seen.insert(v).second) gens.push_back(v);
  }
  Int image_order = subgroup_structure(sum.group, gens).order();
  Int total = ab.group.order();
  if (total % image_order != 0) throw internal_error("abelianization index is not integral");
  return total / image_order;
}

PhiReport phi_report(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                     const std::vector<std::size_t>& n2) {
  check_normal_pair(g, n1, n2);
  std::vector<std::size_t> h_gens(n1.begin(), n1.end());
  h_gens.insert(h_gens.end(), n2.begin(), n2.end());
  std::vector<std::size_t> h_elems = subgroup_closure_table(g, h_gens);
  SubgroupTable sub = subgroup_table(g, h_elems);
  Abelianization ab_h = abelianization(sub.group);
  Abelianization ab_g = abelianization(g);
  AbHom hom = induced_ab_map(inclusion_map(sub, g), ab_h, ab_g);
  bool injective = kernel(hom).is_trivial();
  std::optional<std::size_t> witness;
  if (!injective) {
    for (std::size_t h = 0; h < sub.group.order() && !witness; ++h) {
      const Element& c = ab_h.coords[h];
      bool nontrivial = false;
      for (const Int& x : c) nontrivial |= x != 0;
      if (!nontrivial) continue;
      Element img = hom.apply(c);
      bool zero = true;
      for (const Int& x : img) zero &= x == 0;
      if (zero) witness = sub.to_parent[h];
    }
  }
  return PhiReport{injective, std::move(h_elems), ab_h.group, ab_g.group, witness};
}

bool phi_injective(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                   const std::vector<std::size_t>& n2) {
  return phi_report(g, n1, n2).injective;
}

}  // namespace multinorm
