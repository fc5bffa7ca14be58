#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multinorm/grouptable.hpp"
#include "multinorm/wedge.hpp"

namespace multinorm {

/// A finite indexed family of decomposition subgroups of a common Galois
/// group.  Duplicates are allowed and never affect any cokernel.  The caller
/// is responsible for listing every place whose decomposition group is
/// non-cyclic; cyclic places contribute nothing to the wedge sum.
struct LocalFamily {
  FinAbGroup ambient;
  std::vector<Subgroup> places;
  std::vector<std::string> labels;  // empty, or one label per place

  void validate() const;
};

/// The map (+)_v (G^v /\ G^v) -> G /\ G restricting to each place's wedge
/// inclusion.  Its cokernel is the norm-principle obstruction.
AbHom epsilon_map(const FinAbGroup& g, const LocalFamily& f);

struct ShaData {
  WedgeSquare wedge;
  QuotientData coker;  // of the wedge-inclusion image lattice in G /\ G
  const FinAbGroup& group() const { return coker.group; }
};
ShaData sha_data(const FinAbGroup& g, const LocalFamily& f);

/// Obstruction to the norm principle for an abelian extension with Galois
/// group g and decomposition data f, as Coker(epsilon) in invariant factors.
FinAbGroup sha_abelian(const FinAbGroup& g, const LocalFamily& f);

/// Decomposition data of the subextension cut out by the surjection pi:
/// every place maps to its image subgroup, in the same order.
LocalFamily push_family(const AbHom& pi, const LocalFamily& f);

/// The induced map Coker(eps over source) -> Coker(eps over pushed family),
/// i.e. the restriction of norm-principle obstructions along a subextension.
AbHom sha_restriction_map(const AbHom& pi, const LocalFamily& f);

/// Galois data of a compositum tower L = L1 L2 over K: G = Gal(L/K) with
/// N_i = Gal(L/L_i) intersecting trivially, plus the derived projections
/// pi_i : G -> G_i = G/N_i, rho : G -> G_E = G/(N1 N2) and
/// rho_i : G_i -> G_E satisfying rho = rho_i . pi_i.
class AbelianTower {
 public:
  AbelianTower(FinAbGroup g, Subgroup n1, Subgroup n2);

  const FinAbGroup& g() const { return g_; }
  const Subgroup& n1() const { return n1_; }
  const Subgroup& n2() const { return n2_; }
  const FinAbGroup& g1() const { return q1_.group; }
  const FinAbGroup& g2() const { return q2_.group; }
  const FinAbGroup& ge() const { return qe_.group; }
  const AbHom& pi1() const { return q1_.proj; }
  const AbHom& pi2() const { return q2_.proj; }
  const AbHom& rho() const { return qe_.proj; }
  const AbHom& rho1() const { return rho1_; }
  const AbHom& rho2() const { return rho2_; }
  const QuotientData& q1() const { return q1_; }
  const QuotientData& q2() const { return q2_; }
  const QuotientData& qe() const { return qe_; }

 private:
  FinAbGroup g_;
  Subgroup n1_, n2_;
  QuotientData q1_, q2_, qe_;
  AbHom rho1_, rho2_;
};

struct CokerG {
  FinAbGroup coker;      // Coker(T), T = restriction to L1 x restriction to L2
  AbHom t_map;           // Sha(L/K) -> Sha(L1/K) (+) Sha(L2/K)
  QuotientData coker_data;
  DirectSum target_sum;  // Sha(L1) (+) Sha(L2)
  ShaData sha_l, sha_1, sha_2;
};
CokerG coker_g(const AbelianTower& t, const LocalFamily& f);

/// Certificate that Coker(g) and Sha(E/K) agree, carried by the explicit
/// maps P (from the signed projection-wedge pair) and S (from the section
/// mu of rho).  All checks are exact; any failure names the check and can
/// only indicate an implementation bug.
struct Theorem1Certificate {
  FinAbGroup coker_t;
  FinAbGroup sha_e;
  std::vector<Element> section_mu;   // per element of G_E, lex order
  std::vector<Element> section_mu1;  // pi1 of the above
  std::optional<AbHom> map_p;        // Coker(T) -> Sha(E/K)
  std::optional<AbHom> map_s;        // Sha(E/K) -> Coker(T)
  bool verdict = false;
  std::string failed_check;  // empty when verdict is true
};

/// Family-independent tower data, reusable across many local families.
struct TowerWedges {
  AbelianTower tower;
  WedgeSquare wg, w1, w2, we;
  AbHom wpi1, wpi2, wrho1, wrho2;
  std::vector<Element> mu, mu1;  // sections over the lex-ordered elements of G_E
  IntMatrix s_raw;               // raw wedge pairs of G_E -> W1 coordinates via mu1
};
TowerWedges tower_wedges(const AbelianTower& t);

/// Wedge-inclusion image columns of one place at the four tower levels.
struct PlaceWedgeColumns {
  IntMatrix at_l, at_1, at_2, at_e;
};
PlaceWedgeColumns place_wedge_columns(const TowerWedges& tw, const Subgroup& place);

struct CertificateOutcome {
  Theorem1Certificate cert;
  Int sha_l_order, sha_1_order, sha_2_order, sha_e_order, coker_t_order;
};
CertificateOutcome certificate_from_columns(const TowerWedges& tw,
                                            const std::vector<const PlaceWedgeColumns*>& places);

Theorem1Certificate theorem1_certificate(const AbelianTower& t, const LocalFamily& f);

/// Sha(E/K) for E the intersection field; checked against Coker(g) via the
/// certificate.  Throws internal_error if the certificate fails.
FinAbGroup multinorm_obstruction(const AbelianTower& t, const LocalFamily& f);

/// |Sha(L1)| * |Sha(L2)| / |Sha(E)|; the division is asserted exact.
Int intersection_obstruction_order(const AbelianTower& t, const LocalFamily& f);

/// Upper bound [M:K]/[M1 M2:K] for the order of the second obstruction,
/// computed from abelianizations: |G^ab| / |image of G^ab in G1^ab x G2^ab|.
/// A bound of 1 certifies the second obstruction trivial.
Int second_obstruction_bound(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                             const std::vector<std::size_t>& n2);

/// Injectivity criterion: the natural map Gal(L/E)^ab -> Gal(L/K)^ab is
/// injective, where Gal(L/E) corresponds to the subgroup generated by N1
/// and N2.  Always true when G is abelian.
bool phi_injective(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                   const std::vector<std::size_t>& n2);

/// Witness variant: a nontrivial element of the kernel of
/// Gal(L/E)^ab -> Gal(L/K)^ab, as a parent-group element index, if any.
struct PhiReport {
  bool injective;
  std::vector<std::size_t> h_elements;     // Gal(L/E) inside G, sorted
  FinAbGroup h_ab, g_ab;
  std::optional<std::size_t> witness;      // element of H whose class is in the kernel
};
PhiReport phi_report(const CayleyGroup& g, const std::vector<std::size_t>& n1,
                     const std::vector<std::size_t>& n2);

}  // namespace multinorm
