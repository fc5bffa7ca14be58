#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multinorm/obstruction.hpp"

namespace multinorm {

/// (Z/n)^* in invariant-factor form with an exact two-way codec between
/// residues and group coordinates (CRT into prime-power parts, brute-force
/// discrete logs per part).
class UnitGroup {
 public:
  explicit UnitGroup(long n);

  long modulus() const { return n_; }
  const FinAbGroup& group() const { return group_; }

  Element to_vector(long residue) const;
  long to_residue(const Element& v) const;

 private:
  long n_;
  FinAbGroup group_;
  std::vector<long> gen_residues_;   // one generator per raw coordinate
  std::vector<long> gen_orders_;
  IntMatrix raw_to_canon_, canon_to_raw_;
  // per prime-power part: modulus, generators (indices into the raw
  // coordinates), dlog table residue -> exponents
  struct Part {
    long pk;
    std::vector<std::size_t> coords;
    std::vector<std::int32_t> dlog;  // packed mixed-radix exponents, -1 absent
    std::vector<long> radices;
  };
  std::vector<Part> parts_;
};

/// Abelian extension of Q inside the cyclotomic field of its conductor:
/// L = Q(zeta_n)^H for H a subgroup of (Z/n)^*.  The stored conductor is
/// always the true (minimal) one; construction reduces it.
class CycloField {
 public:
  static CycloField from_conductor_subgroup(long n, const std::vector<long>& h_generators);
  /// Quadratic field Q(sqrt(d)); d squarefree after reduction, d != 0, 1.
  static CycloField quadratic(long d);
  static CycloField rationals();

  long conductor() const { return conductor_; }
  const std::vector<long>& fixing_subgroup() const { return fixing_; }  // sorted residues
  const UnitGroup& units() const { return units_; }
  const FinAbGroup& galois_group() const { return galois_.group; }
  Int degree() const { return galois_.group.order(); }

  /// Class of a residue coprime to the conductor in Gal(L/Q).
  Element class_of(long residue) const;

  /// Residues whose classes are the canonical Galois generators.
  std::vector<long> galois_generator_residues() const;

  bool operator==(const CycloField& other) const {
    return conductor_ == other.conductor_ && fixing_ == other.fixing_;
  }

  std::string describe() const;

 private:
  CycloField(long n, std::vector<long> fixing_elements);

  long conductor_;
  std::vector<long> fixing_;  // all elements of H, sorted
  UnitGroup units_;
  QuotientData galois_;
};

struct Place {
  bool infinite = false;
  long prime = 0;
  static Place at_prime(long p) { return Place{false, p}; }
  static Place at_infinity() { return Place{true, 0}; }
  std::string label() const;
};

struct PlaceData {
  Place place;
  Subgroup decomposition;
  bool ramified = false;
};

/// Decomposition subgroup of Gal(L/Q) at a place: for a prime p with
/// conductor n = p^k m, the image of the full preimage of <p mod m>; at the
/// infinite place the image of <-1>.
PlaceData decomposition_subgroup(const CycloField& l, const Place& place);

/// Finite truncation of the decomposition data: every prime dividing the
/// conductor, the infinite place, and one representative cyclic subgroup
/// per Galois element (each element is a Frobenius at infinitely many
/// unramified primes; these contribute nothing to the wedge sum but keep
/// the family honest).
LocalFamily realizable_family(const CycloField& l);

CycloField compositum(const CycloField& l1, const CycloField& l2);
CycloField intersection(const CycloField& l1, const CycloField& l2);

struct FieldTower {
  CycloField l, l1, l2, e;
  AbelianTower tower;
  LocalFamily family;
};
FieldTower tower_from_fields(const CycloField& l1, const CycloField& l2);

/// Natural surjection Gal(L/Q) -> Gal(L'/Q) for a subfield L' of L
/// (fixing subgroup of L contained in that of L', lifted to a common
/// conductor).
AbHom field_quotient_map(const CycloField& l, const CycloField& sub);

long euler_phi(long n);
std::vector<std::pair<long, int>> factorize(long n);

}  // namespace multinorm
