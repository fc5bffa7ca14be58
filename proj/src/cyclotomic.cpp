#include "multinorm/cyclotomic.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>

#include "multinorm/errors.hpp"

namespace multinorm {

namespace {

constexpr long kMaxConductor = 2'000'000;
constexpr std::size_t kMaxFamilyDegree = 4096;

long powmod(long base, long exp, long mod) {
  if (mod == 1) return 0;
  unsigned __int128 acc = 1, b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<long>(acc);
}

long egcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  long x1, y1;
  long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

long inv_mod(long a, long m) {
  long x, y;
  long g = egcd(((a % m) + m) % m, m, x, y);
  if (g != 1) throw internal_error("modular inverse of a noninvertible residue");
  return ((x % m) + m) % m;
}

/// x with x = a (mod s), x = b (mod t); s, t coprime.
long crt(long a, long s, long b, long t) {
  if (s == 1) return ((b % t) + t) % t;
  if (t == 1) return ((a % s) + s) % s;
  long n = s * t;
  unsigned __int128 x = (unsigned __int128)(((a % s) + s) % s) * t % n * inv_mod(t, s) % n;
  unsigned __int128 y = (unsigned __int128)(((b % t) + t) % t) * s % n * inv_mod(s, t) % n;
  return static_cast<long>((x + y) % n);
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long multiplicative_order(long a, long mod, long group_order) {
  // exact order via the prime factorization of the group order
  long ord = group_order;
  for (auto [q, e] : factorize(group_order)) {
    (void)e;
    while (ord % q == 0 && powmod(a, ord / q, mod) == 1) ord /= q;
  }
  return ord;
}

long primitive_root(long pk, long phi) {
  for (long g = 2; g < pk; ++g) {
    if (std::gcd(g, pk) != 1) continue;
    if (multiplicative_order(g, pk, phi) == phi) return g;
  }
  throw internal_error("no primitive root found");
}

int kronecker_symbol(long a, long b) {
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && b % 2 == 0) return 0;
  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  int k = 1;
  if (v % 2 == 1) {
    long am8 = ((a % 8) + 8) % 8;
    if (am8 == 3 || am8 == 5) k = -1;
  }
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  a = ((a % b) + b) % b;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long bm8 = b % 8;
      if (bm8 == 3 || bm8 == 5) k = -k;
    }
    std::swap(a, b);
    if (a % 4 == 3 && b % 4 == 3) k = -k;
    a %= b;
  }
  return b == 1 ? k : 0;
}

/// Minimal generating subsequence: keep an element iff it is outside the
/// span of the ones kept so far.
std::vector<Element> thin_generators(const FinAbGroup& ambient, const std::vector<Element>& gens) {
  std::vector<Element> kept;
  std::optional<LatticeSolver> solver;
  auto rebuild = [&]() {
    IntMatrix cols(ambient.rank(), kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) cols.set_column(j, kept[j]);
    solver.emplace(hstack(cols, IntMatrix::diagonal(ambient.invariant_factors())));
  };
  rebuild();
  for (const auto& g : gens) {
    Element r = ambient.reduce(g);
    if (solver->contains(r)) continue;
    kept.push_back(r);
    rebuild();
  }
  return kept;
}

std::vector<long> multiplicative_closure(long n, const std::vector<long>& gens) {
  std::set<long> seen{1 % n};
  std::vector<long> queue{1 % n};
  while (!queue.empty()) {
    long cur = queue.back();
    queue.pop_back();
    for (long g : gens) {
      long nxt = static_cast<long>((unsigned __int128)cur * (((g % n) + n) % n) % n);
      if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return std::vector<long>(seen.begin(), seen.end());
}

/// Small multiplicative generating set of a sorted residue subgroup.
std::vector<long> thin_residues(long n, const std::vector<long>& elements) {
  std::vector<long> gens;
  std::vector<long> span = multiplicative_closure(n, {});
  for (long x : elements) {
    if (std::binary_search(span.begin(), span.end(), x)) continue;
    gens.push_back(x);
    span = multiplicative_closure(n, gens);
  }
  return gens;
}

}  // namespace

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

long euler_phi(long n) {
  long phi = 1;
  for (auto [p, e] : factorize(n)) {
    long pk = 1;
    for (int i = 1; i < e; ++i) pk *= p;
    phi *= pk * (p - 1);
  }
  return phi;
}

UnitGroup::UnitGroup(long n) : n_(n) {
  if (n < 1) throw input_error("modulus must be positive");
  if (n > kMaxConductor) throw input_error("conductor exceeds the supported bound");
  for (auto [p, e] : factorize(n)) {
    long pk = 1;
    for (int i = 0; i < e; ++i) pk *= p;
    long rest = n / pk;
    Part part{pk, {}, {}, {}};
    std::vector<long> local_gens;
    if (p == 2) {
      if (e == 2) local_gens = {3};
      if (e >= 3) local_gens = {pk - 1, 5};
    } else {
      local_gens = {primitive_root(pk, euler_phi(pk))};
    }
    for (long g : local_gens) {
      part.coords.push_back(gen_residues_.size());
      part.radices.push_back(multiplicative_order(g, pk, euler_phi(pk)));
      gen_orders_.push_back(part.radices.back());
      gen_residues_.push_back(crt(g, pk, 1, rest));
    }
    if (!local_gens.empty()) {
      // brute-force discrete logs over the part
      part.dlog.assign(pk, -1);
      long total = 1;
      for (long r : part.radices) total *= r;
      for (long code = 0; code < total; ++code) {
        long residue = 1, c = code;
        for (std::size_t i = 0; i < local_gens.size(); ++i) {
          long e_i = c % part.radices[i];
          c /= part.radices[i];
          residue = static_cast<long>((unsigned __int128)residue *
                                      powmod(local_gens[i], e_i, pk) % pk);
        }
        if (part.dlog[residue] == -1) part.dlog[residue] = static_cast<std::int32_t>(code);
      }
      for (long r = 1; r < pk; ++r)
        if (std::gcd(r, pk) == 1 && part.dlog[r] == -1)
          throw internal_error("discrete log table failed to cover the unit group");
      parts_.push_back(std::move(part));
    }
  }
  std::vector<Int> orders;
  for (long o : gen_orders_) orders.emplace_back(o);
  Renormalization ren = renormalize_orders(orders);
  group_ = ren.group;
  raw_to_canon_ = ren.raw_to_canon;
  canon_to_raw_ = ren.canon_to_raw;
}

Element UnitGroup::to_vector(long residue) const {
  long r = ((residue % n_) + n_) % n_;
  if (std::gcd(r, n_) != 1) throw input_error("residue is not coprime to the modulus");
  std::vector<Int> raw(gen_residues_.size());
  for (const Part& part : parts_) {
    long code = part.dlog[r % part.pk];
    for (std::size_t i = 0; i < part.coords.size(); ++i) {
      raw[part.coords[i]] = code % part.radices[i];
      code /= part.radices[i];
    }
  }
  return group_.reduce(apply(raw_to_canon_, raw));
}

long UnitGroup::to_residue(const Element& v) const {
  std::vector<Int> raw = apply(canon_to_raw_, group_.reduce(v));
  long r = 1 % n_;
  for (std::size_t i = 0; i < gen_residues_.size(); ++i) {
    long e = static_cast<long>(mod_pos(raw[i], Int(gen_orders_[i])));
    r = static_cast<long>((unsigned __int128)r * powmod(gen_residues_[i], e, n_) % n_);
  }
  return r;
}

CycloField::CycloField(long n, std::vector<long> fixing_elements)
    : conductor_(n), fixing_(std::move(fixing_elements)), units_(1), galois_{FinAbGroup(), AbHom::identity(FinAbGroup()), IntMatrix()} {
  // conductor reduction: smallest divisor m of n whose cyclotomic kernel is
  // contained in the fixing subgroup
  std::set<long> fix(fixing_.begin(), fixing_.end());
  for (long m = 1; m <= conductor_; ++m) {
    if (conductor_ % m != 0) continue;
    bool kernel_inside = true;
    for (long x = 1 % m; x < conductor_ && kernel_inside; x += std::max<long>(m, 1)) {
      if (x == 0) continue;
      if (std::gcd(x, conductor_) != 1) continue;
      kernel_inside = fix.count(x) > 0;
    }
    if (!kernel_inside) continue;
    if (m < conductor_) {
      std::set<long> reduced;
      for (long x : fixing_) reduced.insert(m == 1 ? 0 : x % m);
      conductor_ = m;
      fixing_.assign(reduced.begin(), reduced.end());
    }
    break;
  }
  units_ = UnitGroup(conductor_);
  std::vector<Element> classes;
  for (long x : fixing_) classes.push_back(units_.to_vector(x));
  std::vector<Element> gens = thin_generators(units_.group(), classes);
  IntMatrix cols(units_.group().rank(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) cols.set_column(j, gens[j]);
  galois_ = quotient_by_columns(units_.group(), cols);
}

CycloField CycloField::from_conductor_subgroup(long n, const std::vector<long>& h_generators) {
  if (n < 1) throw input_error("conductor must be positive");
  if (n > kMaxConductor) throw input_error("conductor exceeds the supported bound");
  for (long h : h_generators)
    if (std::gcd(((h % n) + n) % n, n) != 1)
      throw input_error("fixing subgroup generator is not coprime to the conductor");
  std::vector<long> gens;
  for (long h : h_generators) gens.push_back(((h % n) + n) % n);
  return CycloField(n, multiplicative_closure(n, gens));
}

CycloField CycloField::rationals() { return CycloField(1, {0}); }

CycloField CycloField::quadratic(long d) {
  if (d == 0) throw input_error("quadratic field needs a nonzero discriminant seed");
  // squarefree reduction
  long sign = d < 0 ? -1 : 1;
  long ad = d < 0 ? -d : d;
  long sf = 1;
  for (auto [p, e] : factorize(ad))
    if (e % 2 == 1) sf *= p;
  d = sign * sf;
  if (d == 1) throw input_error("quadratic field needs a nonsquare seed");
  long disc = (((d % 4) + 4) % 4 == 1) ? d : 4 * d;
  long n = disc < 0 ? -disc : disc;
  std::vector<long> fixing;
  for (long x = 1; x < n; ++x) {
    if (std::gcd(x, n) != 1) continue;
    if (kronecker_symbol(disc, x) == 1) fixing.push_back(x);
  }
  if (n == 1) fixing = {0};
  return CycloField(n, std::move(fixing));
}

Element CycloField::class_of(long residue) const {
  return galois_.proj.apply(units_.to_vector(residue));
}

std::string CycloField::describe() const {
  std::ostringstream out;
  out << "conductor " << conductor_ << ", degree " << degree()
      << ", Gal = " << galois_.group.to_string();
  return out.str();
}

std::vector<long> CycloField::galois_generator_residues() const {
  std::vector<long> out;
  for (std::size_t i = 0; i < galois_.group.rank(); ++i)
    out.push_back(units_.to_residue(galois_.group.reduce(galois_.lift.column(i))));
  return out;
}

std::string Place::label() const {
  return infinite ? "infinity" : "p=" + std::to_string(prime);
}

PlaceData decomposition_subgroup(const CycloField& l, const Place& place) {
  const long n = l.conductor();
  if (place.infinite) {
    std::vector<Element> gens{l.class_of(n - 1)};
    Subgroup d = subgroup_structure(l.galois_group(), gens);
    bool ram = !d.is_trivial();
    return PlaceData{place, std::move(d), ram};
  }
  const long p = place.prime;
  if (!is_prime(p)) throw input_error("place must be a prime or the infinite place");
  long pk = 1;
  long m = n;
  while (m % p == 0) {
    m /= p;
    pk *= p;
  }
  std::vector<long> inertia_res;
  if (pk >= 3) {
    if (p == 2) {
      if (pk == 4) inertia_res = {crt(3, 4, 1, m)};
      if (pk >= 8) inertia_res = {crt(pk - 1, pk, 1, m), crt(5, pk, 1, m)};
    } else {
      inertia_res = {crt(primitive_root(pk, euler_phi(pk)), pk, 1, m)};
    }
  }
  std::vector<Element> inertia;
  for (long r : inertia_res) inertia.push_back(l.class_of(r));
  bool ram = !subgroup_structure(l.galois_group(), inertia).is_trivial();
  std::vector<Element> gens = inertia;
  gens.push_back(l.class_of(crt(1, pk, p % m, m)));
  return PlaceData{place, subgroup_structure(l.galois_group(), gens), ram};
}

LocalFamily realizable_family(const CycloField& l) {
  if (l.degree() > Int(kMaxFamilyDegree))
    throw input_error("field degree exceeds the family enumeration bound");
  LocalFamily fam{l.galois_group(), {}, {}};
  for (auto [p, e] : factorize(l.conductor())) {
    (void)e;
    PlaceData d = decomposition_subgroup(l, Place::at_prime(p));
    fam.places.push_back(std::move(d.decomposition));
    fam.labels.push_back(d.place.label());
  }
  PlaceData inf = decomposition_subgroup(l, Place::at_infinity());
  fam.places.push_back(std::move(inf.decomposition));
  fam.labels.push_back(inf.place.label());
  // one representative Frobenius class per element
  std::size_t idx = 0;
  for (const Element& g : l.galois_group().elements(kMaxFamilyDegree)) {
    fam.places.push_back(subgroup_structure(l.galois_group(), {g}));
    fam.labels.push_back("frobenius-class-" + std::to_string(idx++));
  }
  return fam;
}

namespace {

/// Residues of the fixing subgroup lifted to modulus big (n divides big).
std::vector<long> lift_fixing(const CycloField& l, long big) {
  if (big == 1) return {0};
  std::vector<long> out;
  const long n = l.conductor();
  for (long x = 1; x < big; ++x) {
    if (std::gcd(x, big) != 1) continue;
    if (n == 1 ||
        std::binary_search(l.fixing_subgroup().begin(), l.fixing_subgroup().end(), x % n))
      out.push_back(x);
  }
  return out;
}

}  // namespace

CycloField compositum(const CycloField& l1, const CycloField& l2) {
  long big = std::lcm(l1.conductor(), l2.conductor());
  if (big > kMaxConductor) throw input_error("compositum conductor exceeds the supported bound");
  std::vector<long> h1 = lift_fixing(l1, big);
  std::vector<long> h2 = lift_fixing(l2, big);
  std::vector<long> common;
  std::set_intersection(h1.begin(), h1.end(), h2.begin(), h2.end(), std::back_inserter(common));
  return CycloField::from_conductor_subgroup(big, thin_residues(big, common));
}

CycloField intersection(const CycloField& l1, const CycloField& l2) {
  long big = std::lcm(l1.conductor(), l2.conductor());
  if (big > kMaxConductor) throw input_error("compositum conductor exceeds the supported bound");
  std::vector<long> gens = thin_residues(big, lift_fixing(l1, big));
  for (long g : thin_residues(big, lift_fixing(l2, big))) gens.push_back(g);
  return CycloField::from_conductor_subgroup(big, gens);
}

AbHom field_quotient_map(const CycloField& l, const CycloField& sub) {
  if (sub.conductor() > 1 && l.conductor() % sub.conductor() != 0)
    throw input_error("not a subfield: conductor does not divide");
  IntMatrix cols(sub.galois_group().rank(), l.galois_group().rank());
  std::vector<long> gen_res = l.galois_generator_residues();
  try {
    for (std::size_t j = 0; j < gen_res.size(); ++j)
      cols.set_column(j, sub.class_of(gen_res[j]));
    AbHom q(l.galois_group(), sub.galois_group(), std::move(cols));
    if (!is_surjective(q)) throw input_error("not a subfield: quotient map is not onto");
    return q;
  } catch (const internal_error&) {
    throw input_error("not a subfield: induced map is not well defined");
  }
}

FieldTower tower_from_fields(const CycloField& l1, const CycloField& l2) {
  CycloField l = compositum(l1, l2);
  CycloField e = intersection(l1, l2);
  AbHom q1 = field_quotient_map(l, l1);
  AbHom q2 = field_quotient_map(l, l2);
  AbelianTower tower(l.galois_group(), kernel(q1), kernel(q2));
  if (!is_isomorphic(tower.ge(), e.galois_group()))
    throw internal_error("tower intersection group disagrees with the intersection field");
  LocalFamily fam = realizable_family(l);
  return FieldTower{std::move(l), l1, l2, std::move(e), std::move(tower), std::move(fam)};
}

}  // namespace multinorm
