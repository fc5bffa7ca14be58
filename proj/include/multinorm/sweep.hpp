#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "multinorm/obstruction.hpp"

namespace multinorm {

/// Exhaustive verification sweep: every abelian group up to max_order, every
/// ordered pair of subgroups with trivial intersection, `families` seeded
/// random local families per tower plus the family of all cyclic subgroups.
/// Each instance checks the certificate verdict and the order identity
/// |Sha(L1)| * |Sha(L2)| = |Sha_cap| * |Coker(g)|.
struct SweepOptions {
  int max_order = 32;
  int families = 25;
  std::uint64_t seed = 1;
  int threads = 0;          // 0 = hardware concurrency
  bool check_wedge_relation = false;  // membership identities for the section wedges
};

struct SweepFailure {
  std::string description;
};

struct SweepStats {
  std::uint64_t groups = 0;
  std::uint64_t towers = 0;
  std::uint64_t certificates = 0;
  std::vector<SweepFailure> failures;
};

SweepStats run_sweep(const SweepOptions& opt);

/// All finite abelian groups of order 1..max_order, by invariant factors.
std::vector<FinAbGroup> enumerate_abelian_groups(int max_order);

/// Every subgroup of g (element sets with a generating set), breadth-first
/// over the subgroup lattice, deterministic order.
struct SubgroupInfo {
  std::vector<Element> elements;  // sorted
  std::vector<Element> generators;
  bool cyclic = false;
};
std::vector<SubgroupInfo> enumerate_subgroups(const FinAbGroup& g);

}  // namespace multinorm
