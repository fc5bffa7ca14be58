#include "multinorm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "multinorm/errors.hpp"

namespace multinorm {

std::vector<FinAbGroup> enumerate_abelian_groups(int max_order) {
  std::vector<FinAbGroup> out{FinAbGroup::trivial()};
  std::vector<Int> chain;
  std::function<void(Int, Int)> extend = [&](Int product, Int last) {
    for (Int d = last; product * d <= max_order; ++d) {
      if (d % last != 0) continue;
      chain.push_back(d);
      out.emplace_back(chain);
      extend(product * d, d);
      chain.pop_back();
    }
  };
  // first factor ranges over all values >= 2; later factors are multiples
  for (Int d = 2; d <= max_order; ++d) {
    chain.assign(1, d);
    out.emplace_back(chain);
    extend(d, d);
  }
  return out;
}

std::vector<SubgroupInfo> enumerate_subgroups(const FinAbGroup& g) {
  std::map<std::vector<Element>, std::vector<Element>> seen;  // elements -> generators
  std::vector<std::vector<Element>> order;
  std::vector<Element> all = g.elements();

  auto key_of = [&](const std::set<Element>& s) {
    return std::vector<Element>(s.begin(), s.end());
  };

  std::vector<Element> trivial_gens;
  std::vector<Element> trivial_key = key_of(closure_elements(g, {}));
  seen.emplace(trivial_key, trivial_gens);
  order.push_back(trivial_key);

  for (std::size_t head = 0; head < order.size(); ++head) {
    std::vector<Element> base_key = order[head];
    std::vector<Element> base_gens = seen.at(base_key);
    for (const Element& x : all) {
      if (std::binary_search(base_key.begin(), base_key.end(), x)) continue;
      std::vector<Element> gens = base_gens;
      gens.push_back(x);
      std::vector<Element> key = key_of(closure_elements(g, gens));
      if (seen.emplace(key, gens).second) order.push_back(key);
    }
  }

  std::vector<SubgroupInfo> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    SubgroupInfo info{key, seen.at(key), false};
    // cyclic iff some element generates the whole set
    for (const Element& x : key) {
      if (closure_elements(g, {x}).size() == key.size()) {
        info.cyclic = true;
        info.generators = {x};
        break;
      }
    }
    out.push_back(std::move(info));
  }
  return out;
}

namespace {

struct GroupTask {
  FinAbGroup group;
  std::vector<SubgroupInfo> subgroups;
  std::vector<Subgroup> structures;
  std::vector<std::size_t> cyclic_indices;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // trivially intersecting
};

bool trivially_intersect(const std::vector<Element>& a, const std::vector<Element>& b) {
  std::size_t common = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++common;
      if (common > 1) return false;
      ++i;
      ++j;
    }
  }
  return common == 1;  // exactly the identity
}

// Membership identities for the section wedges: for every e in G_E and h in
// N2, (mu1(e) /\ pi1(h), 0) lies in the image of the pair-projection wedge
// map out of G /\ G.
bool wedge_relation_holds(const TowerWedges& tw) {
  const AbelianTower& t = tw.tower;
  IntMatrix t0 = vstack(tw.wpi1.matrix(), tw.wpi2.matrix());
  std::vector<Int> orders = tw.w1.group.invariant_factors();
  const auto& o2 = tw.w2.group.invariant_factors();
  orders.insert(orders.end(), o2.begin(), o2.end());
  LatticeSolver solver(hstack(t0, IntMatrix::diagonal(orders)));

  auto n2_elems = closure_elements(t.g(), t.n2().generators);
  std::vector<Element> ge_elems = t.ge().elements();
  for (std::size_t i = 0; i < ge_elems.size(); ++i) {
    for (const Element& h : n2_elems) {
      Element w = tw.w1.encode(tw.mu1[i], t.pi1().apply(h));
      std::vector<Int> target(w.begin(), w.end());
      target.resize(orders.size());
      if (!solver.contains(target)) return false;
    }
  }
  return true;
}

}  // namespace

SweepStats run_sweep(const SweepOptions& opt) {
  SweepStats stats;
  std::vector<GroupTask> tasks;
  for (FinAbGroup& g : enumerate_abelian_groups(opt.max_order)) {
    GroupTask task{std::move(g), {}, {}, {}, {}};
    task.subgroups = enumerate_subgroups(task.group);
    for (std::size_t i = 0; i < task.subgroups.size(); ++i) {
      task.structures.push_back(subgroup_structure(task.group, task.subgroups[i].generators));
      if (task.subgroups[i].cyclic || task.subgroups[i].elements.size() == 1)
        task.cyclic_indices.push_back(i);
    }
    for (std::size_t i = 0; i < task.subgroups.size(); ++i)
      for (std::size_t j = 0; j < task.subgroups.size(); ++j)
        if (trivially_intersect(task.subgroups[i].elements, task.subgroups[j].elements))
          task.pairs.emplace_back(i, j);
    tasks.push_back(std::move(task));
  }
  stats.groups = tasks.size();

  // flatten (group, pair) instances
  std::vector<std::pair<std::size_t, std::size_t>> instances;
  for (std::size_t gi = 0; gi < tasks.size(); ++gi)
    for (std::size_t pi = 0; pi < tasks[gi].pairs.size(); ++pi) instances.emplace_back(gi, pi);
  stats.towers = instances.size();

  std::mutex failure_mutex;
  std::map<std::size_t, std::vector<std::string>> failure_map;  // instance -> messages
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> cert_count{0};

  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= instances.size()) return;
      auto [gi, pi] = instances[idx];
      const GroupTask& task = tasks[gi];
      auto [s1, s2] = task.pairs[pi];
      std::vector<std::string> errors;
      try {
        AbelianTower tower(task.group, task.structures[s1], task.structures[s2]);
        TowerWedges tw = tower_wedges(tower);
        if (opt.check_wedge_relation && !wedge_relation_holds(tw))
          errors.push_back("wedge relation membership failed");

        std::map<std::size_t, PlaceWedgeColumns> cache;
        auto columns_for = [&](std::size_t si) -> const PlaceWedgeColumns* {
          auto it = cache.find(si);
          if (it == cache.end())
            it = cache.emplace(si, place_wedge_columns(tw, task.structures[si])).first;
          return &it->second;
        };

        std::uint64_t local_certs = 0;
        auto run_family = [&](const std::vector<std::size_t>& place_indices,
                              const std::string& family_desc) {
          std::vector<const PlaceWedgeColumns*> places;
          for (std::size_t si : place_indices) places.push_back(columns_for(si));
          CertificateOutcome outcome = certificate_from_columns(tw, places);
          ++local_certs;
          if (!outcome.cert.verdict)
            errors.push_back(family_desc + ": certificate check '" +
                             outcome.cert.failed_check + "' failed");
          // order identity |Sha(L1)||Sha(L2)| = |Sha_cap| * |Coker(g)|
          if (outcome.sha_1_order * outcome.sha_2_order % outcome.sha_e_order != 0) {
            errors.push_back(family_desc + ": intersection order is not integral");
          } else {
            Int cap = outcome.sha_1_order * outcome.sha_2_order / outcome.sha_e_order;
            if (cap * outcome.coker_t_order != outcome.sha_1_order * outcome.sha_2_order)
              errors.push_back(family_desc + ": exact-sequence order identity failed");
          }
        };

        run_family(task.cyclic_indices, "all-cyclic family");
        for (int fam = 0; fam < opt.families; ++fam) {
          SplitMix64 rng(mix_seed(opt.seed, (idx << 8) ^ static_cast<std::uint64_t>(fam)));
          std::size_t count = 1 + rng.below(4);
          std::vector<std::size_t> picks(count);
          for (auto& p : picks) p = rng.below(task.subgroups.size());
          run_family(picks, "family " + std::to_string(fam));
        }
        cert_count.fetch_add(local_certs);
      } catch (const std::exception& e) {
        errors.push_back(std::string("exception: ") + e.what());
      }
      if (!errors.empty()) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failure_map.emplace(idx, std::move(errors));
      }
    }
  };

  unsigned n_threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  stats.certificates = cert_count.load();
  for (const auto& [idx, messages] : failure_map) {
    auto [gi, pi] = instances[idx];
    const GroupTask& task = tasks[gi];
    auto [s1, s2] = task.pairs[pi];
    for (const auto& m : messages) {
      std::ostringstream desc;
      desc << "G = " << task.group.to_string() << ", |N1| = "
           << task.subgroups[s1].elements.size() << ", |N2| = "
           << task.subgroups[s2].elements.size() << ": " << m;
      stats.failures.push_back(SweepFailure{desc.str()});
    }
  }
  return stats;
}

}  // namespace multinorm
