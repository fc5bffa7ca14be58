#include "multinorm/document.hpp"

#include <sstream>

#include "multinorm/errors.hpp"

namespace multinorm {

using nlohmann::json;

namespace {

long get_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw parse_error(where + ": expected an integer");
  return j.get<long>();
}

json int_to_json(const Int& x) {
  static const Int big = Int(1) << 62;
  if (abs_int(x) < big) return json(static_cast<std::int64_t>(x));
  return json(x.str());
}

json factors_to_json(const FinAbGroup& g) {
  json arr = json::array();
  for (const Int& d : g.invariant_factors()) arr.push_back(int_to_json(d));
  return arr;
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json element_to_json(const Element& e) {
  json arr = json::array();
  for (const Int& x : e) arr.push_back(int_to_json(x));
  return arr;
}

Element parse_element(const json& doc, const FinAbGroup& g, const std::string& where) {
  if (!doc.is_array()) throw parse_error(where + ": expected an element vector");
  if (doc.size() != g.rank()) throw parse_error(where + ": element has wrong length");
  Element e;
  for (std::size_t i = 0; i < doc.size(); ++i)
    e.emplace_back(get_long(doc[i], where + "[" + std::to_string(i) + "]"));
  return g.reduce(e);
}

Subgroup parse_subgroup(const json& doc, const FinAbGroup& g, const std::string& where) {
  if (!doc.is_object() || !doc.contains("generators"))
    throw parse_error(where + ": expected an object with \"generators\"");
  const json& gens = doc.at("generators");
  if (!gens.is_array()) throw parse_error(where + ".generators: expected an array");
  std::vector<Element> elems;
  for (std::size_t i = 0; i < gens.size(); ++i)
    elems.push_back(parse_element(gens[i], g, where + ".generators[" + std::to_string(i) + "]"));
  return subgroup_structure(g, elems);
}

struct TowerInput {
  AbelianTower tower;
  LocalFamily family;
  std::string describe_l1, describe_l2, describe_e;
};

CayleyGroup parse_cayley(const json& doc, const std::string& where,
                         std::vector<std::vector<std::size_t>>* element_perms) {
  if (doc.is_object() && doc.contains("table")) {
    const json& tab = doc.at("table");
    if (!tab.is_array()) throw parse_error(where + ".table: expected an array of rows");
    std::vector<std::vector<std::size_t>> rows;
    for (const auto& r : tab) {
      if (!r.is_array()) throw parse_error(where + ".table: expected rows of indices");
      std::vector<std::size_t> row;
      for (const auto& v : r) row.push_back(static_cast<std::size_t>(get_long(v, where + ".table")));
      rows.push_back(std::move(row));
    }
    std::vector<std::string> names;
    if (doc.contains("names"))
      for (const auto& s : doc.at("names")) names.push_back(s.get<std::string>());
    try {
      return CayleyGroup(std::move(rows), std::move(names));
    } catch (const input_error& e) {
      throw input_error(where + ": " + e.what());
    }
  }
  if (doc.is_object() && doc.contains("permutation_generators")) {
    const json& gens = doc.at("permutation_generators");
    std::vector<std::vector<std::size_t>> perms;
    for (const auto& p : gens) {
      std::vector<std::size_t> perm;
      for (const auto& v : p)
        perm.push_back(static_cast<std::size_t>(get_long(v, where + ".permutation_generators")));
      perms.push_back(std::move(perm));
    }
    long bound = doc.contains("order_bound")
                     ? get_long(doc.at("order_bound"), where + ".order_bound")
                     : static_cast<long>(CayleyGroup::kMaxOrder);
    GeneratedGroup gen = group_from_generators(static_cast<std::size_t>(bound), perms);
    if (element_perms) *element_perms = gen.elements;
    return gen.group;
  }
  throw parse_error(where + ": expected \"table\" or \"permutation_generators\"");
}

std::vector<std::size_t> parse_cayley_subgroup(
    const json& doc, const CayleyGroup& g,
    const std::vector<std::vector<std::size_t>>& element_perms, const std::string& where) {
  if (doc.is_object() && doc.contains("elements")) {
    std::vector<std::size_t> out;
    for (const auto& v : doc.at("elements")) {
      long i = get_long(v, where + ".elements");
      if (i < 0 || static_cast<std::size_t>(i) >= g.order())
        throw parse_error(where + ".elements: index out of range");
      out.push_back(static_cast<std::size_t>(i));
    }
    return out;
  }
  if (doc.is_object() && doc.contains("permutations")) {
    if (element_perms.empty())
      throw parse_error(where + ": permutation form needs a permutation-generated group");
    std::vector<std::size_t> out;
    for (const auto& p : doc.at("permutations")) {
      std::vector<std::size_t> perm;
      for (const auto& v : p)
        perm.push_back(static_cast<std::size_t>(get_long(v, where + ".permutations")));
      auto it = std::find(element_perms.begin(), element_perms.end(), perm);
      if (it == element_perms.end())
        throw input_error(where + ": permutation is not an element of the group");
      out.push_back(static_cast<std::size_t>(it - element_perms.begin()));
    }
    return out;
  }
  throw parse_error(where + ": expected \"elements\" or \"permutations\"");
}

std::string holds_phrase(const FinAbGroup& g, const std::string& principle) {
  if (g.is_trivial()) return g.to_string() + " — " + principle + " holds";
  return g.to_string() + " — " + principle + " fails";
}

json family_to_json(const LocalFamily& fam) {
  json places = json::array();
  for (std::size_t i = 0; i < fam.places.size(); ++i) {
    json p;
    p["structure"] = factors_to_json(fam.places[i].abstract);
    json gens = json::array();
    for (const auto& g : fam.places[i].generators) gens.push_back(element_to_json(g));
    p["generators"] = gens;
    if (!fam.labels.empty()) p["label"] = fam.labels[i];
    places.push_back(std::move(p));
  }
  return places;
}

}  // namespace

FinAbGroup parse_group_doc(const json& doc) {
  if (!doc.is_object() || !doc.contains("invariant_factors"))
    throw parse_error("group: expected an object with \"invariant_factors\"");
  const json& fs = doc.at("invariant_factors");
  if (!fs.is_array()) throw parse_error("group.invariant_factors: expected an array");
  std::vector<Int> factors;
  for (const auto& f : fs) factors.emplace_back(get_long(f, "group.invariant_factors"));
  try {
    return FinAbGroup(std::move(factors));
  } catch (const input_error& e) {
    throw parse_error(std::string("group: ") + e.what());
  }
}

LocalFamily parse_family_doc(const json& doc, const FinAbGroup& g) {
  if (!doc.is_array()) throw parse_error("family: expected an array of subgroups");
  LocalFamily fam{g, {}, {}};
  bool any_label = false;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    fam.places.push_back(parse_subgroup(doc[i], g, "family[" + std::to_string(i) + "]"));
    std::string label;
    if (doc[i].is_object() && doc[i].contains("label")) {
      label = doc[i].at("label").get<std::string>();
      any_label = true;
    }
    fam.labels.push_back(label);
  }
  if (!any_label) fam.labels.clear();
  return fam;
}

CycloField parse_field_doc(const json& doc) {
  if (doc.is_string()) {
    std::string s = doc.get<std::string>();
    if (s.rfind("sqrt:", 0) == 0) {
      long d;
      try {
        d = std::stol(s.substr(5));
      } catch (...) {
        throw parse_error("field: malformed sqrt:d shorthand \"" + s + "\"");
      }
      return CycloField::quadratic(d);
    }
    if (s == "Q") return CycloField::rationals();
    throw parse_error("field: unrecognized shorthand \"" + s + "\"");
  }
  if (!doc.is_object()) throw parse_error("field: expected an object or shorthand string");
  if (doc.contains("quadratic"))
    return CycloField::quadratic(get_long(doc.at("quadratic"), "field.quadratic"));
  if (doc.contains("compositum")) {
    const json& parts = doc.at("compositum");
    if (!parts.is_array() || parts.empty())
      throw parse_error("field.compositum: expected a nonempty array");
    CycloField acc = parse_field_doc(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) acc = compositum(acc, parse_field_doc(parts[i]));
    return acc;
  }
  if (doc.contains("conductor")) {
    long n = get_long(doc.at("conductor"), "field.conductor");
    std::vector<long> gens;
    if (doc.contains("fixing_subgroup"))
      for (const auto& v : doc.at("fixing_subgroup"))
        gens.push_back(get_long(v, "field.fixing_subgroup"));
    return CycloField::from_conductor_subgroup(n, gens);
  }
  throw parse_error("field: expected \"quadratic\", \"conductor\" or \"compositum\"");
}

nlohmann::json group_to_json(const FinAbGroup& g) { return factors_to_json(g); }

nlohmann::json hom_to_json(const AbHom& f) {
  json j;
  j["source"] = factors_to_json(f.source());
  j["target"] = factors_to_json(f.target());
  j["matrix"] = matrix_to_json(f.matrix());
  return j;
}

namespace {

RunResult run_sha(const json& input) {
  FinAbGroup sha = FinAbGroup::trivial();
  json j;
  if (input.is_object() && input.contains("group")) {
    FinAbGroup g = parse_group_doc(input.at("group"));
    LocalFamily fam = input.contains("family") ? parse_family_doc(input.at("family"), g)
                                               : LocalFamily{g, {}, {}};
    sha = sha_abelian(g, fam);
    j["group"] = factors_to_json(g);
    j["places"] = family_to_json(fam);
  } else {
    CycloField field = parse_field_doc(input.is_object() && input.contains("field")
                                           ? input.at("field")
                                           : input);
    LocalFamily fam = realizable_family(field);
    sha = sha_abelian(field.galois_group(), fam);
    j["field"] = {{"conductor", field.conductor()},
                  {"degree", int_to_json(field.degree())},
                  {"galois_group", factors_to_json(field.galois_group())}};
    j["places"] = family_to_json(fam);
  }
  j["command"] = "sha";
  j["sha"] = factors_to_json(sha);
  j["sha_rendered"] = sha.to_string();
  return RunResult{sha.to_string() + "\n", std::move(j)};
}

TowerInput parse_tower_input(const json& input) {
  if (input.contains("l1") || input.contains("l2")) {
    if (!input.contains("l1") || !input.contains("l2"))
      throw parse_error("pair document needs both \"l1\" and \"l2\"");
    CycloField l1 = parse_field_doc(input.at("l1"));
    CycloField l2 = parse_field_doc(input.at("l2"));
    FieldTower ft = tower_from_fields(l1, l2);
    return TowerInput{std::move(ft.tower), std::move(ft.family),
                      "L1: " + ft.l1.describe(), "L2: " + ft.l2.describe(),
                      "E = L1 ∩ L2: " + ft.e.describe()};
  }
  if (!input.contains("group"))
    throw parse_error("pair document needs \"l1\"/\"l2\" fields or a group-theoretic tower");
  FinAbGroup g = parse_group_doc(input.at("group"));
  if (!input.contains("n1") || !input.contains("n2"))
    throw parse_error("tower document needs \"n1\" and \"n2\"");
  Subgroup n1 = parse_subgroup(input.at("n1"), g, "n1");
  Subgroup n2 = parse_subgroup(input.at("n2"), g, "n2");
  AbelianTower tower(g, n1, n2);
  LocalFamily fam = input.contains("family") ? parse_family_doc(input.at("family"), g)
                                             : LocalFamily{g, {}, {}};
  return TowerInput{std::move(tower), std::move(fam), "", "", ""};
}

RunResult run_multinorm(const json& input) {
  TowerInput ti = parse_tower_input(input);
  Theorem1Certificate cert = theorem1_certificate(ti.tower, ti.family);
  if (!cert.verdict)
    throw internal_error("multinorm certificate failed: " + cert.failed_check);
  std::ostringstream text;
  if (!ti.describe_e.empty())
    text << ti.describe_l1 << "\n" << ti.describe_l2 << "\n" << ti.describe_e << "\n";
  text << "Sha(L1,L2/K) = Sha(E/K) = "
       << holds_phrase(cert.sha_e, "multinorm principle") << "\n";
  text << "coker(g) = " << cert.coker_t.to_string() << " (isomorphic, certificate verified)\n";
  json j;
  j["command"] = "multinorm";
  j["sha_e"] = factors_to_json(cert.sha_e);
  j["sha_rendered"] = cert.sha_e.to_string();
  j["coker_g"] = factors_to_json(cert.coker_t);
  j["multinorm_principle_holds"] = cert.sha_e.is_trivial();
  j["certificate_verdict"] = cert.verdict;
  return RunResult{text.str(), std::move(j)};
}

RunResult run_certificate(const json& input) {
  TowerInput ti = parse_tower_input(input);
  Theorem1Certificate cert = theorem1_certificate(ti.tower, ti.family);
  std::ostringstream text;
  text << "coker(T) = " << cert.coker_t.to_string() << "\n";
  text << "Sha(E/K) = " << cert.sha_e.to_string() << "\n";
  if (cert.map_p) text << "P matrix = " << cert.map_p->matrix().to_string() << "\n";
  if (cert.map_s) text << "S matrix = " << cert.map_s->matrix().to_string() << "\n";
  text << "verdict: " << (cert.verdict ? "true" : "false") << "\n";
  if (!cert.verdict) text << "failed check: " << cert.failed_check << "\n";
  json j;
  j["command"] = "certificate";
  j["coker_t"] = factors_to_json(cert.coker_t);
  j["sha_e"] = factors_to_json(cert.sha_e);
  if (cert.map_p) j["map_p"] = hom_to_json(*cert.map_p);
  if (cert.map_s) j["map_s"] = hom_to_json(*cert.map_s);
  json mu = json::array();
  for (const auto& m : cert.section_mu) mu.push_back(element_to_json(m));
  j["section_mu"] = mu;
  json mu1 = json::array();
  for (const auto& m : cert.section_mu1) mu1.push_back(element_to_json(m));
  j["section_mu1"] = mu1;
  j["verdict"] = cert.verdict;
  if (!cert.verdict) j["failed_check"] = cert.failed_check;
  if (!cert.verdict) throw internal_error("certificate failed: " + cert.failed_check);
  return RunResult{text.str(), std::move(j)};
}

RunResult run_intersection(const json& input) {
  TowerInput ti = parse_tower_input(input);
  Int order = intersection_obstruction_order(ti.tower, ti.family);
  std::ostringstream text;
  text << "|Sha_cap(L1,L2/K)| = " << order << "\n";
  json j;
  j["command"] = "intersection";
  j["order"] = int_to_json(order);
  return RunResult{text.str(), std::move(j)};
}

RunResult run_bound(const json& input, bool phi_only) {
  if (!input.is_object() || !input.contains("group"))
    throw parse_error("document needs a \"group\" (table or permutation generators)");
  std::vector<std::vector<std::size_t>> perms;
  CayleyGroup g = parse_cayley(input.at("group"), "group", &perms);
  if (!input.contains("n1") || !input.contains("n2"))
    throw parse_error("document needs \"n1\" and \"n2\"");
  std::vector<std::size_t> n1 = parse_cayley_subgroup(input.at("n1"), g, perms, "n1");
  std::vector<std::size_t> n2 = parse_cayley_subgroup(input.at("n2"), g, perms, "n2");

  PhiReport report = phi_report(g, n1, n2);
  std::ostringstream text;
  json j;
  j["command"] = phi_only ? "phi" : "bound";
  if (!phi_only) {
    Int bound = second_obstruction_bound(g, n1, n2);
    text << "second-obstruction bound [M:K]/[M1M2:K] = " << bound << "\n";
    j["bound"] = int_to_json(bound);
    j["second_obstruction_trivial"] = bound == 1;
  }
  text << "phi injective: " << (report.injective ? "true" : "false") << "\n";
  j["phi_injective"] = report.injective;
  if (!report.injective && report.witness) {
    text << "kernel witness: " << g.name_of(*report.witness)
         << " (nontrivial in Gal(L/E)^ab, trivial in Gal(L/K)^ab)\n";
    j["kernel_witness"] = static_cast<std::int64_t>(*report.witness);
  }
  j["h_ab"] = factors_to_json(report.h_ab);
  j["g_ab"] = factors_to_json(report.g_ab);
  return RunResult{text.str(), std::move(j)};
}

RunResult run_wedge(const json& input) {
  FinAbGroup g = parse_group_doc(input.is_object() && input.contains("group")
                                     ? input.at("group")
                                     : input);
  WedgeSquare w = exterior_square(g);
  json j;
  j["command"] = "wedge";
  j["group"] = factors_to_json(g);
  j["wedge"] = factors_to_json(w.group);
  j["sha_rendered"] = w.group.to_string();
  return RunResult{w.group.to_string() + "\n", std::move(j)};
}

RunResult run_sweep_command(const json& input) {
  SweepOptions opt;
  if (input.is_object()) {
    if (input.contains("max_order")) opt.max_order = static_cast<int>(get_long(input.at("max_order"), "max_order"));
    if (input.contains("families")) opt.families = static_cast<int>(get_long(input.at("families"), "families"));
    if (input.contains("seed")) opt.seed = static_cast<std::uint64_t>(get_long(input.at("seed"), "seed"));
    if (input.contains("threads")) opt.threads = static_cast<int>(get_long(input.at("threads"), "threads"));
    if (input.contains("check_wedge_relation"))
      opt.check_wedge_relation = input.at("check_wedge_relation").get<bool>();
  }
  SweepStats stats = run_sweep(opt);
  std::ostringstream text;
  text << "groups: " << stats.groups << "\n";
  text << "towers: " << stats.towers << "\n";
  text << "certificates: " << stats.certificates << "\n";
  text << "failures: " << stats.failures.size() << "\n";
  for (std::size_t i = 0; i < stats.failures.size() && i < 50; ++i)
    text << "  " << stats.failures[i].description << "\n";
  json j;
  j["command"] = "sweep";
  j["groups"] = stats.groups;
  j["towers"] = stats.towers;
  j["certificates"] = stats.certificates;
  json fails = json::array();
  for (const auto& f : stats.failures) fails.push_back(f.description);
  j["failures"] = fails;
  if (!stats.failures.empty())
    throw internal_error("sweep found " + std::to_string(stats.failures.size()) +
                         " failing certificates");
  return RunResult{text.str(), std::move(j)};
}

}  // namespace

RunResult run_command(const std::string& command, const json& input) {
  if (command == "sha") return run_sha(input);
  if (command == "multinorm") return run_multinorm(input);
  if (command == "certificate") return run_certificate(input);
  if (command == "intersection") return run_intersection(input);
  if (command == "bound") return run_bound(input, false);
  if (command == "phi") return run_bound(input, true);
  if (command == "wedge") return run_wedge(input);
  if (command == "sweep") return run_sweep_command(input);
  throw parse_error("unknown command \"" + command + "\"");
}

}  // namespace multinorm
