// isopoint: exact GL2(Z/l^nZ) computations for isolated points on X1(l^n).
// Exit codes: 0 success, 2 data or argument errors, 3 computation caps.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isopoint/classify.hpp"

namespace {

using namespace isopoint;

std::pair<uint32_t, uint32_t> parse_range(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos || pos == 0 || pos + 2 >= s.size())
    fail(ErrorKind::InvalidArgument, "range must look like A..B, got " + s);
  uint32_t lo = 0, hi = 0;
  try {
    lo = uint32_t(std::stoul(s.substr(0, pos)));
    hi = uint32_t(std::stoul(s.substr(pos + 2)));
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "range must look like A..B, got " + s);
  }
  if (lo > hi)
    fail(ErrorKind::InvalidArgument, "empty range " + s);
  return {lo, hi};
}

std::vector<uint32_t> primes_in(uint32_t lo, uint32_t hi) {
  std::vector<uint32_t> out;
  for (uint32_t p = std::max(lo, 2u); p <= hi; ++p)
    if (Modulus(p).is_prime()) out.push_back(p);
  return out;
}

std::string mat_str(const Mat2& m) {
  std::ostringstream os;
  os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
  return os.str();
}

nlohmann::json profile_to_json(const DegreeProfile& p) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : p.entries)
    entries.push_back({{"degree", e.degree},
                       {"orbit_field_degree", e.orbit_field_degree},
                       {"cx", e.half ? "1/2" : "1"},
                       {"count", e.count}});
  return nlohmann::json{{"level", p.level.value},
                        {"group", p.group_label},
                        {"min_degree", p.min_degree},
                        {"degree_weighted_sum", p.degree_weighted_sum()},
                        {"entries", entries}};
}

Subgroup resolve_group(const std::string& spec, uint32_t level_flag) {
  std::ifstream in(spec);
  if (in.good()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::DataError,
           "subgroup file " + spec + ": " + std::string(e.what()));
    }
    Subgroup g = subgroup_from_json(doc);
    if (level_flag && g.modulus.value != level_flag)
      fail(ErrorKind::InvalidArgument,
           "subgroup file level " + std::to_string(g.modulus.value) +
               " does not match --level " + std::to_string(level_flag));
    return g;
  }
  auto [kind, mod] = parse_group_id(spec);
  if (level_flag && mod.value != level_flag)
    fail(ErrorKind::InvalidArgument,
         "group id level " + std::to_string(mod.value) +
             " does not match --level " + std::to_string(level_flag));
  return build_named(kind, mod);
}

int cmd_invariants(uint32_t level) {
  CurveInvariants inv = invariants_x1(Modulus(level));
  nlohmann::json out{{"level", inv.level.value},
                     {"index", inv.index},
                     {"cusps", inv.cusps},
                     {"genus", inv.genus},
                     {"bound", nullptr}};
  if (Modulus(level).is_prime() && level >= 5) {
    GenusBound gb = genus_bound_ok(level);
    out["bound"] = gb.bound;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_degrees(const std::string& group, uint32_t level, bool as_json,
                bool as_csv) {
  Subgroup g = resolve_group(group, level);
  DegreeProfile p = degree_profile(g, g.modulus);
  if (as_csv) {
    std::cout << "degree,cx,count\n";
    for (const auto& e : p.entries)
      std::cout << e.degree << "," << (e.half ? "1/2" : "1") << "," << e.count
                << "\n";
    return 0;
  }
  if (as_json) {
    std::cout << profile_to_json(p).dump(2) << "\n";
    return 0;
  }
  std::cout << "group " << p.group_label << " at level " << p.level.value
            << ": min degree " << p.min_degree << ", degree-weighted sum "
            << p.degree_weighted_sum() << "\n";
  for (const auto& e : p.entries)
    std::cout << "  degree " << e.degree << "  cx " << (e.half ? "1/2" : "1")
              << "  count " << e.count << "  orbit field degree "
              << e.orbit_field_degree << "\n";
  return 0;
}

int cmd_verify_semicartan(const std::string& range, bool eps_alt,
                          bool as_json) {
  auto [lo, hi] = parse_range(range);
  std::vector<EmbedCheck> checks = verify_semicartan_range(lo, hi, eps_alt);
  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e{{"ell", c.ell},
                       {"f", c.f},
                       {"subgroup_order", c.subgroup_order},
                       {"embeds", c.embeds}};
      if (c.witness) e["witness"] = mat_str(*c.witness);
      arr.push_back(e);
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& c : checks) {
    std::cout << "l=" << c.ell << " f=" << c.f << ": ";
    if (c.embeds)
      std::cout << "D^f embeds (order " << c.subgroup_order << ", witness "
                << mat_str(*c.witness) << ")\n";
    else
      std::cout << "no embedding of D^f (order " << c.subgroup_order << ")\n";
  }
  return 0;
}

int cmd_scan_cns(uint32_t ell, bool as_json) {
  CnsScanResult s = scan_cns(ell);
  if (as_json) {
    std::cout << scan_to_json(s).dump(2) << "\n";
    return 0;
  }
  std::cout << "C_ns^+ subgroup scan at l=" << s.ell << ": " << s.rows.size()
            << " subgroups, " << s.included_count
            << " pass the admissibility filter; degree bound " << s.bound
            << ", genus " << s.genus << "\n";
  std::cout << "included violators: " << s.included_violators
            << ", excluded violators: " << s.excluded_violators << "\n";
  for (const auto& r : s.rows) {
    std::cout << "  " << r.label << " order " << r.order << " min degree "
              << r.min_degree << (r.included ? "" : " [filtered out]")
              << (r.violates_bound ? " [below bound]" : "") << "\n";
  }
  return 0;
}

std::vector<ExternalImageRecord> table_or_builtin(const std::string& path) {
  if (path.empty()) return builtin_image_table();
  return load_image_table(path);
}

int cmd_classify(uint32_t ell, uint32_t n, const std::string& table_path,
                 bool as_json) {
  auto table = table_or_builtin(table_path);
  ClassificationReport r = classify(ell, n, table);
  std::cout << emit_report(r, as_json ? "json" : "text");
  return 0;
}

int cmd_classify_range(const std::string& ells, uint32_t n,
                       const std::string& table_path, bool as_json) {
  auto [lo, hi] = parse_range(ells);
  std::vector<uint32_t> primes = primes_in(lo, hi);
  for (uint32_t p : primes)
    if (p <= 7)
      fail(ErrorKind::InvalidArgument,
           "classify-range needs primes > 7, range contains " +
               std::to_string(p));
  auto table = table_or_builtin(table_path);
  std::vector<ClassificationReport> reports = classify_range(primes, n, table);
  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    nlohmann::json out{{"reports", arr}, {"summary", range_summary(reports)}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& r : reports) std::cout << emit_report(r, "text") << "\n";
  std::cout << "summary: " << range_summary(reports).dump(2) << "\n";
  return 0;
}

int cmd_facts(bool as_json) {
  const FactTable& ft = FactTable::v1();
  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : ft.rows())
      arr.push_back(
          {{"id", r.id}, {"statement", r.statement}, {"citation", r.citation}});
    std::cout << nlohmann::json{{"version", ft.version()}, {"rows", arr}}.dump(2)
              << "\n";
    return 0;
  }
  std::cout << "fact table version " << ft.version() << "\n";
  for (const auto& r : ft.rows()) {
    std::cout << r.id << "\n  " << r.statement << "\n  [" << r.citation
              << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "isopoint: exact GL2(Z/l^nZ) computation of isolated-point "
      "classifications on X1(l^n)"};
  app.require_subcommand(1);

  uint32_t level = 0;
  auto* inv = app.add_subcommand("invariants", "X1(N) index, cusps, genus");
  inv->add_option("--level", level, "level N >= 5")->required();

  std::string group_spec;
  uint32_t deg_level = 0;
  bool deg_json = false, deg_csv = false;
  auto* deg = app.add_subcommand("degrees",
                                 "closed-point degree profile of a subgroup");
  deg->add_option("--group", group_spec,
                  "named id (borel@17, cns+@37, semicartan^6@13, gl2@13) or "
                  "a subgroup JSON file")
      ->required();
  deg->add_option("--level", deg_level,
                  "level cross-check (defaults to the group's own level)");
  deg->add_flag("--json", deg_json, "JSON output");
  deg->add_flag("--csv", deg_csv, "CSV (degree,cx,count) output");

  std::string ell_range = "11..47";
  bool eps_alt = false, ver_json = false;
  auto* ver = app.add_subcommand("verify", "re-run verification scans");
  auto* sc = ver->add_subcommand(
      "semicartan", "scan for D^f inside the nonsplit Cartan normalizer");
  sc->add_option("--ell-range", ell_range, "prime range A..B");
  sc->add_flag("--epsilon-alt", eps_alt,
               "use the second-smallest nonresidue for C_ns");
  sc->add_flag("--json", ver_json, "JSON output");

  uint32_t scan_ell = 0;
  bool scan_json = false;
  auto* scan = app.add_subcommand("scan", "exhaustive subgroup scans");
  auto* cns = scan->add_subcommand(
      "cns", "all C_ns^+ subgroups against the (l^2-1)/12 degree bound");
  cns->add_option("--ell", scan_ell, "prime l >= 11")->required();
  cns->add_flag("--json", scan_json, "JSON output");

  uint32_t cl_ell = 0, cl_n = 1;
  std::string cl_table;
  bool cl_json = false;
  auto* cl = app.add_subcommand(
      "classify", "decide which image classes and j-invariants survive");
  cl->add_option("--ell", cl_ell, "prime l > 7")->required();
  cl->add_option("--n", cl_n, "prime-power exponent n >= 1");
  cl->add_option("--table", cl_table,
                 "external image record JSON file (default: builtin table)");
  cl->add_flag("--json", cl_json, "JSON output");

  std::string cr_ells = "11..37";
  uint32_t cr_n = 1;
  std::string cr_table;
  bool cr_json = false;
  auto* cr = app.add_subcommand("classify-range",
                                "classify every prime in a range");
  cr->add_option("--ells", cr_ells, "prime range A..B, primes must be > 7");
  cr->add_option("--n", cr_n, "prime-power exponent n >= 1");
  cr->add_option("--table", cr_table,
                 "external image record JSON file (default: builtin table)");
  cr->add_flag("--json", cr_json, "JSON output");

  bool facts_json = false;
  auto* facts = app.add_subcommand("facts", "cited external facts");
  auto* fl = facts->add_subcommand("list", "dump the fact table");
  fl->add_flag("--json", facts_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (inv->parsed()) return cmd_invariants(level);
    if (deg->parsed()) return cmd_degrees(group_spec, deg_level, deg_json,
                                          deg_csv);
    if (ver->parsed() && sc->parsed())
      return cmd_verify_semicartan(ell_range, eps_alt, ver_json);
    if (scan->parsed() && cns->parsed())
      return cmd_scan_cns(scan_ell, scan_json);
    if (cl->parsed()) return cmd_classify(cl_ell, cl_n, cl_table, cl_json);
    if (cr->parsed())
      return cmd_classify_range(cr_ells, cr_n, cr_table, cr_json);
    if (facts->parsed() && fl->parsed()) return cmd_facts(facts_json);
    std::cerr << "error: missing subcommand\n";
    return 2;
  } catch (const IsopointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
