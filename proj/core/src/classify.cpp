#include "isopoint/classify.hpp"

#include <algorithm>
#include <sstream>

namespace isopoint {

namespace {

constexpr ImageClass kClassOrder[] = {
    ImageClass::Surjective,
    ImageClass::Borel,
    ImageClass::SplitCartanNormalizer,
    ImageClass::NonsplitCartanNormalizer,
    ImageClass::Exceptional,
};

bool class_admissible(ImageClass c, uint32_t ell) {
  const FactTable& ft = FactTable::v1();
  switch (c) {
    case ImageClass::Surjective:
    case ImageClass::NonsplitCartanNormalizer:
      return true;
    case ImageClass::Borel:
      return ft.borel_admissible(ell);
    case ImageClass::SplitCartanNormalizer:
      return !ft.split_cartan_excluded(ell);
    case ImageClass::Exceptional:
      return ft.exceptional_admissible(ell);
  }
  return false;
}

RuleVerdict inadmissible_verdict(ImageClass c, uint32_t ell) {
  RuleVerdict v;
  v.rule_id = "class-inadmissible";
  v.outcome = RuleOutcome::Eliminates;
  v.witnesses = {{"image_class", image_class_name(c)}, {"ell", ell}};
  switch (c) {
    case ImageClass::Borel:
      v.justification = "class inadmissible (Mazur): l = " +
                        std::to_string(ell) +
                        " is not among {2, 3, 5, 7, 11, 17, 37}, so no "
                        "non-CM curve over Q contributing an isolated point "
                        "has Borel mod-l image";
      v.citations = {"mazur-borel-primes"};
      break;
    case ImageClass::SplitCartanNormalizer:
      v.justification =
          "class inadmissible: the split Cartan normalizer admits no "
          "non-CM curve over Q for any prime l > 7";
      v.citations = {"split-cartan-excluded"};
      break;
    case ImageClass::Exceptional:
      v.justification =
          "class inadmissible: among primes l > 7 an exceptional image "
          "occurs only at l = 13";
      v.citations = {"exceptional-only-13"};
      break;
    default:
      fail(ErrorKind::InvalidArgument,
           "internal: class is not inadmissible at l = " +
               std::to_string(ell));
  }
  return v;
}

std::vector<uint64_t> unique_degrees(const DegreeProfile& p) {
  std::vector<uint64_t> out;
  for (const auto& e : p.entries) out.push_back(e.degree);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const ExternalImageRecord* find_record(
    const std::vector<ExternalImageRecord>& table, uint32_t ell, ImageClass c,
    const Rational& j) {
  for (const auto& r : table)
    if (r.ell == ell && r.level.value == ell && r.image_class == c &&
        r.j.value == j)
      return &r;
  return nullptr;
}

// j-invariants the fact table expects records for at (class, l)
std::vector<const JInvariant*> expected_js(ImageClass c, uint32_t ell) {
  const FactTable& ft = FactTable::v1();
  std::vector<const JInvariant*> out;
  const std::vector<JInvariant>* src = nullptr;
  if (c == ImageClass::Borel && ell == 17) src = &ft.borel_j_17();
  if (c == ImageClass::Borel && ell == 37) src = &ft.borel_j_37();
  if (c == ImageClass::Exceptional && ell == 13) src = &ft.exceptional_j_13();
  if (src)
    for (const auto& j : *src) out.push_back(&j);
  return out;
}

struct JAnalysis {
  bool eliminated = false;
  bool survived = false;
};

// Riemann-Roch plus (at l = 17) the no-degree-4 rule, applied to every
// closed-point degree of one record; appends the per-j verdicts.
JAnalysis analyze_record_degrees(const ExternalImageRecord& rec,
                                 uint64_t genus, uint32_t ell,
                                 std::vector<RuleVerdict>& verdicts,
                                 std::vector<SurvivingJ>& surviving) {
  DegreeProfile prof = degree_profile(rec.group, rec.level);
  std::vector<uint64_t> degs = unique_degrees(prof);
  std::vector<uint64_t> killed_rr, remaining;
  for (uint64_t d : degs)
    (riemann_roch_eliminates(d, genus) ? killed_rr : remaining).push_back(d);

  RuleVerdict rr;
  rr.rule_id = "riemann-roch";
  rr.citations = {"riemann-roch-isolated"};
  rr.witnesses = {{"record", rec.label},
                  {"j", rec.j.factored},
                  {"degrees", degs},
                  {"eliminated_degrees", killed_rr},
                  {"remaining_degrees", remaining},
                  {"min_degree", prof.min_degree},
                  {"genus", genus}};
  if (remaining.empty()) {
    rr.outcome = RuleOutcome::Eliminates;
    rr.justification =
        "every closed-point degree above j = " + rec.j.factored +
        " exceeds the genus " + std::to_string(genus) +
        " of X1(" + std::to_string(ell) +
        "), so none of these points is isolated";
    if (ell == 13 && prof.min_degree > 3) {
      // the record profile shows all degrees greater than 3 against genus 2
      rr.justification +=
          "; in particular all degrees are greater than 3 while the genus "
          "is " +
          std::to_string(genus);
      rr.citations.push_back("exceptional-j-13");
    }
    verdicts.push_back(rr);
    return {true, false};
  }
  rr.outcome = RuleOutcome::Survives;
  rr.justification =
      "degrees " + nlohmann::json(remaining).dump() + " above j = " +
      rec.j.factored + " do not exceed the genus " + std::to_string(genus) +
      "; the rule is silent on them";
  verdicts.push_back(rr);

  if (ell == 17) {
    std::vector<uint64_t> still;
    std::vector<uint64_t> killed_dkm;
    for (uint64_t d : remaining)
      (d == 4 ? killed_dkm : still).push_back(d);
    if (!killed_dkm.empty()) {
      RuleVerdict dkm;
      dkm.rule_id = "dkm-degree-4";
      dkm.citations = {"dkm-x1-17"};
      dkm.outcome =
          still.empty() ? RuleOutcome::Eliminates : RuleOutcome::Survives;
      dkm.justification =
          "there are no isolated degree-4 points on X1(17): the degree-4 "
          "points move in a positive-dimensional family, eliminating the "
          "remaining candidate above j = " +
          rec.j.factored;
      dkm.witnesses = {{"record", rec.label},
                       {"j", rec.j.factored},
                       {"eliminated_degrees", killed_dkm},
                       {"remaining_degrees", still}};
      verdicts.push_back(dkm);
      remaining = still;
    }
  }
  if (remaining.empty()) return {true, false};

  const FactTable& ft = FactTable::v1();
  RuleVerdict sv;
  sv.rule_id = "not-eliminated";
  sv.outcome = RuleOutcome::Survives;
  sv.witnesses = {{"record", rec.label},
                  {"j", rec.j.factored},
                  {"remaining_degrees", remaining}};
  SurvivingJ s;
  s.j = rec.j;
  s.record_label = rec.label;
  std::string known_row = ft.isolation_known_row(rec.j.value);
  if (!known_row.empty()) {
    s.status = "candidate - isolation known";
    s.citation_row = known_row;
    sv.citations = {known_row};
    sv.justification =
        "no implemented criterion eliminates j = " + rec.j.factored +
        "; the cited result shows the degree-" +
        std::to_string(remaining.front()) + " point is in fact isolated";
  } else {
    s.status = "candidate - open";
    sv.justification =
        "no implemented criterion eliminates j = " + rec.j.factored +
        "; whether its points are isolated is not decided by the encoded "
        "facts, so it is recorded as an open candidate";
  }
  verdicts.push_back(sv);
  surviving.push_back(std::move(s));
  return {false, true};
}

// Borel or exceptional class: fact-table j list drives required records.
void analyze_record_class(ImageClass c, uint32_t ell, uint64_t genus,
                          const std::vector<ExternalImageRecord>& table,
                          ClassAnalysis& ca,
                          std::vector<SurvivingJ>& surviving) {
  auto expected = expected_js(c, ell);
  std::vector<std::string> missing;
  std::vector<const ExternalImageRecord*> recs;
  for (const JInvariant* j : expected) {
    const ExternalImageRecord* r = find_record(table, ell, c, j->value);
    if (r)
      recs.push_back(r);
    else
      missing.push_back(j->factored);
  }
  if (!missing.empty()) {
    RuleVerdict v;
    v.rule_id = "external-records";
    v.outcome = RuleOutcome::NotApplicable;
    v.justification =
        "insufficient external data: no validated image record for " +
        nlohmann::json(missing).dump() + " at l = " + std::to_string(ell);
    v.citations = {c == ImageClass::Exceptional ? "exceptional-j-13"
                                                : "borel-j-17-37"};
    v.witnesses = {{"missing", missing}};
    ca.verdicts.push_back(v);
    ca.final_outcome = "insufficient external data";
    return;
  }
  bool any_survivor = false;
  for (const ExternalImageRecord* r : recs) {
    JAnalysis a =
        analyze_record_degrees(*r, genus, ell, ca.verdicts, surviving);
    any_survivor |= a.survived;
  }
  ca.final_outcome = any_survivor ? "survives" : "eliminated";
}

void analyze_class(ImageClass c, uint32_t ell, uint64_t genus,
                   const std::vector<ExternalImageRecord>& table,
                   ClassAnalysis& ca, std::vector<SurvivingJ>& surviving) {
  const FactTable& ft = FactTable::v1();
  const Modulus m(ell);
  switch (c) {
    case ImageClass::Surjective: {
      DegreeProfile prof =
          degree_profile(build_named({NamedKind::FullGL2}, m), m);
      RuleVerdict v;
      v.rule_id = "riemann-roch";
      v.outcome = RuleOutcome::Eliminates;
      v.justification =
          "a surjective image forces every closed point over a rational "
          "j-invariant to have degree (l^2-1)/2 = " +
          std::to_string(prof.min_degree) + ", which exceeds the genus " +
          std::to_string(genus) + " of X1(" + std::to_string(ell) + ")";
      v.citations = {"riemann-roch-isolated"};
      v.witnesses = {{"min_degree", prof.min_degree},
                     {"genus", genus},
                     {"margin", prof.min_degree - genus}};
      ca.verdicts.push_back(v);
      ca.final_outcome = "eliminated";
      return;
    }
    case ImageClass::Borel: {
      if (genus <= 1) {
        // l = 11 among the admissible primes: the torsion floor plus the
        // genus suffice, no per-j records are needed
        DegreeProfile prof =
            degree_profile(build_named({NamedKind::Borel}, m), m);
        RuleVerdict v;
        v.rule_id = "riemann-roch";
        v.outcome = RuleOutcome::Eliminates;
        v.justification =
            "X1(" + std::to_string(ell) +
            ") has genus one, and every closed point above a rational "
            "j-invariant has degree at least 2 (no rational l-torsion for "
            "l >= 11), so the point cannot be isolated; the maximal Borel "
            "image itself has minimum degree " +
            std::to_string(prof.min_degree);
        v.citations = {"mazur-torsion", "riemann-roch-isolated"};
        v.witnesses = {{"genus", genus},
                       {"degree_floor", 2},
                       {"full_borel_min_degree", prof.min_degree}};
        ca.verdicts.push_back(v);
        ca.final_outcome = "eliminated";
        return;
      }
      analyze_record_class(c, ell, genus, table, ca, surviving);
      return;
    }
    case ImageClass::NonsplitCartanNormalizer: {
      SupersingularResult ss = supersingular_forced(ell);
      RuleVerdict v1;
      v1.rule_id = "supersingular-forced";
      v1.outcome =
          ss.forced ? RuleOutcome::Survives : RuleOutcome::NotApplicable;
      v1.justification = ss.justification;
      v1.citations = ss.citations;
      nlohmann::json scan = nlohmann::json::array();
      for (const auto& chk : ss.scan)
        scan.push_back({{"f", chk.f},
                        {"subgroup_order", chk.subgroup_order},
                        {"embeds", chk.embeds}});
      v1.witnesses = {{"forced", ss.forced},
                      {"via_override", ss.via_override},
                      {"scan", scan}};
      ca.verdicts.push_back(v1);
      if (!ss.forced) {
        ca.final_outcome = "insufficient external data";
        return;
      }

      DegreeProfile prof = degree_profile(
          build_named({NamedKind::NonsplitCartanNormalizer}, m), m);
      RuleVerdict v2;
      v2.rule_id = "riemann-roch";
      v2.outcome = RuleOutcome::Eliminates;
      v2.justification =
          "the full nonsplit Cartan normalizer image yields a single "
          "closed point of degree (l^2-1)/2 = " +
          std::to_string(prof.min_degree) + " > genus " +
          std::to_string(genus) + "; this settles the maximal image";
      v2.citations = {"riemann-roch-isolated"};
      v2.witnesses = {{"min_degree", prof.min_degree}, {"genus", genus}};
      ca.verdicts.push_back(v2);

      uint64_t bound = ft.nonsplit_degree_bound(ell);
      RuleVerdict v3;
      v3.rule_id = "nonsplit-degree-bound";
      v3.outcome = RuleOutcome::Eliminates;
      v3.justification =
          "with potential supersingular reduction every closed point above "
          "the j-invariant has degree at least (l^2-1)/12 = " +
          std::to_string(bound) + ", which exceeds the genus " +
          std::to_string(genus) +
          " of X1(" + std::to_string(ell) +
          "), eliminating every subgroup case of the class";
      v3.citations = {"nonsplit-degree-bound", "supersingular-inertia",
                      "riemann-roch-isolated"};
      v3.witnesses = {{"bound", bound},
                      {"genus", genus},
                      {"margin", bound - genus}};
      ca.verdicts.push_back(v3);
      ca.final_outcome = "eliminated";
      return;
    }
    case ImageClass::Exceptional: {
      analyze_record_class(c, ell, genus, table, ca, surviving);
      return;
    }
    case ImageClass::SplitCartanNormalizer:
      fail(ErrorKind::InvalidArgument,
           "internal: split class reached the analysis stage");
  }
}

}  // namespace

ClassificationReport classify(uint32_t ell, uint32_t n,
                              const std::vector<ExternalImageRecord>& table) {
  if (ell <= 7 || !Modulus(ell).is_prime())
    fail(ErrorKind::InvalidArgument,
         "classify needs a prime l > 7, got " + std::to_string(ell));
  if (n < 1)
    fail(ErrorKind::InvalidArgument, "classify needs n >= 1");
  uint64_t level_n = 1;
  for (uint32_t i = 0; i < n; ++i) {
    level_n *= ell;
    if (level_n > 65535)
      fail(ErrorKind::InvalidArgument,
           "level l^n exceeds the supported modulus range");
  }

  ClassificationReport rep;
  rep.ell = ell;
  rep.n = n;
  rep.curve_level_n = invariants_x1(Modulus(uint32_t(level_n)));
  rep.curve_ell = invariants_x1(Modulus(ell));
  rep.covering = covering_degree(ell, n, 1);

  for (ImageClass c : kClassOrder) {
    ClassAnalysis ca;
    ca.image_class = c;
    if (!class_admissible(c, ell)) {
      ca.verdicts.push_back(inadmissible_verdict(c, ell));
      ca.final_outcome = "eliminated";
    } else {
      ca.verdicts.push_back(level_lowering_ok(c, ell));
      analyze_class(c, ell, rep.curve_ell.genus, table, ca, rep.surviving);
    }
    rep.classes.push_back(std::move(ca));
  }
  return rep;
}

std::vector<ClassificationReport> classify_range(
    const std::vector<uint32_t>& ells, uint32_t n,
    const std::vector<ExternalImageRecord>& table) {
  std::vector<ClassificationReport> out;
  for (uint32_t ell : ells) out.push_back(classify(ell, n, table));
  return out;
}

nlohmann::json report_to_json(const ClassificationReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& ca : r.classes) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : ca.verdicts) verdicts.push_back(verdict_to_json(v));
    classes.push_back({{"image_class", image_class_name(ca.image_class)},
                       {"final_outcome", ca.final_outcome},
                       {"verdicts", verdicts}});
  }
  nlohmann::json surviving = nlohmann::json::array();
  for (const auto& s : r.surviving) {
    nlohmann::json e{{"j_factored", s.j.factored},
                     {"j_value", rational_to_string(s.j.value)},
                     {"status", s.status},
                     {"record_label", s.record_label}};
    if (!s.citation_row.empty()) e["citation_row"] = s.citation_row;
    if (!s.j.alt_factored.empty()) e["j_alt_factored"] = s.j.alt_factored;
    if (!s.j.note.empty()) e["j_note"] = s.j.note;
    surviving.push_back(e);
  }
  auto curve = [](const CurveInvariants& c) {
    return nlohmann::json{{"level", c.level.value},
                          {"index", c.index},
                          {"cusps", c.cusps},
                          {"genus", c.genus}};
  };
  return nlohmann::json{{"report_version", "1"},
                        {"ell", r.ell},
                        {"n", r.n},
                        {"curve_level_n", curve(r.curve_level_n)},
                        {"curve_ell", curve(r.curve_ell)},
                        {"covering_degree", r.covering},
                        {"classes", classes},
                        {"surviving", surviving}};
}

std::string emit_report(const ClassificationReport& r,
                        const std::string& format) {
  if (format == "json") return report_to_json(r).dump(2) + "\n";
  if (format != "text")
    fail(ErrorKind::InvalidArgument, "unknown report format: " + format);

  std::ostringstream os;
  os << "classification at l = " << r.ell << ", n = " << r.n << "\n";
  os << "X1(" << r.curve_level_n.level.value
     << "): genus " << r.curve_level_n.genus << ", index "
     << r.curve_level_n.index << ", cusps " << r.curve_level_n.cusps
     << "; covering degree down to X1(" << r.ell << ") = " << r.covering
     << "; genus of X1(" << r.ell << ") = " << r.curve_ell.genus << "\n";
  size_t step = 1;
  for (const auto& ca : r.classes) {
    for (const auto& v : ca.verdicts) {
      os << "  " << step++ << ". [" << image_class_name(ca.image_class)
         << "] " << v.rule_id << ": " << rule_outcome_name(v.outcome)
         << " -- " << v.justification;
      if (!v.citations.empty()) {
        os << " [";
        for (size_t i = 0; i < v.citations.size(); ++i)
          os << (i ? ", " : "") << v.citations[i];
        os << "]";
      }
      os << "\n";
    }
    os << "  => " << image_class_name(ca.image_class) << ": "
       << ca.final_outcome << "\n";
  }
  if (r.surviving.empty()) {
    os << "survivors: none\n";
  } else {
    os << "survivors:\n";
    for (const auto& s : r.surviving) {
      os << "  j = " << rational_to_string(s.j.value) << " (= " << s.j.factored
         << "): " << s.status;
      if (!s.citation_row.empty()) os << " [" << s.citation_row << "]";
      os << " (record " << s.record_label << ")";
      if (!s.j.note.empty()) os << " -- " << s.j.note;
      os << "\n";
    }
  }
  return os.str();
}

nlohmann::json range_summary(const std::vector<ClassificationReport>& rs) {
  std::vector<uint32_t> survivor_primes;
  std::vector<uint32_t> insufficient;
  nlohmann::json survivors = nlohmann::json::array();
  for (const auto& r : rs) {
    if (!r.surviving.empty()) survivor_primes.push_back(r.ell);
    for (const auto& ca : r.classes)
      if (ca.final_outcome == "insufficient external data") {
        insufficient.push_back(r.ell);
        break;
      }
    for (const auto& s : r.surviving)
      survivors.push_back({{"ell", r.ell},
                           {"j_factored", s.j.factored},
                           {"j_value", rational_to_string(s.j.value)},
                           {"status", s.status}});
  }
  return nlohmann::json{{"report_version", "1"},
                        {"count", rs.size()},
                        {"survivor_primes", survivor_primes},
                        {"survivors", survivors},
                        {"insufficient_data_primes", insufficient}};
}

CnsScanResult scan_cns(uint32_t ell) {
  if (ell < 11 || !Modulus(ell).is_prime())
    fail(ErrorKind::InvalidArgument,
         "scan_cns needs a prime l >= 11, got " + std::to_string(ell));
  const FactTable& ft = FactTable::v1();
  CnsScanResult res;
  res.ell = ell;
  res.bound = ft.nonsplit_degree_bound(ell);
  res.genus = invariants_x1(Modulus(ell)).genus;
  const Modulus m(ell);
  for (const Subgroup& g : enumerate_subgroups_cns_plus(ell)) {
    CnsScanRow row;
    row.label = g.label;
    row.order = g.order;
    row.flags = admissibility(g);
    row.inertia = inertia_compatible_cns(g);
    row.min_degree = degree_profile(g, m).min_degree;
    row.included = row.flags.det_surjective &&
                   row.flags.has_complex_conjugation && row.inertia.ok;
    row.violates_bound = row.min_degree < res.bound;
    res.included_count += row.included;
    if (row.violates_bound) {
      if (row.included)
        ++res.included_violators;
      else
        ++res.excluded_violators;
    }
    res.rows.push_back(std::move(row));
  }
  return res;
}

nlohmann::json scan_to_json(const CnsScanResult& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"label", r.label},
                    {"order", r.order},
                    {"det_surjective", r.flags.det_surjective},
                    {"has_complex_conjugation", r.flags.has_complex_conjugation},
                    {"contains_minus_identity", r.flags.contains_minus_identity},
                    {"inertia_meet_order", r.inertia.meet_order},
                    {"inertia_required", r.inertia.required},
                    {"inertia_ok", r.inertia.ok},
                    {"min_degree", r.min_degree},
                    {"included", r.included},
                    {"violates_bound", r.violates_bound}});
  return nlohmann::json{{"ell", s.ell},
                        {"bound", s.bound},
                        {"genus", s.genus},
                        {"rows", rows},
                        {"included_count", s.included_count},
                        {"included_violators", s.included_violators},
                        {"excluded_violators", s.excluded_violators}};
}

}  // namespace isopoint
