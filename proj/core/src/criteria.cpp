#include "isopoint/criteria.hpp"

#include <numeric>
#include <set>

namespace isopoint {

std::string image_class_name(ImageClass c) {
  switch (c) {
    case ImageClass::Surjective:
      return "surjective";
    case ImageClass::Borel:
      return "borel";
    case ImageClass::SplitCartanNormalizer:
      return "split_cartan_normalizer";
    case ImageClass::NonsplitCartanNormalizer:
      return "nonsplit_cartan_normalizer";
    case ImageClass::Exceptional:
      return "exceptional";
  }
  fail(ErrorKind::InvalidArgument, "unknown image class value");
}

ImageClass image_class_from_name(const std::string& name) {
  if (name == "surjective") return ImageClass::Surjective;
  if (name == "borel") return ImageClass::Borel;
  if (name == "split_cartan_normalizer")
    return ImageClass::SplitCartanNormalizer;
  if (name == "nonsplit_cartan_normalizer")
    return ImageClass::NonsplitCartanNormalizer;
  if (name == "exceptional") return ImageClass::Exceptional;
  fail(ErrorKind::DataError, "unknown image class: " + name);
}

std::string rule_outcome_name(RuleOutcome o) {
  switch (o) {
    case RuleOutcome::Eliminates:
      return "eliminates";
    case RuleOutcome::Survives:
      return "survives";
    case RuleOutcome::NotApplicable:
      return "not_applicable";
  }
  fail(ErrorKind::InvalidArgument, "unknown rule outcome value");
}

nlohmann::json verdict_to_json(const RuleVerdict& v) {
  return nlohmann::json{{"rule", v.rule_id},
                        {"outcome", rule_outcome_name(v.outcome)},
                        {"justification", v.justification},
                        {"citations", v.citations},
                        {"witnesses", v.witnesses}};
}

namespace {

void require_odd_prime(uint32_t ell, uint32_t at_least, const char* who) {
  if (ell < at_least || ell % 2 == 0 || !Modulus(ell).is_prime())
    fail(ErrorKind::InvalidArgument,
         std::string(who) + " needs an odd prime l >= " +
             std::to_string(at_least) + ", got " + std::to_string(ell));
}

uint32_t unit_order(uint32_t a, uint32_t ell) {
  uint32_t x = a % ell, o = 1;
  while (x != 1) {
    x = uint32_t((uint64_t(x) * a) % ell);
    ++o;
  }
  return o;
}

}  // namespace

RamificationData make_ramification(uint32_t ell, uint32_t e) {
  require_odd_prime(ell, 5, "make_ramification");
  if (e != 1 && e != 2 && e != 3 && e != 4 && e != 6)
    fail(ErrorKind::InvalidArgument,
         "ramification exponent must lie in {1,2,3,4,6}, got " +
             std::to_string(e));
  return RamificationData{e, std::gcd(ell - 1, e)};
}

std::vector<uint32_t> admissible_f(uint32_t ell) {
  require_odd_prime(ell, 5, "admissible_f");
  std::set<uint32_t> fs;
  for (uint32_t e : {1u, 2u, 3u, 4u, 6u}) fs.insert(std::gcd(ell - 1, e));
  return {fs.begin(), fs.end()};
}

EmbedCheck semi_cartan_embeds(uint32_t ell, uint32_t f,
                              std::optional<uint32_t> epsilon) {
  require_odd_prime(ell, 5, "semi_cartan_embeds");
  auto fs = admissible_f(ell);
  if (std::find(fs.begin(), fs.end(), f) == fs.end()) {
    std::string list;
    for (uint32_t x : fs) list += (list.empty() ? "" : ", ") + std::to_string(x);
    fail(ErrorKind::InvalidArgument,
         "f = " + std::to_string(f) + " is not admissible at l = " +
             std::to_string(ell) + " (admissible: {" + list + "})");
  }
  EmbedCheck chk;
  chk.ell = ell;
  chk.f = f;
  chk.subgroup_order = (ell - 1) / f;
  NamedSubgroupKind kind{NamedKind::NonsplitCartanNormalizer, 1, epsilon};
  Subgroup cns_plus = build_named(kind, Modulus(ell));
  const uint32_t k = uint32_t(chk.subgroup_order);
  // a conjugate of D^f is generated by an element with eigenvalues {1, a},
  // a of order (l-1)/f; scan every such a
  for (uint32_t a = 1; a < ell; ++a) {
    if (unit_order(a, ell) != k) continue;
    auto witness =
        find_element_with_charpoly(cns_plus, (1 + a) % ell, a, k);
    if (witness) {
      chk.embeds = true;
      chk.witness = witness;
      return chk;
    }
  }
  return chk;
}

std::vector<EmbedCheck> verify_semicartan_range(uint32_t lo, uint32_t hi,
                                                bool alternate_epsilon) {
  if (lo < 5) lo = 5;
  if (hi < lo)
    fail(ErrorKind::InvalidArgument, "empty prime range");
  std::vector<EmbedCheck> out;
  for (uint32_t ell = lo | 1; ell <= hi; ell += 2) {
    if (!Modulus(ell).is_prime()) continue;
    std::optional<uint32_t> eps;
    if (alternate_epsilon) eps = second_nonresidue(ell);
    for (uint32_t f : admissible_f(ell))
      out.push_back(semi_cartan_embeds(ell, f, eps));
  }
  return out;
}

SupersingularResult supersingular_forced(uint32_t ell) {
  if (ell <= 7)
    fail(ErrorKind::InvalidArgument,
         "not_applicable: supersingular_forced needs l > 7, got " +
             std::to_string(ell));
  require_odd_prime(ell, 11, "supersingular_forced");
  SupersingularResult res;
  for (uint32_t f : admissible_f(ell))
    res.scan.push_back(semi_cartan_embeds(ell, f));
  bool any_embeds = false;
  for (const auto& c : res.scan) any_embeds |= c.embeds;
  if (!any_embeds) {
    res.forced = true;
    res.justification =
        "no admissible diagonal subgroup D^f (f = gcd(l-1,e), e in "
        "{1,2,3,4,6}) embeds into the nonsplit Cartan normalizer at l = " +
        std::to_string(ell) +
        "; potential ordinary or multiplicative reduction would realize "
        "such an embedding through the inertia action, so the reduction "
        "is potentially supersingular";
    res.citations = {"supersingular-inertia"};
  } else if (ell == 13) {
    res.forced = true;
    res.via_override = true;
    res.justification =
        "the scan finds an embedding at l = 13 (f = 6, an order-2 outer "
        "element), so the group-theoretic argument does not apply; the "
        "conclusion holds anyway because the nonsplit Cartan normalizer "
        "class is vacuous at 13 for non-CM curves";
    res.citations = {"nonsplit-13-override"};
  } else {
    res.forced = false;
    res.justification =
        "an admissible D^f embeds into the nonsplit Cartan normalizer at "
        "l = " +
        std::to_string(ell) +
        "; supersingular reduction is not forced by this criterion";
  }
  return res;
}

RuleVerdict level_lowering_ok(ImageClass c, uint32_t ell) {
  require_odd_prime(ell, 11, "level_lowering_ok");
  const FactTable& ft = FactTable::v1();
  RuleVerdict v;
  v.rule_id = "level-lowering";
  v.outcome = RuleOutcome::Survives;
  v.witnesses = {{"image_class", image_class_name(c)}, {"ell", ell}};
  switch (c) {
    case ImageClass::Surjective:
      v.justification =
          "surjective mod-l image with l > 3: the l-adic image is the full "
          "preimage of GL2(F_l), so an isolated point at level l^n maps to "
          "an isolated point at level l with degree divided by the covering "
          "degree";
      v.citations = {"level-lowering-surjective"};
      return v;
    case ImageClass::Borel:
      if (!ft.borel_admissible(ell))
        fail(ErrorKind::InvalidArgument,
             "level_lowering_ok: Borel class is inadmissible at l = " +
                 std::to_string(ell));
      v.justification =
          "l-isogeny with l > 5: the mod-l^n image is the full preimage of "
          "the mod-l image, so isolation descends to level l";
      v.citations = {"level-lowering-borel"};
      return v;
    case ImageClass::SplitCartanNormalizer:
      fail(ErrorKind::InvalidArgument,
           "level_lowering_ok: split Cartan normalizer class is "
           "inadmissible for l > 7");
    case ImageClass::NonsplitCartanNormalizer:
      v.justification =
          "potential supersingular reduction makes the mod-l^n image the "
          "full preimage of the mod-l image; degrees scale by the covering "
          "degree and isolation descends to level l";
      v.citations = {"level-lowering-nonsplit"};
      return v;
    case ImageClass::Exceptional:
      if (!ft.exceptional_admissible(ell))
        fail(ErrorKind::InvalidArgument,
             "level_lowering_ok: exceptional class is inadmissible at l = " +
                 std::to_string(ell));
      v.justification =
          "the 13-adic image is the full preimage of the mod-13 image for "
          "the exceptional j-invariants, so the level-13^n analysis "
          "reduces to level 13";
      v.citations = {"level-lowering-exceptional-13"};
      return v;
  }
  fail(ErrorKind::InvalidArgument, "unknown image class value");
}

bool riemann_roch_eliminates(uint64_t degree, uint64_t genus) {
  if (degree == 0)
    fail(ErrorKind::InvalidArgument, "degree must be positive");
  return degree > genus;
}

}  // namespace isopoint
