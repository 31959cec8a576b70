#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isopoint/atlas.hpp"
#include "isopoint/facts.hpp"
#include "isopoint/gl2.hpp"
#include "isopoint/subgroup.hpp"

namespace isopoint {

enum class ImageClass {
  Surjective,
  Borel,
  SplitCartanNormalizer,
  NonsplitCartanNormalizer,
  Exceptional,
};

std::string image_class_name(ImageClass c);
ImageClass image_class_from_name(const std::string& name);

enum class RuleOutcome { Eliminates, Survives, NotApplicable };
std::string rule_outcome_name(RuleOutcome o);

// One applied rule in a classification trace: what ran, what it concluded,
// which fact-table rows back it, and the computed witnesses (degrees,
// genus, margins) that make the trace replayable.
struct RuleVerdict {
  std::string rule_id;
  RuleOutcome outcome = RuleOutcome::NotApplicable;
  std::string justification;
  std::vector<std::string> citations;  // FactTable row ids
  nlohmann::json witnesses = nlohmann::json::object();
};

nlohmann::json verdict_to_json(const RuleVerdict& v);

// ramification exponent e of the local field at l, with f = gcd(l-1, e);
// e carries no further computational content here
struct RamificationData {
  uint32_t e;
  uint32_t f;
};

RamificationData make_ramification(uint32_t ell, uint32_t e);

// {gcd(l-1, e) : e in {1,2,3,4,6}}, sorted ascending
std::vector<uint32_t> admissible_f(uint32_t ell);

struct EmbedCheck {
  uint32_t ell = 0;
  uint32_t f = 0;
  uint64_t subgroup_order = 0;  // (l-1)/f, the order of D^f
  bool embeds = false;
  std::optional<Mat2> witness;
};

// Does the nonsplit Cartan normalizer at l contain a conjugate of
// D^f = {diag(a^f, 1)}? Checked by exhaustive element scan: a conjugate
// generator must have char poly (x-1)(x-a) with a of multiplicative order
// (l-1)/f and must itself have that order. For a generator with distinct
// eigenvalues the (char poly, order) pair is a complete conjugacy test.
EmbedCheck semi_cartan_embeds(uint32_t ell, uint32_t f,
                              std::optional<uint32_t> epsilon = std::nullopt);

// all (l, f) checks for primes in [lo, hi]
std::vector<EmbedCheck> verify_semicartan_range(
    uint32_t lo, uint32_t hi, bool alternate_epsilon = false);

struct SupersingularResult {
  bool forced = false;
  bool via_override = false;  // l = 13 uses a cited result, not the scan
  std::string justification;
  std::vector<std::string> citations;
  std::vector<EmbedCheck> scan;  // per-f evidence when computed
};

// A nonsplit-Cartan-normalizer image at l > 7 forces potential
// supersingular reduction: ordinary or multiplicative reduction would
// embed some D^f into the normalizer, and the scan shows none embeds.
// At l = 13 the embedding exists, and the conclusion instead comes from
// the cited fact that the nonsplit class is vacuous there.
SupersingularResult supersingular_forced(uint32_t ell);

// Whether an isolated point at level l^n descends to one at level l for
// the given image class; outcome Survives means the case passes down to
// the level-l analysis (this rule never eliminates anything by itself).
RuleVerdict level_lowering_ok(ImageClass c, uint32_t ell);

// degree > genus means the point moves in a positive-dimensional family
bool riemann_roch_eliminates(uint64_t degree, uint64_t genus);

}  // namespace isopoint
