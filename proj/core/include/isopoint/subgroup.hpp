#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isopoint/gl2.hpp"
#include <nlohmann/json.hpp>

namespace isopoint {

// Open-addressing set of packed matrices. Closure saturation is the hot loop
// of the whole artifact, so no std::unordered_set here. The sentinel is
// 0xffff'ffff'ffff'ffff, unreachable for packed values since residues stay
// below the modulus bound 65535.
class FlatU64Set {
 public:
  explicit FlatU64Set(size_t expected = 16);
  bool insert(uint64_t v);  // true if newly inserted
  bool contains(uint64_t v) const;
  size_t size() const { return size_; }

 private:
  void grow();
  static constexpr uint64_t kEmpty = ~uint64_t(0);
  std::vector<uint64_t> slots_;
  uint64_t mask_ = 0;
  size_t size_ = 0;
};

struct Subgroup {
  Modulus modulus;
  std::vector<Mat2> generators;
  // canonical sorted element set; invariant: closed under product and
  // inverse, contains the identity, contains every generator
  std::vector<Mat2> elements;
  uint64_t order = 0;
  std::string label;

  bool contains(Mat2 g) const;
};

// Closure size cap. Default 1<<24; the environment variable
// ISOPOINT_CLOSURE_CAP overrides it process-wide.
uint64_t default_closure_cap();

// Breadth-first product saturation from the identity. Deterministic output:
// elements sorted in canonical (lexicographic) order. Throws SingularElement
// for a non-invertible generator and ClosureTooLarge past the cap.
Subgroup closure(const std::vector<Mat2>& gens, const Modulus& m,
                 uint64_t cap = 0 /* 0 = default */);

// Full G-orbit of v under left action, sorted by packed value.
std::vector<Vec2> orbit(const Subgroup& g, Vec2 v);

// true iff some element has the given trace and det (and order, if required)
bool has_element_with_charpoly(const Subgroup& g, uint32_t t, uint32_t d,
                               std::optional<uint32_t> order_req = {});
// same search, returning a witness
std::optional<Mat2> find_element_with_charpoly(const Subgroup& g, uint32_t t,
                                               uint32_t d,
                                               std::optional<uint32_t> order_req = {});

// JSON form: {"modulus": N, "generators": [[a,b,c,d],...], "label": "..."}.
// Reading validates invertibility and re-closes the group.
nlohmann::json subgroup_to_json(const Subgroup& g);
Subgroup subgroup_from_json(const nlohmann::json& j);

}  // namespace isopoint
