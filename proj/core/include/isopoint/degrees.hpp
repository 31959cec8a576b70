#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isopoint/subgroup.hpp"

namespace isopoint {

// Closed points of X1(N) above a fixed j-invariant, modeled as G-orbits on
// +-classes of exact-order-N vectors. For a vector orbit O of v:
//   cx = 1/2 and degree = |O|/2          when -v lies in O
//   cx = 1   and degree = |O|            otherwise (O and -O pair up into
//                                         one closed point)
// Either way the degree equals the orbit size on +-classes, so
// sum(degree * count) = #exact-order-N vectors / 2.
struct DegreeEntry {
  uint64_t degree = 0;
  uint64_t orbit_field_degree = 0;  // [k(P):k], the vector orbit size
  bool half = false;                // cx = 1/2 iff true
  uint64_t count = 0;               // closed points with this signature
};

struct DegreeProfile {
  Modulus level;
  std::string group_label;
  std::vector<DegreeEntry> entries;  // sorted by (degree, orbit_field_degree)
  uint64_t min_degree = 0;

  uint64_t degree_weighted_sum() const;
};

// N must match the group's modulus and be an odd prime power.
DegreeProfile degree_profile(const Subgroup& g, const Modulus& level);

struct ScanRow {
  std::string group_label;
  uint64_t min_degree = 0;
  bool included = false;  // false = filtered out, still reported
};

// Per-group minimum closed-point degree. Groups failing the filter are
// reported with included = false, never dropped.
std::vector<ScanRow> min_degree_scan(
    const std::vector<Subgroup>& groups, const Modulus& level,
    const std::function<bool(const Subgroup&)>& filter);

}  // namespace isopoint
