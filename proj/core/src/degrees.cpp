#include "isopoint/degrees.hpp"

#include <algorithm>
#include <map>

namespace isopoint {

uint64_t DegreeProfile::degree_weighted_sum() const {
  uint64_t s = 0;
  for (const DegreeEntry& e : entries) s += e.degree * e.count;
  return s;
}

DegreeProfile degree_profile(const Subgroup& g, const Modulus& level) {
  if (g.modulus.value != level.value)
    fail(ErrorKind::InvalidArgument, "group modulus does not match level");
  if (!level.is_prime_power() || !level.is_odd())
    fail(ErrorKind::OutOfScope,
         "degree profile is defined for odd prime-power levels");
  if (g.elements.empty() || !(g.elements.front() == Mat2::identity() ||
                              g.contains(Mat2::identity())))
    fail(ErrorKind::InvalidArgument, "group is not closed (no identity)");
  for (Mat2 gen : g.generators)
    if (!g.contains(gen))
      fail(ErrorKind::InvalidArgument, "group is not closed (generator missing)");

  const uint32_t N = level.value;
  std::vector<bool> visited(size_t(N) * N, false);
  auto vidx = [N](Vec2 v) { return size_t(v.x) * N + v.y; };

  std::map<std::pair<uint64_t, bool>, uint64_t> agg;  // (degree, half) -> count
  uint64_t nvec = 0;

  for (uint32_t x = 0; x < N; ++x) {
    for (uint32_t y = 0; y < N; ++y) {
      Vec2 v{uint16_t(x), uint16_t(y)};
      if (exact_order(v, level) != N) continue;
      ++nvec;
      if (visited[vidx(v)]) continue;
      std::vector<Vec2> orb = orbit(g, v);
      for (Vec2 u : orb) visited[vidx(u)] = true;
      Vec2 nv = negate(v, level);
      bool has_neg = std::binary_search(
          orb.begin(), orb.end(), nv,
          [](Vec2 a, Vec2 b) { return pack(a) < pack(b); });
      if (has_neg) {
        agg[{orb.size() / 2, true}] += 1;
      } else {
        // -orbit is a disjoint orbit; the pair forms one closed point
        for (Vec2 u : orb) visited[vidx(negate(u, level))] = true;
        agg[{orb.size(), false}] += 1;
      }
    }
  }

  DegreeProfile out;
  out.level = level;
  out.group_label = g.label;
  for (const auto& [key, count] : agg) {
    DegreeEntry e;
    e.degree = key.first;
    e.half = key.second;
    e.orbit_field_degree = key.second ? key.first * 2 : key.first;
    e.count = count;
    out.entries.push_back(e);
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const DegreeEntry& a, const DegreeEntry& b) {
              if (a.degree != b.degree) return a.degree < b.degree;
              return a.orbit_field_degree < b.orbit_field_degree;
            });
  out.min_degree = out.entries.empty() ? 0 : out.entries.front().degree;
  if (out.degree_weighted_sum() * 2 != nvec)
    fail(ErrorKind::InvalidArgument, "internal: degree sum identity violated");
  return out;
}

std::vector<ScanRow> min_degree_scan(
    const std::vector<Subgroup>& groups, const Modulus& level,
    const std::function<bool(const Subgroup&)>& filter) {
  if (groups.empty())
    fail(ErrorKind::InvalidArgument, "min_degree_scan needs a nonempty group list");
  std::vector<ScanRow> out;
  out.reserve(groups.size());
  for (const Subgroup& g : groups) {
    ScanRow row;
    row.group_label = g.label;
    row.min_degree = degree_profile(g, level).min_degree;
    row.included = !filter || filter(g);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace isopoint
