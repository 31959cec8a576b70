#include "isopoint/subgroup.hpp"

#include <algorithm>
#include <cstdlib>

namespace isopoint {

namespace {
size_t next_pow2(size_t v) {
  size_t p = 16;
  while (p < v) p <<= 1;
  return p;
}
// splitmix64; packed matrices are highly structured, a raw modulo table
// would cluster badly
uint64_t hash64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace

FlatU64Set::FlatU64Set(size_t expected)
    : slots_(next_pow2(expected * 2), kEmpty) {
  mask_ = slots_.size() - 1;
}

bool FlatU64Set::insert(uint64_t v) {
  if ((size_ + 1) * 10 > slots_.size() * 7) grow();
  size_t i = hash64(v) & mask_;
  while (slots_[i] != kEmpty) {
    if (slots_[i] == v) return false;
    i = (i + 1) & mask_;
  }
  slots_[i] = v;
  ++size_;
  return true;
}

bool FlatU64Set::contains(uint64_t v) const {
  size_t i = hash64(v) & mask_;
  while (slots_[i] != kEmpty) {
    if (slots_[i] == v) return true;
    i = (i + 1) & mask_;
  }
  return false;
}

void FlatU64Set::grow() {
  std::vector<uint64_t> old = std::move(slots_);
  slots_.assign(old.size() * 2, kEmpty);
  mask_ = slots_.size() - 1;
  size_ = 0;
  for (uint64_t v : old)
    if (v != kEmpty) insert(v);
}

bool Subgroup::contains(Mat2 g) const {
  return std::binary_search(elements.begin(), elements.end(), g,
                            [](Mat2 x, Mat2 y) { return pack(x) < pack(y); });
}

uint64_t default_closure_cap() {
  static uint64_t cap = [] {
    if (const char* env = std::getenv("ISOPOINT_CLOSURE_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v >= 2) return uint64_t(v);
    }
    return uint64_t(1) << 24;
  }();
  return cap;
}

Subgroup closure(const std::vector<Mat2>& gens, const Modulus& m, uint64_t cap) {
  if (cap == 0) cap = default_closure_cap();
  for (Mat2 g : gens)
    if (!is_unit(det(g, m), m))
      fail(ErrorKind::SingularElement, "singular generator in closure");

  // Finite group, so the monoid generated from I by right-multiplication
  // with the generators is already closed under inverses.
  FlatU64Set seen;
  std::vector<Mat2> frontier{Mat2::identity()};
  std::vector<Mat2> all{Mat2::identity()};
  seen.insert(pack(Mat2::identity()));
  while (!frontier.empty()) {
    std::vector<Mat2> next;
    for (Mat2 x : frontier) {
      for (Mat2 g : gens) {
        Mat2 y = mul(x, g, m);
        if (seen.insert(pack(y))) {
          if (seen.size() > cap)
            fail(ErrorKind::ClosureTooLarge,
                 "closure too large: cap " + std::to_string(cap) + " exceeded");
          next.push_back(y);
          all.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end(),
            [](Mat2 x, Mat2 y) { return pack(x) < pack(y); });
  Subgroup out;
  out.modulus = m;
  out.generators = gens;
  out.elements = std::move(all);
  out.order = out.elements.size();
  return out;
}

std::vector<Vec2> orbit(const Subgroup& g, Vec2 v) {
  const Modulus& m = g.modulus;
  FlatU64Set seen;
  std::vector<Vec2> frontier{v}, all{v};
  seen.insert(pack(v));
  while (!frontier.empty()) {
    std::vector<Vec2> next;
    for (Vec2 u : frontier) {
      for (Mat2 gen : g.generators) {
        Vec2 w = act(gen, u, m);
        if (seen.insert(pack(w))) {
          next.push_back(w);
          all.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end(),
            [](Vec2 x, Vec2 y) { return pack(x) < pack(y); });
  return all;
}

std::optional<Mat2> find_element_with_charpoly(const Subgroup& g, uint32_t t,
                                               uint32_t d,
                                               std::optional<uint32_t> order_req) {
  const Modulus& m = g.modulus;
  t %= m.value;
  d %= m.value;
  for (Mat2 e : g.elements) {
    if (trace(e, m) != t || det(e, m) != d) continue;
    if (order_req && element_order(e, m) != *order_req) continue;
    return e;
  }
  return std::nullopt;
}

bool has_element_with_charpoly(const Subgroup& g, uint32_t t, uint32_t d,
                               std::optional<uint32_t> order_req) {
  return find_element_with_charpoly(g, t, d, order_req).has_value();
}

nlohmann::json subgroup_to_json(const Subgroup& g) {
  nlohmann::json gens = nlohmann::json::array();
  for (Mat2 m : g.generators)
    gens.push_back({int(m.a), int(m.b), int(m.c), int(m.d)});
  return {{"modulus", g.modulus.value}, {"generators", gens}, {"label", g.label}};
}

Subgroup subgroup_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("modulus") || !j.contains("generators"))
    fail(ErrorKind::DataError, "subgroup json needs modulus and generators");
  if (!j["modulus"].is_number_unsigned())
    fail(ErrorKind::DataError, "subgroup json: modulus must be a positive integer");
  Modulus m(j["modulus"].get<uint32_t>());
  std::vector<Mat2> gens;
  for (const auto& row : j["generators"]) {
    if (!row.is_array() || row.size() != 4)
      fail(ErrorKind::DataError, "subgroup json: generator rows are 4 integers");
    gens.push_back(make_mat(row[0].get<int64_t>(), row[1].get<int64_t>(),
                            row[2].get<int64_t>(), row[3].get<int64_t>(), m));
  }
  Subgroup g = closure(gens, m);
  if (j.contains("label")) g.label = j["label"].get<std::string>();
  return g;
}

}  // namespace isopoint
