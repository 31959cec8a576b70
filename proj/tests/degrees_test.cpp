#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isopoint/atlas.hpp"
#include "isopoint/degrees.hpp"
#include "support/oracles.hpp"

using namespace isopoint;

namespace {

uint64_t expected_halfsum(uint32_t N) {
  // #exact-order-N vectors / 2 for prime powers N = l^n
  Modulus m(N);
  uint64_t nn = uint64_t(N) * N;
  return (nn - nn / (uint64_t(m.ell) * m.ell)) / 2;
}

std::vector<Mat2> to_mats(const oracle::ElemSet& s) {
  std::vector<Mat2> v;
  for (uint64_t w : s) v.push_back(unpack(w));
  return v;
}

}  // namespace

TEST_CASE("degree sum identity for every subgroup of GL2(F5)") {
  Modulus m(5);
  std::vector<Mat2> full = oracle::all_gl2(m);
  std::vector<oracle::ElemSet> lattice = oracle::all_subgroups(full, m);
  CHECK(lattice.size() == 466);
  const uint64_t want = expected_halfsum(5);  // (25-1)/2 = 12
  for (const auto& elems : lattice) {
    Subgroup g = closure(to_mats(elems), m);
    REQUIRE(g.order == elems.size());
    DegreeProfile p = degree_profile(g, m);
    CHECK(p.degree_weighted_sum() == want);
  }
}

TEST_CASE("degree sum identity for named subgroups at assorted levels") {
  for (uint32_t N : {7u, 11u, 13u, 25u, 49u}) {
    Modulus m(N);
    std::vector<NamedSubgroupKind> kinds = {
        {NamedKind::FullGL2},        {NamedKind::Borel},
        {NamedKind::SplitCartan},    {NamedKind::SplitCartanNormalizer},
        {NamedKind::NonsplitCartan}, {NamedKind::NonsplitCartanNormalizer},
        {NamedKind::SemiCartan},     {NamedKind::SemiCartanPower, 2}};
    for (const auto& k : kinds) {
      if (k.kind == NamedKind::SemiCartanPower && (m.ell - 1) % k.f != 0)
        continue;
      DegreeProfile p = degree_profile(build_named(k, m), m);
      CHECK(p.degree_weighted_sum() == expected_halfsum(N));
    }
  }
}

TEST_CASE("profiles agree with the direct orbit-partition oracle") {
  for (const char* id : {"cns+@11", "borel@13", "cs@7", "semicartan@11",
                         "cns@25", "gl2@7"}) {
    auto [kind, mod] = parse_group_id(id);
    Subgroup g = build_named(kind, mod);
    DegreeProfile p = degree_profile(g, mod);
    auto brute = oracle::brute_profile(g.elements, mod);
    // expand library entries into per-point rows for comparison
    std::vector<oracle::BruteDegree> lib;
    for (const auto& e : p.entries)
      for (uint64_t i = 0; i < e.count; ++i)
        lib.push_back({e.degree, e.orbit_field_degree, e.half});
    REQUIRE(lib.size() == brute.size());
    for (size_t i = 0; i < lib.size(); ++i) {
      CHECK(lib[i].degree == brute[i].degree);
      CHECK(lib[i].orbit_size == brute[i].orbit_size);
      CHECK(lib[i].half == brute[i].half);
    }
  }
}

TEST_CASE("frozen profiles of the named groups in the decision procedure") {
  DegreeProfile cns11 =
      degree_profile(build_named({NamedKind::NonsplitCartanNormalizer},
                                 Modulus(11)),
                     Modulus(11));
  REQUIRE(cns11.entries.size() == 1);
  CHECK(cns11.entries[0].degree == 60);
  CHECK(cns11.entries[0].half);
  CHECK(cns11.entries[0].count == 1);
  CHECK(cns11.min_degree == 60);

  DegreeProfile b17 =
      degree_profile(build_named({NamedKind::Borel}, Modulus(17)), Modulus(17));
  REQUIRE(b17.entries.size() == 2);
  CHECK(b17.entries[0].degree == 8);
  CHECK(b17.entries[1].degree == 136);
  CHECK(b17.min_degree == 8);

  DegreeProfile g13 =
      degree_profile(build_named({NamedKind::FullGL2}, Modulus(13)),
                     Modulus(13));
  REQUIRE(g13.entries.size() == 1);
  CHECK(g13.entries[0].degree == 84);  // (13^2-1)/2, one closed point
}

TEST_CASE("profiles are conjugation invariant") {
  Modulus m(11);
  std::mt19937 rng(20260815);
  std::uniform_int_distribution<uint32_t> entry(0, 10);
  Subgroup g = build_named({NamedKind::NonsplitCartanNormalizer}, m);
  DegreeProfile base = degree_profile(g, m);
  int done = 0;
  while (done < 5) {
    Mat2 t{uint16_t(entry(rng)), uint16_t(entry(rng)), uint16_t(entry(rng)),
           uint16_t(entry(rng))};
    if (!is_unit(det(t, m), m)) continue;
    Mat2 ti = inverse(t, m);
    std::vector<Mat2> conj;
    for (Mat2 x : g.elements) conj.push_back(mul(mul(t, x, m), ti, m));
    DegreeProfile moved = degree_profile(closure(conj, m), m);
    REQUIRE(moved.entries.size() == base.entries.size());
    for (size_t i = 0; i < base.entries.size(); ++i) {
      CHECK(moved.entries[i].degree == base.entries[i].degree);
      CHECK(moved.entries[i].count == base.entries[i].count);
    }
    ++done;
  }
}

TEST_CASE("scan keeps filtered-out rows visible") {
  Modulus m(11);
  std::vector<Subgroup> groups = {
      build_named({NamedKind::NonsplitCartan}, m),
      build_named({NamedKind::NonsplitCartanNormalizer}, m),
      build_named({NamedKind::SemiCartan}, m)};
  auto rows = min_degree_scan(groups, m, [](const Subgroup& s) {
    return admissibility(s).has_complex_conjugation;
  });
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].included);  // cns lacks complex conjugation
  CHECK(rows[1].included);
  CHECK(rows[2].included);  // diag(-1,1) is a conjugation element of D
  CHECK(rows[1].min_degree == 60);
  CHECK(rows[2].min_degree == 1);  // D fixes the vector (0,1)
  for (const auto& r : rows) CHECK(r.min_degree > 0);
}

TEST_CASE("degree profile: domain errors") {
  Subgroup g5 = build_named({NamedKind::Borel}, Modulus(5));
  CHECK_THROWS_AS(degree_profile(g5, Modulus(25)), IsopointError);

  Subgroup even = closure({Mat2{1, 1, 0, 1}}, Modulus(8));
  try {
    degree_profile(even, Modulus(8));
    CHECK(false);
  } catch (const IsopointError& e) {
    CHECK(e.kind() == ErrorKind::OutOfScope);
  }

  Subgroup broken;
  broken.modulus = Modulus(7);
  broken.elements = {Mat2{2, 0, 0, 1}};  // no identity, not closed
  broken.order = 1;
  CHECK_THROWS_AS(degree_profile(broken, Modulus(7)), IsopointError);
}
