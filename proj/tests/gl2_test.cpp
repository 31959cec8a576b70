#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <set>

#include "isopoint/atlas.hpp"
#include "isopoint/gl2.hpp"
#include "isopoint/subgroup.hpp"
#include "support/oracles.hpp"

using namespace isopoint;

TEST_CASE("modulus validation and prime-power view") {
  CHECK(Modulus(5).is_prime());
  CHECK(Modulus(49).is_prime_power());
  CHECK(Modulus(49).ell == 7);
  CHECK(Modulus(49).n == 2);
  CHECK_FALSE(Modulus(6).is_prime_power());
  CHECK(Modulus(6).value == 6);
  CHECK(Modulus(65535).value == 65535);
  CHECK_THROWS_AS(Modulus(0), IsopointError);
  CHECK_THROWS_AS(Modulus(1), IsopointError);
  CHECK_THROWS_AS(Modulus(65536), IsopointError);
}

TEST_CASE("matrix arithmetic basics") {
  Modulus m5(5);
  Mat2 M{2, 0, 0, 3};
  CHECK(det(M, m5) == 1);
  CHECK(trace(M, m5) == 0);
  CHECK(inverse(M, m5) == Mat2{3, 0, 0, 2});
  CHECK(mul(Mat2::identity(), M, m5) == M);
  CHECK(det(Mat2::identity(), m5) == 1);

  // complex-conjugation shape at 13
  Modulus m13(13);
  Mat2 C = make_mat(1, 0, 0, -1, m13);
  CHECK(C == Mat2{1, 0, 0, 12});
  CHECK(trace(C, m13) == 0);
  CHECK(det(C, m13) == 12);
  CHECK(char_poly(C, m13) == std::pair<uint32_t, uint32_t>{0, 12});
  CHECK(element_order(C, m13) == 2);

  CHECK_THROWS_WITH_AS(inverse(Mat2{1, 2, 2, 4}, m5), doctest::Contains("singular"),
                       IsopointError);
}

TEST_CASE("make_mat reduces arbitrary integers canonically") {
  Modulus m7(7);
  CHECK(make_mat(-1, 8, 14, -13, m7) == Mat2{6, 1, 0, 1});
  for (int64_t k = -3; k <= 3; ++k)
    CHECK(make_mat(2 + 7 * k, 0, 0, 3, m7) == Mat2{2, 0, 0, 3});
}

TEST_CASE("packing is a lexicographic order embedding") {
  Modulus m(11);
  Mat2 x{1, 2, 3, 4}, y{1, 2, 4, 0};
  CHECK(unpack(pack(x)) == x);
  CHECK(lex_less(x, y));
  CHECK(pack(x) < pack(y));
}

TEST_CASE("exact order of vectors") {
  Modulus m25(25);
  CHECK(exact_order({1, 0}, m25) == 25);
  CHECK(exact_order({5, 10}, m25) == 5);
  CHECK(exact_order({0, 0}, m25) == 1);
  CHECK(exact_order({0, 24}, m25) == 25);
}

TEST_CASE("matrix powers and element order") {
  Modulus m13(13);
  Mat2 u{1, 1, 0, 1};
  CHECK(element_order(u, m13) == 13);
  CHECK(mat_pow(u, 13, m13) == Mat2::identity());
  CHECK(mat_pow(u, 5, m13) == Mat2{1, 5, 0, 1});
  for (Mat2 g : {Mat2{2, 1, 3, 4}, Mat2{0, 1, 12, 0}, Mat2{3, 0, 0, 3}})
    CHECK(element_order(g, m13) == oracle::order_of(g, m13));
}

TEST_CASE("closure: trivial and tiny examples") {
  Modulus m5(5);
  Subgroup t = closure({}, m5);
  CHECK(t.order == 1);
  CHECK(t.elements.front() == Mat2::identity());

  Subgroup u = closure({Mat2{1, 1, 0, 1}}, m5);
  CHECK(u.order == 5);  // unipotent
}

TEST_CASE("closure order law vs brute-force GL2 enumeration") {
  for (uint32_t ell : {3u, 5u}) {
    Modulus m(ell);
    Subgroup g = build_named({NamedKind::FullGL2}, m);
    uint64_t expected = uint64_t(ell * ell - 1) * (ell * ell - ell);
    CHECK(g.order == expected);
    std::vector<Mat2> brute = oracle::all_gl2(m);
    REQUIRE(brute.size() == expected);
    CHECK(oracle::to_set(g.elements) == oracle::to_set(brute));
  }
  for (uint32_t ell : {7u, 11u, 13u}) {
    Modulus m(ell);
    CHECK(build_named({NamedKind::FullGL2}, m).order ==
          uint64_t(ell * ell - 1) * (ell * ell - ell));
  }
}

TEST_CASE("closure idempotence and determinism") {
  Modulus m(7);
  Subgroup g = build_named({NamedKind::NonsplitCartanNormalizer}, m);
  Subgroup again = closure(g.elements, m);
  CHECK(again.elements == g.elements);
  Subgroup twice = build_named({NamedKind::NonsplitCartanNormalizer}, m);
  CHECK(twice.elements == g.elements);  // byte-identical canonical order
}

TEST_CASE("closure respects the explicit cap") {
  Modulus m(11);
  CHECK_THROWS_WITH_AS(closure({Mat2{1, 1, 0, 1}, Mat2{1, 0, 1, 1}}, m, 100),
                       doctest::Contains("closure too large"), IsopointError);
  try {
    closure({Mat2{1, 1, 0, 1}, Mat2{1, 0, 1, 1}}, m, 100);
  } catch (const IsopointError& e) {
    CHECK(e.kind() == ErrorKind::ClosureTooLarge);
    CHECK(exit_code_for(e.kind()) == 3);
  }
}

TEST_CASE("closure rejects singular generators") {
  Modulus m(5);
  CHECK_THROWS_AS(closure({Mat2{1, 2, 2, 4}}, m), IsopointError);
}

TEST_CASE("orbits: examples and partition property") {
  Modulus m5(5);
  Subgroup trivial = closure({}, m5);
  CHECK(orbit(trivial, {2, 3}) == std::vector<Vec2>{{2, 3}});

  Subgroup full = build_named({NamedKind::FullGL2}, m5);
  CHECK(orbit(full, {1, 0}).size() == 24);  // transitive on nonzero vectors

  Modulus m7(7);
  Subgroup cns = build_named({NamedKind::NonsplitCartan}, m7);
  CHECK(orbit(cns, {1, 0}).size() == 48);  // simply transitive

  // orbits partition the exact-order-N vectors
  Subgroup b = build_named({NamedKind::Borel}, m7);
  std::set<uint32_t> seen;
  uint64_t total = 0;
  for (uint32_t x = 0; x < 7; ++x)
    for (uint32_t y = 0; y < 7; ++y) {
      Vec2 v{uint16_t(x), uint16_t(y)};
      if (exact_order(v, m7) != 7 || seen.count(pack(v))) continue;
      for (Vec2 w : orbit(b, v)) {
        CHECK(!seen.count(pack(w)));
        seen.insert(pack(w));
        ++total;
      }
    }
  CHECK(total == 48);  // 7^2 - 1
}

TEST_CASE("char-poly element search") {
  Modulus m13(13);
  Subgroup t = closure({}, m13);
  CHECK(has_element_with_charpoly(t, 2, 1));  // the identity

  Subgroup cnsp13 = build_named({NamedKind::NonsplitCartanNormalizer}, m13);
  CHECK(cnsp13.order == 336);
  auto w = find_element_with_charpoly(cnsp13, 0, 12, 2);
  REQUIRE(w.has_value());
  CHECK(trace(*w, m13) == 0);
  CHECK(det(*w, m13) == 12);
  CHECK(element_order(*w, m13) == 2);
}

TEST_CASE("distinct-eigenvalue elements are conjugate to diagonal form") {
  // char-poly search doubles as a conjugacy test for semi-Cartan shapes
  for (uint32_t ell : {5u, 7u, 11u, 13u}) {
    Modulus m(ell);
    std::vector<Mat2> amb = oracle::all_gl2(m);
    uint64_t checked = 0;
    for (Mat2 g : amb) {
      if (checked >= 40) break;
      uint32_t tr = trace(g, m), de = det(g, m);
      // two distinct roots of x^2 - tr x + de mod ell?
      std::vector<uint32_t> roots;
      for (uint32_t x = 0; x < ell; ++x)
        if ((x * x + de) % ell == (tr * x) % ell) roots.push_back(x);
      if (roots.size() != 2) continue;
      Mat2 diag = make_mat(roots[0], 0, 0, roots[1], m);
      CHECK(oracle::conjugator(g, diag, amb, m).has_value());
      ++checked;
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("subgroup JSON round trip") {
  Modulus m(17);
  Subgroup g = build_named({NamedKind::Borel}, m);
  nlohmann::json doc = subgroup_to_json(g);
  CHECK(doc["modulus"] == 17);
  Subgroup back = subgroup_from_json(doc);
  CHECK(back.modulus.value == g.modulus.value);
  CHECK(back.elements == g.elements);
  CHECK(back.label == g.label);

  nlohmann::json bad = doc;
  bad["generators"][0] = {0, 0, 0, 0};
  CHECK_THROWS_AS(subgroup_from_json(bad), IsopointError);
}

TEST_CASE("closure cap environment override is read once per process") {
  // the default cap comes from ISOPOINT_CLOSURE_CAP; this process does not
  // set it, so the default must be 1<<24
  CHECK(default_closure_cap() == (uint64_t(1) << 24));
}
