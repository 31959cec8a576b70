#include "isopoint/facts.hpp"

#include <algorithm>
#include <cctype>

namespace isopoint {

namespace {

Integer pow_int(Integer base, uint64_t e) {
  Integer r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

// term := digits ['^' digits]
Integer parse_term(const std::string& term, const std::string& whole) {
  auto caret = term.find('^');
  std::string base = term.substr(0, caret);
  if (!all_digits(base))
    fail(ErrorKind::InvalidArgument, "bad factored expression: " + whole);
  Integer b(base);
  if (caret == std::string::npos) return b;
  std::string exp = term.substr(caret + 1);
  if (!all_digits(exp))
    fail(ErrorKind::InvalidArgument, "bad factored expression: " + whole);
  return pow_int(b, std::stoull(exp));
}

Integer parse_side(const std::string& side, const std::string& whole) {
  Integer acc = 1;
  size_t start = 0;
  for (;;) {
    auto star = side.find('*', start);
    auto len = star == std::string::npos ? std::string::npos : star - start;
    acc *= parse_term(side.substr(start, len), whole);
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return acc;
}

}  // namespace

Rational parse_factored(const std::string& expr) {
  std::string s;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::InvalidArgument, "empty factored expression");
  bool neg = false;
  size_t pos = 0;
  if (s[0] == '-') {
    neg = true;
    pos = 1;
  }
  auto slash = s.find('/', pos);
  auto num_len = slash == std::string::npos ? std::string::npos : slash - pos;
  std::string num = s.substr(pos, num_len);
  if (num.empty())
    fail(ErrorKind::InvalidArgument, "bad factored expression: " + expr);
  Integer n = parse_side(num, expr);
  Integer d = 1;
  if (slash != std::string::npos) {
    std::string den = s.substr(slash + 1);
    if (den.empty())
      fail(ErrorKind::InvalidArgument, "bad factored expression: " + expr);
    d = parse_side(den, expr);
    if (d == 0)
      fail(ErrorKind::InvalidArgument,
           "zero denominator in factored expression: " + expr);
  }
  Rational r(n, d);
  return neg ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

namespace {

JInvariant make_j(const std::string& factored, const std::string& alt = "",
                  const std::string& note = "") {
  return JInvariant{factored, parse_factored(factored), alt, note};
}

}  // namespace

FactTable::FactTable() {
  mazur_ = {2, 3, 5, 7, 11, 17, 37};

  borel_j_17_ = {
      make_j("-17*373^3/2^17"),
      make_j("-17^2*101^3/2"),
  };
  borel_j_37_ = {
      make_j("7*11^3", "-7*11^3",
             "sources disagree on the sign of this value; the positive "
             "rendering is primary here and the negative one is carried "
             "as an alternate"),
      make_j("-7*137^3*2083^3"),
  };
  exc_j_13_ = {
      make_j("2^4*5*13^4*17^3/3^13"),
      make_j("-2^12*5^3*11*13^4/3^13"),
      // everything after the slash is part of the denominator product
      make_j("2^18*3^3*13^4*127^3*139^3*157^3*283^3*929/5^13*61^13"),
  };

  rows_ = {
      {"mazur-borel-primes",
       "If a non-CM elliptic curve over Q underlies an isolated point and "
       "has Borel (reducible) mod-l image, then l lies in "
       "{2, 3, 5, 7, 11, 17, 37}; among primes l > 7 only 11, 17 and 37 "
       "admit the Borel class.",
       "B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 "
       "(1978), with the non-CM refinement tabulated by A. Bourdon, "
       "O. Ejder, Y. Liu, F. Odumodu, B. Viray, On the level of modular "
       "curves that give rise to isolated j-invariants, Adv. Math. 357 "
       "(2019)."},
      {"borel-j-17-37",
       "For l in {17, 37} a non-CM elliptic curve over Q with an l-isogeny "
       "has one of four j-invariants: -17*373^3/2^17 and -17^2*101^3/2 at "
       "l = 17, and 7*11^3 and -7*137^3*2083^3 at l = 37 (the first level-37 "
       "value also appears in the literature with the opposite sign).",
       "B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 "
       "(1978), table of noncuspidal rational points on X_0(N); "
       "cross-checked against the L-functions and Modular Forms Database."},
      {"mazur-torsion",
       "No elliptic curve over Q has a rational point of prime order "
       "l >= 11; X_1(l)(Q) is cuspidal for such l, so every closed point "
       "of X_1(l) over a rational j-invariant has degree at least 2.",
       "B. Mazur, Modular curves and the Eisenstein ideal, Publ. Math. "
       "IHES 47 (1977)."},
      {"split-cartan-excluded",
       "For every prime l > 7, no non-CM elliptic curve over Q has mod-l "
       "image contained in the normalizer of a split Cartan subgroup.",
       "Y. Bilu, P. Parent, Serre's uniformity problem in the split Cartan "
       "case, Ann. of Math. 173 (2011); Y. Bilu, P. Parent, M. Rebolledo, "
       "Rational points on X_0^+(p^r), Ann. Inst. Fourier 63 (2013); l = 13 "
       "by J.S. Balakrishnan, N. Dogra, J.S. Mueller, J. Tuitman, J. Vonk, "
       "Explicit Chabauty-Kim for the split Cartan modular curve of level "
       "13, Ann. of Math. 189 (2019)."},
      {"exceptional-only-13",
       "Among primes l > 7, an exceptional mod-l image (projective image "
       "A_4, S_4 or A_5) occurs for a non-CM elliptic curve over Q only at "
       "l = 13, where the projective image is S_4.",
       "J.-P. Serre, Proprietes galoisiennes des points d'ordre fini des "
       "courbes elliptiques, Invent. Math. 15 (1972); D. Zywina, On the "
       "possible images of the mod l representations associated to "
       "elliptic curves over Q, arXiv:1508.07660 (2015)."},
      {"exceptional-j-13",
       "Exactly three rational j-invariants give a mod-13 image with "
       "projective image S_4: 2^4*5*13^4*17^3/3^13, "
       "-2^12*5^3*11*13^4/3^13 and "
       "2^18*3^3*13^4*127^3*139^3*157^3*283^3*929/(5^13*61^13); all three "
       "share a single conjugacy class of mod-13 image.",
       "D. Zywina, On the possible images of the mod l representations "
       "associated to elliptic curves over Q, arXiv:1508.07660 (2015), "
       "classification of the 13S4 case."},
      {"nonsplit-degree-bound",
       "If a non-CM elliptic curve over Q has mod-l image in the "
       "normalizer of a nonsplit Cartan subgroup and potential "
       "supersingular reduction at l, every noncuspidal closed point of "
       "X_1(l) over its j-invariant has degree at least (l^2-1)/12.",
       "A. Lozano-Robledo, On the field of definition of p-torsion points "
       "on elliptic curves over the rationals, Math. Ann. 357 (2013)."},
      {"supersingular-inertia",
       "Potential supersingular reduction at l forces the inertia image at "
       "l to be cyclic of order (l^2-1)/e with e in {1, 2, 3, 4, 6}; the "
       "mod-l image therefore meets the nonsplit Cartan subgroup in a "
       "subgroup of order at least (l^2-1)/6.",
       "A. Lozano-Robledo, Formal groups of elliptic curves with potential "
       "supersingular reduction, Pacific J. Math. 261 (2013); J.-P. Serre, "
       "Invent. Math. 15 (1972), fundamental characters of level 2."},
      {"nonsplit-13-override",
       "No non-CM elliptic curve over Q has mod-13 image contained in the "
       "normalizer of the nonsplit Cartan subgroup; the nonsplit class is "
       "vacuous at l = 13 regardless of reduction type.",
       "J.S. Balakrishnan, N. Dogra, J.S. Mueller, J. Tuitman, J. Vonk, "
       "Explicit Chabauty-Kim for the split Cartan modular curve of level "
       "13, Ann. of Math. 189 (2019), together with the same authors' "
       "determination of the nonsplit level-13 curve (Quadratic Chabauty "
       "for modular curves: algorithms and examples, Compos. Math. 159 "
       "(2023))."},
      {"dkm-x1-17",
       "X_1(17) carries a positive-dimensional family of degree-4 points; "
       "a degree-4 closed point over a rational j-invariant is therefore "
       "not isolated.",
       "M. Derickx, S. Kamienny, B. Mazur, Rational families of 17-torsion "
       "points of elliptic curves over number fields, Number Theory "
       "Related to Modular Curves: Momose Memorial Volume, Contemp. Math. "
       "701, Amer. Math. Soc. (2018)."},
      {"belov-isolated-9317",
       "The degree-18 closed point of X_1(37) lying over j = 7*11^3 is "
       "isolated.",
       "A. Bourdon, O. Ejder, Y. Liu, F. Odumodu, B. Viray, On the level "
       "of modular curves that give rise to isolated j-invariants, Adv. "
       "Math. 357 (2019), Prop. 8.4."},
      {"level-lowering-surjective",
       "For l > 3 a surjective mod-l image forces the l-adic image to be "
       "the full preimage of GL_2(F_l); an isolated point on X_1(l^n) with "
       "surjective mod-l image maps to an isolated point on X_1(l), the "
       "degree dropping by the covering degree l^(2(n-1)).",
       "J.-P. Serre, Abelian l-adic representations and elliptic curves, "
       "Benjamin (1968), IV.3.4; A. Bourdon, O. Ejder, Y. Liu, F. Odumodu, "
       "B. Viray, Adv. Math. 357 (2019), descent of isolation along "
       "coverings."},
      {"level-lowering-borel",
       "For a curve with an l-isogeny, l > 7, the mod-l^n image is the "
       "full preimage of the mod-l image, so isolation at level l^n "
       "descends to level l with degrees scaled by the covering degree.",
       "R. Greenberg, The image of Galois representations attached to "
       "elliptic curves with an isogeny, Amer. J. Math. 134 (2012)."},
      {"level-lowering-nonsplit",
       "With potential supersingular reduction the mod-l^n image of a "
       "nonsplit-Cartan-normalizer curve is the full preimage of its mod-l "
       "image, so isolation at level l^n descends to level l.",
       "A. Lozano-Robledo, Pacific J. Math. 261 (2013); A. Bourdon, "
       "O. Ejder, Y. Liu, F. Odumodu, B. Viray, Adv. Math. 357 (2019)."},
      {"level-lowering-exceptional-13",
       "For the three exceptional mod-13 j-invariants the 13-adic image is "
       "the full preimage of the mod-13 image, so the analysis at level "
       "13^n reduces to level 13.",
       "J. Rouse, A.V. Sutherland, D. Zureick-Brown, l-adic images of "
       "Galois for elliptic curves over Q, Forum Math. Sigma 10 (2022)."},
      {"riemann-roch-isolated",
       "A closed point of degree d > g on a curve of genus g moves in a "
       "positive-dimensional linear system and is not isolated; isolated "
       "points have degree at most the genus.",
       "G. Frey, Curves with infinitely many points of fixed degree, "
       "Israel J. Math. 85 (1994); standard Riemann-Roch argument."},
  };
}

const FactTable& FactTable::v1() {
  static const FactTable table;
  return table;
}

const FactRow& FactTable::row(const std::string& id) const {
  for (const auto& r : rows_)
    if (r.id == id) return r;
  fail(ErrorKind::InvalidArgument, "unknown fact row: " + id);
}

bool FactTable::borel_admissible(uint32_t ell) const {
  return std::find(mazur_.begin(), mazur_.end(), ell) != mazur_.end();
}

uint64_t FactTable::nonsplit_degree_bound(uint32_t ell) const {
  if (ell < 5 || ell % 2 == 0 || ell % 3 == 0)
    fail(ErrorKind::InvalidArgument,
         "nonsplit degree bound needs a prime l >= 5, got " +
             std::to_string(ell));
  uint64_t sq = uint64_t(ell) * ell - 1;
  // l coprime to 6 gives l^2 = 1 mod 24
  if (sq % 12 != 0)
    fail(ErrorKind::InvalidArgument, "internal: bound not integral");
  return sq / 12;
}

std::string FactTable::isolation_known_row(const Rational& j) const {
  if (j == borel_j_37_[0].value) return "belov-isolated-9317";
  return "";
}

}  // namespace isopoint
