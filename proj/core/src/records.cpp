#include "isopoint/records.hpp"

#include <algorithm>
#include <fstream>

#include "isopoint/atlas.hpp"

namespace isopoint {

namespace {

uint32_t pow_mod(uint32_t a, uint32_t e, uint32_t m) {
  uint64_t r = 1, b = a % m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return uint32_t(r);
}

// F_{l^2} = F_l(sqrt(eps)), elements u + v*sqrt(eps)
struct F2 {
  uint32_t u = 0, v = 0;
};

struct F2Ctx {
  uint32_t ell, eps;

  F2 mul(F2 x, F2 y) const {
    uint64_t u =
        (uint64_t(x.u) * y.u % ell + uint64_t(x.v) * y.v % ell * eps) % ell;
    uint64_t v = (uint64_t(x.u) * y.v + uint64_t(x.v) * y.u) % ell;
    return {uint32_t(u), uint32_t(v)};
  }
  F2 add(F2 x, F2 y) const {
    return {uint32_t((x.u + y.u) % ell), uint32_t((x.v + y.v) % ell)};
  }
  F2 scal(uint32_t s, F2 x) const {
    return {uint32_t(uint64_t(s) * x.u % ell),
            uint32_t(uint64_t(s) * x.v % ell)};
  }
  F2 inv(F2 x) const {
    // (u - v*sqrt(eps)) / (u^2 - eps*v^2)
    uint32_t n = uint32_t(
        ((uint64_t(x.u) * x.u % ell + ell - uint64_t(x.v) * x.v % ell * eps % ell)) %
        ell);
    uint32_t ninv = pow_mod(n, ell - 2, ell);
    F2 conj{x.u, (ell - x.v) % ell};
    return scal(ninv, conj);
  }

  // projective lines of F_{l^2}^2: index t = u + v*l for span{(1, t)},
  // index l^2 for span{(0, 1)}
  uint32_t line_count() const { return ell * ell + 1; }

  uint32_t act_line(Mat2 g, uint32_t idx) const {
    F2 x, y;
    if (idx < ell * ell) {
      x = {1, 0};
      y = {idx % ell, idx / ell};
    } else {
      y = {1, 0};
    }
    F2 X = add(scal(g.a, x), scal(g.b, y));
    F2 Y = add(scal(g.c, x), scal(g.d, y));
    if (X.u == 0 && X.v == 0) return ell * ell;
    F2 t = mul(Y, inv(X));
    return t.u + t.v * ell;
  }

  bool rational_line(uint32_t idx) const {
    return idx == ell * ell || idx / ell == 0;
  }
  uint32_t conj_line(uint32_t idx) const {
    if (idx == ell * ell) return idx;
    uint32_t u = idx % ell, v = idx / ell;
    return u + ((ell - v) % ell) * ell;
  }
};

// one permutation of the line set per generator
std::vector<std::vector<uint32_t>> line_perms(const F2Ctx& k,
                                              const std::vector<Mat2>& gens) {
  std::vector<std::vector<uint32_t>> perms;
  for (Mat2 g : gens) {
    std::vector<uint32_t> p(k.line_count());
    for (uint32_t i = 0; i < k.line_count(); ++i) p[i] = k.act_line(g, i);
    perms.push_back(std::move(p));
  }
  return perms;
}

bool pair_preserved(const std::vector<std::vector<uint32_t>>& perms,
                    uint32_t i, uint32_t j) {
  for (const auto& p : perms) {
    uint32_t a = p[i], b = p[j];
    if (!((a == i && b == j) || (a == j && b == i))) return false;
  }
  return true;
}

bool line_fixed(const std::vector<std::vector<uint32_t>>& perms, uint32_t i) {
  for (const auto& p : perms)
    if (p[i] != i) return false;
  return true;
}

struct ContainmentScan {
  bool stable_rational_line = false;
  bool rational_pair = false;
  bool conjugate_pair = false;
  bool any_pair = false;
};

ContainmentScan scan_containment(uint32_t ell, const std::vector<Mat2>& gens) {
  F2Ctx k{ell, nonresidue(ell)};
  auto perms = line_perms(k, gens);
  ContainmentScan s;
  const uint32_t M = k.line_count();
  for (uint32_t i = 0; i < M; ++i)
    if (k.rational_line(i) && line_fixed(perms, i))
      s.stable_rational_line = true;
  for (uint32_t i = 0; i < M && !s.any_pair; ++i)
    for (uint32_t j = i + 1; j < M; ++j)
      if (pair_preserved(perms, i, j)) {
        s.any_pair = true;
        if (k.rational_line(i) && k.rational_line(j)) s.rational_pair = true;
        if (k.conj_line(i) == j && !k.rational_line(i)) s.conjugate_pair = true;
        break;
      }
  // the first preserved pair found may not be of the wanted shape; rescan
  // the specific shapes when needed
  if (s.any_pair && !s.rational_pair) {
    for (uint32_t i = 0; i < M && !s.rational_pair; ++i)
      if (k.rational_line(i))
        for (uint32_t j = i + 1; j < M; ++j)
          if (k.rational_line(j) && pair_preserved(perms, i, j)) {
            s.rational_pair = true;
            break;
          }
  }
  if (s.any_pair && !s.conjugate_pair) {
    for (uint32_t i = 0; i < M && !s.conjugate_pair; ++i) {
      if (k.rational_line(i)) continue;
      uint32_t j = k.conj_line(i);
      if (j > i && pair_preserved(perms, i, j)) s.conjugate_pair = true;
    }
  }
  return s;
}

Integer parse_big(const nlohmann::json& v, const std::string& ctx,
                  const char* field) {
  if (v.is_number_integer()) return Integer(v.get<int64_t>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start ||
        !std::all_of(s.begin() + start, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      fail(ErrorKind::DataError,
           ctx + ": field '" + field + "' is not an integer string");
    return Integer(s);
  }
  fail(ErrorKind::DataError,
       ctx + ": field '" + field + "' must be an integer or integer string");
}

ExternalImageRecord parse_record(const nlohmann::json& e,
                                 const std::string& ctx_base) {
  if (!e.is_object())
    fail(ErrorKind::DataError, ctx_base + ": record must be an object");
  auto need = [&](const std::string& ctx,
                  const char* key) -> const nlohmann::json& {
    if (!e.contains(key))
      fail(ErrorKind::DataError,
           ctx + ": schema violation, missing field '" + key + "'");
    return e.at(key);
  };
  std::string ctx = ctx_base;
  const auto& jlabel = need(ctx, "label");
  if (!jlabel.is_string())
    fail(ErrorKind::DataError, ctx + ": label must be a string");

  ExternalImageRecord r;
  r.label = jlabel.get<std::string>();
  ctx += " (label '" + r.label + "')";

  const auto& jell = need(ctx, "ell");
  const auto& jlevel = need(ctx, "level");
  if (!jell.is_number_unsigned() || !jlevel.is_number_unsigned())
    fail(ErrorKind::DataError, ctx + ": ell and level must be positive integers");
  r.ell = jell.get<uint32_t>();
  if (r.ell < 3 || !Modulus(r.ell).is_prime())
    fail(ErrorKind::DataError, ctx + ": ell must be an odd prime");
  r.level = Modulus(jlevel.get<uint32_t>());
  if (!r.level.is_prime_power() || r.level.ell != r.ell)
    fail(ErrorKind::DataError, ctx + ": level must be a power of ell");

  const auto& jclass = need(ctx, "image_class");
  if (!jclass.is_string())
    fail(ErrorKind::DataError, ctx + ": image_class must be a string");
  try {
    r.image_class = image_class_from_name(jclass.get<std::string>());
  } catch (const IsopointError& err) {
    fail(ErrorKind::DataError, ctx + ": " + err.what());
  }

  const auto& jj = need(ctx, "j_invariant");
  if (!jj.is_object() || !jj.contains("factored") ||
      !jj.contains("numerator") || !jj.contains("denominator") ||
      !jj.at("factored").is_string())
    fail(ErrorKind::DataError,
         ctx + ": j_invariant must carry factored/numerator/denominator");
  r.j.factored = jj.at("factored").get<std::string>();
  Integer num = parse_big(jj.at("numerator"), ctx, "numerator");
  Integer den = parse_big(jj.at("denominator"), ctx, "denominator");
  if (den == 0) fail(ErrorKind::DataError, ctx + ": zero denominator");
  r.j.value = Rational(num, den);
  if (jj.contains("alt_factored"))
    r.j.alt_factored = jj.at("alt_factored").get<std::string>();
  if (jj.contains("note")) r.j.note = jj.at("note").get<std::string>();
  Rational expanded;
  try {
    expanded = parse_factored(r.j.factored);
  } catch (const IsopointError& err) {
    fail(ErrorKind::DataError, ctx + ": " + err.what());
  }
  if (expanded != r.j.value)
    fail(ErrorKind::DataError,
         ctx + ": factored j-invariant " + r.j.factored +
             " does not match numerator/denominator " +
             rational_to_string(r.j.value));

  const auto& jgens = need(ctx, "generators");
  if (!jgens.is_array() || jgens.empty())
    fail(ErrorKind::DataError,
         ctx + ": non-generating data (generators must be a nonempty array)");
  std::vector<Mat2> gens;
  for (size_t i = 0; i < jgens.size(); ++i) {
    const auto& m = jgens[i];
    if (!m.is_array() || m.size() != 4 ||
        !std::all_of(m.begin(), m.end(),
                     [](const nlohmann::json& x) { return x.is_number_integer(); }))
      fail(ErrorKind::DataError,
           ctx + ": generator #" + std::to_string(i) +
               " must be a flat [a,b,c,d] integer array");
    Mat2 g = make_mat(m[0].get<int64_t>(), m[1].get<int64_t>(),
                      m[2].get<int64_t>(), m[3].get<int64_t>(), r.level);
    if (!is_unit(det(g, r.level), r.level))
      fail(ErrorKind::SingularElement,
           ctx + ": singular element at generator #" + std::to_string(i));
    gens.push_back(g);
  }

  const auto& jsrc = need(ctx, "source");
  if (!jsrc.is_string())
    fail(ErrorKind::DataError, ctx + ": source must be a string");
  r.source = jsrc.get<std::string>();

  r.group = closure(gens, r.level);
  r.group.label = r.label;

  // determinant surjectivity at the prime level
  Subgroup mod_ell = r.level.is_prime() ? r.group : reduce_level(r.group, 1);
  if (!admissibility(mod_ell).det_surjective)
    fail(ErrorKind::DataError,
         ctx + ": containment failure, determinant is not surjective mod " +
             std::to_string(r.ell));

  // containment in the declared class, checked mod ell
  ContainmentScan s = scan_containment(r.ell, mod_ell.generators);
  uint64_t gl2_order =
      uint64_t(r.ell) * (r.ell - 1) * (r.ell - 1) * (r.ell + 1);
  switch (r.image_class) {
    case ImageClass::Surjective:
      if (mod_ell.order != gl2_order)
        fail(ErrorKind::DataError,
             ctx + ": containment failure, group is not all of GL2");
      break;
    case ImageClass::Borel:
      if (!s.stable_rational_line)
        fail(ErrorKind::DataError,
             ctx + ": containment failure, no stable line mod " +
                 std::to_string(r.ell));
      break;
    case ImageClass::SplitCartanNormalizer:
      if (!s.rational_pair)
        fail(ErrorKind::DataError,
             ctx + ": containment failure, no preserved pair of rational lines");
      break;
    case ImageClass::NonsplitCartanNormalizer:
      if (!s.conjugate_pair)
        fail(ErrorKind::DataError,
             ctx +
                 ": containment failure, no preserved conjugate pair of "
                 "non-rational lines");
      break;
    case ImageClass::Exceptional:
      // irreducible and contained in no Cartan normalizer
      if (s.stable_rational_line || s.any_pair || mod_ell.order == gl2_order)
        fail(ErrorKind::DataError,
             ctx + ": containment failure, group is not exceptional");
      break;
  }
  return r;
}

}  // namespace

std::vector<ExternalImageRecord> parse_image_table(const nlohmann::json& doc,
                                                   const std::string& origin) {
  if (!doc.is_array())
    fail(ErrorKind::DataError,
         "image table " + origin + ": root must be an array");
  std::vector<ExternalImageRecord> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    std::string ctx =
        "image table " + origin + ": record #" + std::to_string(i + 1);
    out.push_back(parse_record(doc[i], ctx));
    for (size_t k = 0; k + 1 < out.size(); ++k)
      if (out[k].label == out.back().label)
        fail(ErrorKind::DataError, ctx + ": duplicate label " + out.back().label);
  }
  return out;
}

std::vector<ExternalImageRecord> load_image_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::DataError, "cannot open image table: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    fail(ErrorKind::DataError,
         "image table " + path + ": " + std::string(err.what()));
  }
  return parse_image_table(doc, path);
}

nlohmann::json image_table_to_json(
    const std::vector<ExternalImageRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json gens = nlohmann::json::array();
    for (Mat2 g : r.group.generators)
      gens.push_back({g.a, g.b, g.c, g.d});
    nlohmann::json jj{{"factored", r.j.factored},
                      {"numerator", numerator(r.j.value).str()},
                      {"denominator", denominator(r.j.value).str()}};
    if (!r.j.alt_factored.empty()) jj["alt_factored"] = r.j.alt_factored;
    if (!r.j.note.empty()) jj["note"] = r.j.note;
    arr.push_back({{"label", r.label},
                   {"ell", r.ell},
                   {"level", r.level.value},
                   {"image_class", image_class_name(r.image_class)},
                   {"j_invariant", jj},
                   {"generators", gens},
                   {"source", r.source}});
  }
  return arr;
}

const std::string& builtin_image_table_text() {
  static const std::string text = R"JSON([
  {
    "label": "17a-borel",
    "ell": 17,
    "level": 17,
    "image_class": "borel",
    "j_invariant": {
      "factored": "-17*373^3/2^17",
      "numerator": "-882216989",
      "denominator": "131072"
    },
    "generators": [[1, 1, 0, 1], [9, 0, 0, 3], [16, 0, 0, 16]],
    "source": "j-invariant: B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 (1978), table of noncuspidal rational points on X_0(17); generators after D. Zywina, On the possible images of the mod l representations associated to elliptic curves over Q, arXiv:1508.07660, mod-17 Borel images"
  },
  {
    "label": "17b-borel",
    "ell": 17,
    "level": 17,
    "image_class": "borel",
    "j_invariant": {
      "factored": "-17^2*101^3/2",
      "numerator": "-297756989",
      "denominator": "2"
    },
    "generators": [[1, 1, 0, 1], [3, 0, 0, 9], [16, 0, 0, 16]],
    "source": "j-invariant: B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 (1978), table of noncuspidal rational points on X_0(17); generators after D. Zywina, arXiv:1508.07660, mod-17 Borel images"
  },
  {
    "label": "37a-borel",
    "ell": 37,
    "level": 37,
    "image_class": "borel",
    "j_invariant": {
      "factored": "7*11^3",
      "numerator": "9317",
      "denominator": "1",
      "alt_factored": "-7*11^3",
      "note": "sources disagree on the sign of this j-invariant; both renderings are carried and the positive one is primary"
    },
    "generators": [[1, 1, 0, 1], [4, 0, 0, 19], [6, 0, 0, 31]],
    "source": "j-invariant: B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 (1978), table of noncuspidal rational points on X_0(37); generators after D. Zywina, arXiv:1508.07660, mod-37 Borel images"
  },
  {
    "label": "37b-borel",
    "ell": 37,
    "level": 37,
    "image_class": "borel",
    "j_invariant": {
      "factored": "-7*137^3*2083^3",
      "numerator": "-162677523113838677",
      "denominator": "1"
    },
    "generators": [[1, 1, 0, 1], [19, 0, 0, 4], [31, 0, 0, 6]],
    "source": "j-invariant: B. Mazur, Rational isogenies of prime degree, Invent. Math. 44 (1978), table of noncuspidal rational points on X_0(37); generators after D. Zywina, arXiv:1508.07660, mod-37 Borel images"
  },
  {
    "label": "13a-exceptional",
    "ell": 13,
    "level": 13,
    "image_class": "exceptional",
    "j_invariant": {
      "factored": "2^4*5*13^4*17^3/3^13",
      "numerator": "11225615440",
      "denominator": "1594323"
    },
    "generators": [[0, 12, 1, 0], [4, 3, 3, 9], [0, 3, 4, 12], [4, 2, 4, 9], [2, 0, 0, 2]],
    "source": "D. Zywina, On the possible images of the mod l representations associated to elliptic curves over Q, arXiv:1508.07660, the 13S4 exceptional case (j-invariants and image generators)"
  },
  {
    "label": "13b-exceptional",
    "ell": 13,
    "level": 13,
    "image_class": "exceptional",
    "j_invariant": {
      "factored": "-2^12*5^3*11*13^4/3^13",
      "numerator": "-160855552000",
      "denominator": "1594323"
    },
    "generators": [[0, 12, 1, 0], [4, 3, 3, 9], [0, 3, 4, 12], [4, 2, 4, 9], [2, 0, 0, 2]],
    "source": "D. Zywina, arXiv:1508.07660, the 13S4 exceptional case (j-invariants and image generators)"
  },
  {
    "label": "13c-exceptional",
    "ell": 13,
    "level": 13,
    "image_class": "exceptional",
    "j_invariant": {
      "factored": "2^18*3^3*13^4*127^3*139^3*157^3*283^3*929/5^13*61^13",
      "numerator": "90616364985637924505590372621162077487104",
      "denominator": "197650497353702094308570556640625"
    },
    "generators": [[0, 12, 1, 0], [4, 3, 3, 9], [0, 3, 4, 12], [4, 2, 4, 9], [2, 0, 0, 2]],
    "source": "D. Zywina, arXiv:1508.07660, the 13S4 exceptional case (j-invariants and image generators)"
  }
])JSON";
  return text;
}

const std::vector<ExternalImageRecord>& builtin_image_table() {
  static const std::vector<ExternalImageRecord> table = parse_image_table(
      nlohmann::json::parse(builtin_image_table_text()), "builtin");
  return table;
}

}  // namespace isopoint
