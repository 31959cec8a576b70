#include "isopoint/atlas.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace isopoint {

namespace {

void require_odd_prime(uint32_t ell) {
  if (ell < 3 || !is_prime(ell))
    fail(ErrorKind::InvalidArgument,
         "odd prime required, got " + std::to_string(ell));
}

uint64_t pow_u64(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

uint32_t unit_order(uint32_t r, uint32_t N) {
  uint64_t x = r % N;
  uint32_t k = 1;
  while (x != 1) {
    x = (x * r) % N;
    ++k;
  }
  return k;
}

bool is_nonresidue(uint32_t r, uint32_t ell) {
  r %= ell;
  if (r == 0) return false;
  // Euler criterion
  uint64_t x = 1, b = r;
  uint32_t e = (ell - 1) / 2;
  while (e) {
    if (e & 1) x = (x * b) % ell;
    b = (b * b) % ell;
    e >>= 1;
  }
  return x == ell - 1;
}

void sort_canonical(std::vector<Mat2>& v) {
  std::sort(v.begin(), v.end(),
            [](Mat2 x, Mat2 y) { return pack(x) < pack(y); });
}

Mat2 diag(uint32_t a, uint32_t d) { return {uint16_t(a), 0, 0, uint16_t(d)}; }

}  // namespace

uint32_t nonresidue(uint32_t ell) {
  require_odd_prime(ell);
  for (uint32_t r = 2; r < ell; ++r)
    if (is_nonresidue(r, ell)) return r;
  fail(ErrorKind::InvalidArgument, "no non-residue found");
}

uint32_t second_nonresidue(uint32_t ell) {
  uint32_t first = nonresidue(ell);
  for (uint32_t r = first + 1; r < ell; ++r)
    if (is_nonresidue(r, ell)) return r;
  fail(ErrorKind::InvalidArgument,
       "no second non-residue below " + std::to_string(ell));
}

uint32_t unit_group_generator(const Modulus& m) {
  if (!m.is_prime_power() || m.ell == 2)
    fail(ErrorKind::InvalidArgument, "odd prime power required");
  uint32_t phi = m.value / m.ell * (m.ell - 1);
  for (uint32_t g = 2; g < m.value; ++g) {
    if (g % m.ell == 0) continue;
    if (unit_order(g, m.value) == phi) return g;
  }
  fail(ErrorKind::InvalidArgument, "unit group generator not found");
}

Mat2 cns_generator(uint32_t ell, uint32_t epsilon) {
  require_odd_prime(ell);
  if (!is_nonresidue(epsilon, ell))
    fail(ErrorKind::InvalidArgument, "epsilon must be a non-residue");
  Modulus m(ell);
  uint32_t q = ell * ell - 1;
  for (uint32_t a = 0; a < ell; ++a) {
    for (uint32_t b = 1; b < ell; ++b) {  // b = 0 gives scalars, order < q
      Mat2 g = make_mat(a, int64_t(epsilon) * b, b, a, m);
      if (!is_unit(det(g, m), m)) continue;
      if (element_order(g, m) == q) return g;
    }
  }
  fail(ErrorKind::InvalidArgument, "no C_ns generator found");
}

std::string group_id(const NamedSubgroupKind& k, const Modulus& level) {
  std::string name;
  switch (k.kind) {
    case NamedKind::FullGL2: name = "gl2"; break;
    case NamedKind::Borel: name = "borel"; break;
    case NamedKind::SplitCartan: name = "cs"; break;
    case NamedKind::SplitCartanNormalizer: name = "cs+"; break;
    case NamedKind::NonsplitCartan: name = "cns"; break;
    case NamedKind::NonsplitCartanNormalizer: name = "cns+"; break;
    case NamedKind::SemiCartan: name = "semicartan"; break;
    case NamedKind::SemiCartanPower:
      name = "semicartan^" + std::to_string(k.f);
      break;
  }
  return name + "@" + std::to_string(level.value);
}

std::pair<NamedSubgroupKind, Modulus> parse_group_id(const std::string& id) {
  auto at = id.find('@');
  if (at == std::string::npos)
    fail(ErrorKind::InvalidArgument, "group id needs the form name@level: " + id);
  std::string name = id.substr(0, at);
  uint32_t level = 0;
  try {
    level = uint32_t(std::stoul(id.substr(at + 1)));
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "bad level in group id: " + id);
  }
  NamedSubgroupKind k;
  if (name == "gl2") k.kind = NamedKind::FullGL2;
  else if (name == "borel") k.kind = NamedKind::Borel;
  else if (name == "cs") k.kind = NamedKind::SplitCartan;
  else if (name == "cs+") k.kind = NamedKind::SplitCartanNormalizer;
  else if (name == "cns") k.kind = NamedKind::NonsplitCartan;
  else if (name == "cns+") k.kind = NamedKind::NonsplitCartanNormalizer;
  else if (name == "semicartan") k.kind = NamedKind::SemiCartan;
  else if (name.rfind("semicartan^", 0) == 0) {
    k.kind = NamedKind::SemiCartanPower;
    try {
      k.f = uint32_t(std::stoul(name.substr(11)));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "bad semicartan power in: " + id);
    }
  } else {
    fail(ErrorKind::InvalidArgument, "unknown group id: " + name);
  }
  return {k, Modulus(level)};
}

Subgroup build_named(const NamedSubgroupKind& k, const Modulus& level) {
  if (!level.is_prime_power() || level.ell == 2)
    fail(ErrorKind::InvalidArgument, "named subgroups need an odd prime-power level");
  const uint32_t N = level.value, ell = level.ell;
  const uint64_t phi = uint64_t(N) / ell * (ell - 1);
  const uint64_t q = uint64_t(ell) * ell - 1;
  const uint64_t lifts = pow_u64(N / ell, 2);  // ell^{2(n-1)}
  const uint64_t cap = default_closure_cap();

  uint32_t eps = 0;
  const bool nonsplit = k.kind == NamedKind::NonsplitCartan ||
                        k.kind == NamedKind::NonsplitCartanNormalizer;
  if (nonsplit) {
    eps = k.epsilon.value_or(nonresidue(ell));
    if (!is_nonresidue(eps, ell))
      fail(ErrorKind::InvalidArgument, "epsilon must be a non-residue mod ell");
  }

  Subgroup out;
  out.modulus = level;
  out.label = group_id(k, level);

  uint64_t expected = 0;
  switch (k.kind) {
    case NamedKind::FullGL2:
      expected = lifts * lifts * q * (q - (ell - 1) * 1ull);  // l^{4(n-1)} (l^2-1)(l^2-l)
      break;
    case NamedKind::Borel: expected = phi * phi * N; break;
    case NamedKind::SplitCartan: expected = phi * phi; break;
    case NamedKind::SplitCartanNormalizer: expected = 2 * phi * phi; break;
    case NamedKind::NonsplitCartan: expected = lifts * q; break;
    case NamedKind::NonsplitCartanNormalizer: expected = 2 * lifts * q; break;
    case NamedKind::SemiCartan: expected = phi; break;
    case NamedKind::SemiCartanPower:
      if (k.f == 0 || (ell - 1) % k.f != 0)
        fail(ErrorKind::InvalidArgument,
             "invalid semicartan power f = " + std::to_string(k.f));
      expected = phi / std::gcd(uint64_t(k.f), phi);
      break;
  }
  if (expected > cap)
    fail(ErrorKind::ClosureTooLarge,
         out.label + " has order " + std::to_string(expected) +
             " above the closure cap " + std::to_string(cap));
  out.elements.reserve(expected);

  const uint32_t g = (k.kind == NamedKind::NonsplitCartan ||
                      k.kind == NamedKind::NonsplitCartanNormalizer)
                         ? 0
                         : unit_group_generator(level);

  switch (k.kind) {
    case NamedKind::FullGL2: {
      for (uint32_t a = 0; a < N; ++a)
        for (uint32_t b = 0; b < N; ++b)
          for (uint32_t c = 0; c < N; ++c)
            for (uint32_t d = 0; d < N; ++d) {
              Mat2 e{uint16_t(a), uint16_t(b), uint16_t(c), uint16_t(d)};
              if (is_unit(det(e, level), level)) out.elements.push_back(e);
            }
      out.generators = {{1, 1, 0, 1}, {1, 0, 1, 1}, diag(g, 1)};
      break;
    }
    case NamedKind::Borel: {
      for (uint32_t a = 0; a < N; ++a) {
        if (a % ell == 0) continue;
        for (uint32_t b = 0; b < N; ++b)
          for (uint32_t d = 0; d < N; ++d) {
            if (d % ell == 0) continue;
            out.elements.push_back({uint16_t(a), uint16_t(b), 0, uint16_t(d)});
          }
      }
      out.generators = {{1, 1, 0, 1}, diag(g, 1), diag(1, g)};
      break;
    }
    case NamedKind::SplitCartan:
    case NamedKind::SplitCartanNormalizer: {
      for (uint32_t a = 0; a < N; ++a) {
        if (a % ell == 0) continue;
        for (uint32_t d = 0; d < N; ++d) {
          if (d % ell == 0) continue;
          out.elements.push_back(diag(a, d));
          if (k.kind == NamedKind::SplitCartanNormalizer)
            out.elements.push_back({0, uint16_t(a), uint16_t(d), 0});
        }
      }
      out.generators = {diag(g, 1), diag(1, g)};
      if (k.kind == NamedKind::SplitCartanNormalizer)
        out.generators.push_back({0, 1, 1, 0});
      break;
    }
    case NamedKind::NonsplitCartan:
    case NamedKind::NonsplitCartanNormalizer: {
      const Mat2 w = diag(1, N - 1);
      for (uint32_t a = 0; a < N; ++a)
        for (uint32_t b = 0; b < N; ++b) {
          Mat2 e = make_mat(a, int64_t(eps) * b, b, a, level);
          if (!is_unit(det(e, level), level)) continue;
          out.elements.push_back(e);
          if (k.kind == NamedKind::NonsplitCartanNormalizer)
            out.elements.push_back(mul(e, w, level));
        }
      if (level.n == 1) {
        out.generators = {cns_generator(ell, eps)};
      } else {
        // Teichmueller part plus the two generators of the one-units of the
        // quadratic Galois ring (valid for odd ell)
        Mat2 m0 = cns_generator(ell, eps);
        Mat2 tau = mat_pow(m0, lifts, level);
        out.generators = {tau, diag(1 + ell, 1 + ell),
                          make_mat(1, int64_t(eps) * ell, ell, 1, level)};
      }
      if (k.kind == NamedKind::NonsplitCartanNormalizer)
        out.generators.push_back(w);
      break;
    }
    case NamedKind::SemiCartan:
    case NamedKind::SemiCartanPower: {
      uint32_t f = k.kind == NamedKind::SemiCartan ? 1 : k.f;
      uint32_t g0 = 1;
      {
        uint64_t x = 1;
        for (uint32_t i = 0; i < f; ++i) x = (x * g) % N;
        g0 = uint32_t(x);
      }
      uint64_t x = 1;
      do {
        out.elements.push_back(diag(uint32_t(x), 1));
        x = (x * g0) % N;
      } while (x != 1);
      out.generators = {diag(g0, 1)};
      break;
    }
  }

  sort_canonical(out.elements);
  out.order = out.elements.size();
  if (out.order != expected)
    fail(ErrorKind::InvalidArgument,
         "internal: formula order mismatch for " + out.label);
  return out;
}

Subgroup full_preimage(const Subgroup& h, uint32_t n_target, uint64_t cap) {
  if (cap == 0) cap = default_closure_cap();
  const Modulus& src = h.modulus;
  if (!src.is_prime_power() || src.ell == 2)
    fail(ErrorKind::InvalidArgument, "full_preimage needs an odd prime-power level");
  if (n_target < src.n)
    fail(ErrorKind::InvalidArgument, "full_preimage target level below source");
  const uint32_t ell = src.ell;
  uint64_t tv = pow_u64(ell, n_target);
  if (tv > 65535)
    fail(ErrorKind::InvalidArgument,
         "full_preimage target level " + std::to_string(tv) +
             " exceeds the supported modulus range");
  Modulus tgt{uint32_t(tv)};
  const uint32_t M = src.value;              // l^m
  const uint32_t L = tgt.value / M;          // l^{n-m}, lift count per entry
  const uint64_t kernel = pow_u64(L, 4);
  if (h.order * kernel > cap)
    fail(ErrorKind::ClosureTooLarge,
         "full preimage order " + std::to_string(h.order * kernel) +
             " above cap " + std::to_string(cap));

  Subgroup out;
  out.modulus = tgt;
  out.label = "preim@" + std::to_string(tgt.value) + "(" + h.label + ")";
  out.elements.reserve(h.order * kernel);
  // lifts e + l^m * A are pairwise distinct, no dedup needed
  for (Mat2 e : h.elements)
    for (uint32_t ia = 0; ia < L; ++ia)
      for (uint32_t ib = 0; ib < L; ++ib)
        for (uint32_t ic = 0; ic < L; ++ic)
          for (uint32_t id = 0; id < L; ++id)
            out.elements.push_back({uint16_t(e.a + M * ia), uint16_t(e.b + M * ib),
                                    uint16_t(e.c + M * ic), uint16_t(e.d + M * id)});
  sort_canonical(out.elements);
  out.order = out.elements.size();

  for (Mat2 g : h.generators) out.generators.push_back(g);
  if (L > 1) {
    out.generators.push_back(make_mat(1 + M, 0, 0, 1, tgt));
    out.generators.push_back(make_mat(1, M, 0, 1, tgt));
    out.generators.push_back(make_mat(1, 0, M, 1, tgt));
    out.generators.push_back(make_mat(1, 0, 0, 1 + M, tgt));
  }
  return out;
}

Subgroup reduce_level(const Subgroup& g, uint32_t m_target) {
  const Modulus& src = g.modulus;
  if (!src.is_prime_power())
    fail(ErrorKind::InvalidArgument, "reduce_level needs a prime-power level");
  if (m_target > src.n)
    fail(ErrorKind::InvalidArgument, "reduce_level target above source level");
  Modulus tgt(uint32_t(pow_u64(src.ell, m_target)));
  FlatU64Set seen;
  Subgroup out;
  out.modulus = tgt;
  out.label = "red@" + std::to_string(tgt.value) + "(" + g.label + ")";
  for (Mat2 e : g.elements) {
    Mat2 r = make_mat(e.a, e.b, e.c, e.d, tgt);
    if (seen.insert(pack(r))) out.elements.push_back(r);
  }
  sort_canonical(out.elements);
  out.order = out.elements.size();
  for (Mat2 e : g.generators)
    out.generators.push_back(make_mat(e.a, e.b, e.c, e.d, tgt));
  return out;
}

GaloisAdmissibility admissibility(const Subgroup& g) {
  const Modulus& m = g.modulus;
  GaloisAdmissibility out;
  std::vector<bool> dets(m.value, false);
  size_t distinct = 0;
  const Mat2 id = Mat2::identity();
  for (Mat2 e : g.elements) {
    uint32_t d = det(e, m);
    if (!dets[d]) {
      dets[d] = true;
      ++distinct;
    }
    if (!out.has_complex_conjugation && trace(e, m) == 0 && d == m.value - 1 &&
        !(e == id) && mul(e, e, m) == id)
      out.has_complex_conjugation = true;
  }
  uint64_t phi = m.value;
  if (m.is_prime_power()) phi = uint64_t(m.value) / m.ell * (m.ell - 1);
  else {
    phi = 0;
    for (uint32_t r = 1; r < m.value; ++r)
      if (std::gcd(r, m.value) == 1) ++phi;
  }
  out.det_surjective = (distinct == phi);
  out.contains_minus_identity =
      g.contains({uint16_t(m.value - 1), 0, 0, uint16_t(m.value - 1)});
  return out;
}

CnsInertia inertia_compatible_cns(const Subgroup& g,
                                  std::optional<uint32_t> epsilon) {
  const Modulus& m = g.modulus;
  if (!m.is_prime() || m.ell == 2)
    fail(ErrorKind::InvalidArgument, "inertia test needs an odd prime level");
  uint32_t eps = epsilon.value_or(nonresidue(m.ell));
  Mat2 gamma = cns_generator(m.ell, eps);
  CnsInertia out;
  out.required = (uint64_t(m.ell) * m.ell - 1) / 6;
  for (Mat2 e : g.elements)
    if (mul(e, gamma, m) == mul(gamma, e, m)) ++out.meet_order;
  // C_ns is its own centralizer, so meet_order = |G intersect C_ns|; the
  // inertia image is cyclic of order (l^2-1)/e with e in {1,2,3,4,6}
  out.ok = out.meet_order * 6 >= uint64_t(m.ell) * m.ell - 1;
  return out;
}

std::vector<Subgroup> enumerate_subgroups_cns_plus(uint32_t ell, uint32_t bound) {
  require_odd_prime(ell);
  if (ell > bound)
    fail(ErrorKind::EnumerationTooLarge,
         "enumeration too large: ell " + std::to_string(ell) + " above bound " +
             std::to_string(bound));
  Modulus m(ell);
  const uint32_t q = ell * ell - 1;
  const uint32_t eps = nonresidue(ell);
  const Mat2 gamma = cns_generator(ell, eps);
  const Mat2 w = diag(1, ell - 1);

  std::vector<Mat2> pows(q);
  pows[0] = Mat2::identity();
  for (uint32_t i = 1; i < q; ++i) pows[i] = mul(pows[i - 1], gamma, m);

  std::vector<uint32_t> divisors;
  for (uint32_t d = 1; d <= q; ++d)
    if (q % d == 0) divisors.push_back(d);

  std::vector<Subgroup> out;
  auto inner_elements = [&](uint32_t d) {
    std::vector<Mat2> els;
    els.reserve(d);
    for (uint32_t k = 0; k < d; ++k) els.push_back(pows[uint64_t(k) * (q / d)]);
    return els;
  };

  for (uint32_t d : divisors) {
    Subgroup s;
    s.modulus = m;
    s.elements = inner_elements(d);
    sort_canonical(s.elements);
    s.order = d;
    if (d > 1) s.generators = {pows[q / d]};
    s.label = "cns+@" + std::to_string(ell) + ":d" + std::to_string(d);
    out.push_back(std::move(s));
  }

  // subgroups not inside C_ns: H_d plus an outer coset gamma^i w H_d, with
  // (gamma^i w)^2 = gamma^{i(l+1)} required inside H_d; conjugation by
  // gamma^t shifts i by t(1-l), conjugation by w multiplies i by l
  for (uint32_t d : divisors) {
    const uint32_t step = q / d;
    const uint32_t shift = (step - (ell - 1) % step) % step;  // (1-l) mod step
    for (uint32_t i = 0; i < step; ++i) {
      if ((uint64_t(i) * (ell + 1)) % step != 0) continue;
      // canonical coset index = min of the conjugation orbit
      uint32_t mn = i;
      std::vector<uint32_t> stack{i};
      std::set<uint32_t> seen{i};
      while (!stack.empty()) {
        uint32_t x = stack.back();
        stack.pop_back();
        mn = std::min(mn, x);
        for (uint32_t y : {uint32_t((x + shift) % step),
                           uint32_t((uint64_t(x) * ell) % step)})
          if (seen.insert(y).second) stack.push_back(y);
      }
      if (i != mn) continue;
      Subgroup s;
      s.modulus = m;
      s.elements = inner_elements(d);
      for (uint32_t k = 0; k < d; ++k)
        s.elements.push_back(mul(pows[(i + uint64_t(k) * step) % q], w, m));
      sort_canonical(s.elements);
      s.order = 2 * d;
      if (d > 1) s.generators = {pows[step]};
      s.generators.push_back(mul(pows[i], w, m));
      s.label = "cns+@" + std::to_string(ell) + ":d" + std::to_string(d) + "+w" +
                std::to_string(i);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Subgroup> enumerate_subgroups_borel(uint32_t ell, uint32_t bound) {
  require_odd_prime(ell);
  if (ell > bound)
    fail(ErrorKind::EnumerationTooLarge,
         "enumeration too large: ell " + std::to_string(ell) + " above bound " +
             std::to_string(bound));
  Modulus m(ell);
  const uint32_t u = ell - 1;  // torus is C_u x C_u, indexed by (a-1, d-1)

  auto tpack = [&](uint32_t a, uint32_t d) { return a * ell + d; };
  auto tmul = [&](uint32_t x, uint32_t y) {
    return tpack((x / ell) * (y / ell) % ell, (x % ell) * (y % ell) % ell);
  };

  // all subgroups of the torus: cyclic subgroups, then closure under joins
  std::set<std::vector<uint32_t>> subs;
  std::vector<std::vector<uint32_t>> worklist;
  auto close_t = [&](std::vector<uint32_t> gens) {
    std::vector<char> in(ell * ell, 0);
    std::vector<uint32_t> els{tpack(1, 1)}, frontier{tpack(1, 1)};
    in[tpack(1, 1)] = 1;
    while (!frontier.empty()) {
      std::vector<uint32_t> next;
      for (uint32_t x : frontier)
        for (uint32_t g : gens) {
          uint32_t y = tmul(x, g);
          if (!in[y]) {
            in[y] = 1;
            els.push_back(y);
            next.push_back(y);
          }
        }
      frontier = std::move(next);
    }
    std::sort(els.begin(), els.end());
    return els;
  };
  std::vector<std::vector<uint32_t>> cyclics;
  {
    std::set<std::vector<uint32_t>> cset;
    for (uint32_t a = 1; a < ell; ++a)
      for (uint32_t d = 1; d < ell; ++d) {
        auto c = close_t({tpack(a, d)});
        if (cset.insert(c).second) cyclics.push_back(c);
      }
  }
  for (const auto& c : cyclics)
    if (subs.insert(c).second) worklist.push_back(c);
  while (!worklist.empty()) {
    auto h = std::move(worklist.back());
    worklist.pop_back();
    for (const auto& c : cyclics) {
      if (std::includes(h.begin(), h.end(), c.begin(), c.end())) continue;
      std::vector<uint32_t> gens = h;
      gens.insert(gens.end(), c.begin(), c.end());
      auto j = close_t(gens);
      if (subs.insert(j).second) worklist.push_back(j);
    }
  }
  (void)u;

  std::vector<std::vector<uint32_t>> tsubs(subs.begin(), subs.end());
  std::sort(tsubs.begin(), tsubs.end(),
            [](const auto& x, const auto& y) {
              if (x.size() != y.size()) return x.size() < y.size();
              return x < y;
            });

  // greedy generator extraction inside the torus
  auto tgens = [&](const std::vector<uint32_t>& s) {
    std::vector<uint32_t> gens;
    std::vector<uint32_t> have{tpack(1, 1)};
    for (uint32_t e : s) {
      if (std::binary_search(have.begin(), have.end(), e)) continue;
      gens.push_back(e);
      have = close_t(gens);
    }
    return gens;
  };

  std::vector<Subgroup> out;
  for (size_t k = 0; k < tsubs.size(); ++k) {
    const auto& s = tsubs[k];
    auto gens = tgens(s);
    // complement class: the subgroup S itself, diagonally embedded
    Subgroup cpl;
    cpl.modulus = m;
    for (uint32_t e : s) cpl.elements.push_back(diag(e / ell, e % ell));
    sort_canonical(cpl.elements);
    cpl.order = cpl.elements.size();
    for (uint32_t e : gens) cpl.generators.push_back(diag(e / ell, e % ell));
    cpl.label = "borel@" + std::to_string(ell) + ":t" + std::to_string(k);
    out.push_back(std::move(cpl));
    // class containing the unipotent part: U . S
    Subgroup us;
    us.modulus = m;
    for (uint32_t e : s)
      for (uint32_t b = 0; b < ell; ++b)
        us.elements.push_back({uint16_t(e / ell), uint16_t(b), 0, uint16_t(e % ell)});
    sort_canonical(us.elements);
    us.order = us.elements.size();
    us.generators = {{1, 1, 0, 1}};
    for (uint32_t e : gens) us.generators.push_back(diag(e / ell, e % ell));
    us.label = "borel@" + std::to_string(ell) + ":t" + std::to_string(k) + "+u";
    out.push_back(std::move(us));
  }
  return out;
}

}  // namespace isopoint
