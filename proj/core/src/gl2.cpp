#include "isopoint/gl2.hpp"

#include <numeric>

namespace isopoint {

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Modulus::Modulus(uint32_t v) : value(v) {
  if (v < 2) fail(ErrorKind::InvalidArgument, "modulus must be >= 2");
  if (v > 65535) fail(ErrorKind::InvalidArgument, "modulus above packing bound 65535");
  uint32_t p = 0;
  for (uint32_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) {
    ell = v;
    n = 1;
    return;
  }
  uint32_t rest = v, k = 0;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest == 1) {
    ell = p;
    n = k;
  }
}

Mat2 make_mat(int64_t a, int64_t b, int64_t c, int64_t d, const Modulus& m) {
  auto red = [&](int64_t t) -> uint16_t {
    int64_t r = t % int64_t(m.value);
    if (r < 0) r += m.value;
    return uint16_t(r);
  };
  return {red(a), red(b), red(c), red(d)};
}

Vec2 make_vec(int64_t x, int64_t y, const Modulus& m) {
  Mat2 t = make_mat(x, y, 0, 0, m);
  return {t.a, t.b};
}

Mat2 mul(Mat2 p, Mat2 q, const Modulus& m) {
  uint64_t N = m.value;
  return {uint16_t((uint64_t(p.a) * q.a + uint64_t(p.b) * q.c) % N),
          uint16_t((uint64_t(p.a) * q.b + uint64_t(p.b) * q.d) % N),
          uint16_t((uint64_t(p.c) * q.a + uint64_t(p.d) * q.c) % N),
          uint16_t((uint64_t(p.c) * q.b + uint64_t(p.d) * q.d) % N)};
}

uint32_t det(Mat2 g, const Modulus& m) {
  uint64_t N = m.value;
  uint64_t ad = (uint64_t(g.a) * g.d) % N;
  uint64_t bc = (uint64_t(g.b) * g.c) % N;
  return uint32_t((ad + N - bc) % N);
}

uint32_t trace(Mat2 g, const Modulus& m) {
  return (uint32_t(g.a) + uint32_t(g.d)) % m.value;
}

std::pair<uint32_t, uint32_t> char_poly(Mat2 g, const Modulus& m) {
  return {trace(g, m), det(g, m)};
}

bool is_unit(uint32_t r, const Modulus& m) {
  return std::gcd(r % m.value, m.value) == 1;
}

uint32_t inverse_unit(uint32_t r, const Modulus& m) {
  r %= m.value;
  int64_t t = 0, new_t = 1, n = m.value, a = r;
  while (a != 0) {
    int64_t q = n / a;
    int64_t tmp = n - q * a;
    n = a;
    a = tmp;
    tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
  }
  if (n != 1) fail(ErrorKind::SingularElement, "singular element: non-unit residue");
  if (t < 0) t += m.value;
  return uint32_t(t);
}

Mat2 inverse(Mat2 g, const Modulus& m) {
  uint32_t dinv = inverse_unit(det(g, m), m);
  uint64_t N = m.value;
  auto mulr = [&](uint64_t u, uint64_t v) { return uint16_t((u * v) % N); };
  // adjugate times det^-1
  return {mulr(g.d, dinv), mulr((N - g.b) % N, dinv), mulr((N - g.c) % N, dinv),
          mulr(g.a, dinv)};
}

Mat2 mat_pow(Mat2 g, uint64_t e, const Modulus& m) {
  Mat2 r = Mat2::identity();
  while (e) {
    if (e & 1) r = mul(r, g, m);
    g = mul(g, g, m);
    e >>= 1;
  }
  return r;
}

uint32_t element_order(Mat2 g, const Modulus& m) {
  if (!is_unit(det(g, m), m))
    fail(ErrorKind::SingularElement, "singular element has no order");
  Mat2 x = g;
  uint32_t k = 1;
  const Mat2 id = Mat2::identity();
  while (!(x == id)) {
    x = mul(x, g, m);
    ++k;
  }
  return k;
}

Vec2 act(Mat2 g, Vec2 v, const Modulus& m) {
  uint64_t N = m.value;
  return {uint16_t((uint64_t(g.a) * v.x + uint64_t(g.b) * v.y) % N),
          uint16_t((uint64_t(g.c) * v.x + uint64_t(g.d) * v.y) % N)};
}

Vec2 negate(Vec2 v, const Modulus& m) {
  uint32_t N = m.value;
  return {uint16_t((N - v.x) % N), uint16_t((N - v.y) % N)};
}

uint32_t exact_order(Vec2 v, const Modulus& m) {
  uint32_t g = std::gcd(std::gcd(uint32_t(v.x), uint32_t(v.y)), m.value);
  return m.value / g;
}

}  // namespace isopoint
