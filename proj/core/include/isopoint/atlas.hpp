#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isopoint/subgroup.hpp"

namespace isopoint {

// The named subgroups of GL2(Z/l^n Z). Conventions:
//   SplitCartan        {diag(a,d)}
//   NonsplitCartan     {[[a, eps*b],[b, a]]}, eps a quadratic non-residue mod l
//   normalizers        C union wC for the canonical involution
//                      (w0 = [[0,1],[1,0]] split, w = [[1,0],[0,-1]] nonsplit)
//   SemiCartan         D = {diag(a,1)}
//   SemiCartanPower(f) D^f = {diag(a^f,1)}, f | l-1
enum class NamedKind {
  FullGL2,
  Borel,
  SplitCartan,
  SplitCartanNormalizer,
  NonsplitCartan,
  NonsplitCartanNormalizer,
  SemiCartan,
  SemiCartanPower,
};

struct NamedSubgroupKind {
  NamedKind kind = NamedKind::FullGL2;
  uint32_t f = 1;                   // used by SemiCartanPower
  std::optional<uint32_t> epsilon;  // nonsplit constructions; default least non-residue
};

// least positive quadratic non-residue mod l (l an odd prime)
uint32_t nonresidue(uint32_t ell);
// the next non-residue after nonresidue(l); used to check eps-independence
uint32_t second_nonresidue(uint32_t ell);

// smallest generator of the cyclic unit group mod l^n (l odd)
uint32_t unit_group_generator(const Modulus& m);

// lexicographically least generator of C_ns(l), order l^2 - 1
Mat2 cns_generator(uint32_t ell, uint32_t epsilon);

// Element set materialized from the defining formula (not by closure), with
// an explicit generating set attached. Level may be any odd prime power
// below the packing bound. Throws ClosureTooLarge when the formula order
// exceeds the closure cap.
Subgroup build_named(const NamedSubgroupKind& kind, const Modulus& level);

// Textual ids: gl2@13, borel@17, cs@11, cs+@11, cns@11, cns+@37,
// semicartan@13, semicartan^6@13
std::string group_id(const NamedSubgroupKind& kind, const Modulus& level);
std::pair<NamedSubgroupKind, Modulus> parse_group_id(const std::string& id);

// Full preimage of h under GL2(Z/l^n) -> GL2(Z/l^m), n >= m, built by direct
// lift enumeration {h + l^m * A}. Generators are lifted generators plus the
// kernel generators I + l^m E_ij.
Subgroup full_preimage(const Subgroup& h, uint32_t n_target, uint64_t cap = 0);
// reduction of a level-l^n subgroup to level l^m
Subgroup reduce_level(const Subgroup& g, uint32_t m_target);

// Necessary conditions for the mod-l image of an elliptic curve over Q:
// surjective determinant (Weil pairing plus the cyclotomic character) and a
// complex-conjugation element (order 2, det -1, trace 0). The -I flag is
// informational; images of curves need not contain -I.
struct GaloisAdmissibility {
  bool det_surjective = false;
  bool has_complex_conjugation = false;
  bool contains_minus_identity = false;
};
GaloisAdmissibility admissibility(const Subgroup& g);

// Supersingular inertia compatibility at prime level: a subgroup of C+ns
// containing the inertia image at l must meet C_ns in a cyclic subgroup of
// order at least (l^2-1)/6 (ramification index e in {1,2,3,4,6}). Membership
// in the canonical C_ns is tested as commutation with its generator, which
// is its own centralizer in GL2.
struct CnsInertia {
  uint64_t meet_order = 0;
  uint64_t required = 0;
  bool ok = false;
};
CnsInertia inertia_compatible_cns(const Subgroup& g,
                                  std::optional<uint32_t> epsilon = {});

// All subgroups of C+ns(l) up to conjugacy within C+ns(l), each closed.
// Inner subgroups are the divisor-indexed cyclic subgroups of C_ns; the rest
// are H_d together with an outer coset, deduplicated by the conjugation
// action on coset indices. Deterministic order and labels.
std::vector<Subgroup> enumerate_subgroups_cns_plus(uint32_t ell,
                                                   uint32_t bound = 41);

// All subgroups of the upper-triangular Borel up to Borel-conjugacy. Classes
// are indexed by a subgroup S of the diagonal torus plus the choice of
// including the unipotent part (complements are all U-conjugate).
std::vector<Subgroup> enumerate_subgroups_borel(uint32_t ell,
                                                uint32_t bound = 17);

}  // namespace isopoint
