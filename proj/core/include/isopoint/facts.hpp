#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "isopoint/errors.hpp"

namespace isopoint {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact rational from a factored rendering such as "7*11^3",
// "-17*373^3/2^17" or "2^4*5*13^4*17^3/3^13". Whitespace is ignored.
Rational parse_factored(const std::string& expr);
std::string rational_to_string(const Rational& r);

struct JInvariant {
  std::string factored;
  Rational value;
  // alternate sign rendering plus a provenance note where the sources
  // disagree; empty otherwise
  std::string alt_factored;
  std::string note;
};

// A cited external result. The artifact never verifies these; it only
// applies them, and every classification trace names the rows it used.
struct FactRow {
  std::string id;
  std::string statement;  // restated in this project's own words
  std::string citation;
};

class FactTable {
 public:
  static const FactTable& v1();
  std::string version() const { return "1"; }

  const std::vector<FactRow>& rows() const { return rows_; }
  const FactRow& row(const std::string& id) const;

  const std::vector<uint32_t>& mazur_borel_primes() const { return mazur_; }
  bool borel_admissible(uint32_t ell) const;
  // split Cartan normalizer images are excluded for every prime l > 7
  bool split_cartan_excluded(uint32_t ell) const { return ell > 7; }
  // among l > 7, exceptional images occur only at l = 13
  bool exceptional_admissible(uint32_t ell) const { return ell == 13; }
  uint64_t nonsplit_degree_bound(uint32_t ell) const;  // (l^2-1)/12

  const std::vector<JInvariant>& borel_j_17() const { return borel_j_17_; }
  const std::vector<JInvariant>& borel_j_37() const { return borel_j_37_; }
  const std::vector<JInvariant>& exceptional_j_13() const { return exc_j_13_; }

  // isolation status for a surviving j-invariant: returns the fact-row id
  // backing "isolation known", or empty when the status is open
  std::string isolation_known_row(const Rational& j) const;

 private:
  FactTable();
  std::vector<FactRow> rows_;
  std::vector<uint32_t> mazur_;
  std::vector<JInvariant> borel_j_17_, borel_j_37_, exc_j_13_;
};

}  // namespace isopoint
