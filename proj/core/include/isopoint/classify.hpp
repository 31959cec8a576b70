#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isopoint/atlas.hpp"
#include "isopoint/criteria.hpp"
#include "isopoint/curve.hpp"
#include "isopoint/degrees.hpp"
#include "isopoint/records.hpp"

namespace isopoint {

// A j-invariant not eliminated by the implemented criteria. "Survives"
// means exactly that; isolation is only asserted when a cited fact row
// backs it, otherwise the status is open.
struct SurvivingJ {
  JInvariant j;
  std::string status;  // "candidate - isolation known" | "candidate - open"
  std::string citation_row;  // fact row id backing a known status, else empty
  std::string record_label;  // image record the degrees came from
};

struct ClassAnalysis {
  ImageClass image_class = ImageClass::Surjective;
  std::vector<RuleVerdict> verdicts;  // applied in order
  // "eliminated" | "survives" | "insufficient external data"
  std::string final_outcome;
};

struct ClassificationReport {
  uint32_t ell = 0;
  uint32_t n = 1;
  CurveInvariants curve_level_n;  // X1(l^n)
  CurveInvariants curve_ell;      // X1(l), where the rules run
  uint64_t covering = 1;          // deg X1(l^n) -> X1(l)
  std::vector<ClassAnalysis> classes;  // fixed class order
  std::vector<SurvivingJ> surviving;
};

// The decision procedure at (l, n): every image class is either eliminated
// by a cited rule chain, marked surviving with its j-invariants, or marked
// "insufficient external data" when required records are missing.
ClassificationReport classify(uint32_t ell, uint32_t n,
                              const std::vector<ExternalImageRecord>& table);

std::vector<ClassificationReport> classify_range(
    const std::vector<uint32_t>& ells, uint32_t n,
    const std::vector<ExternalImageRecord>& table);

nlohmann::json report_to_json(const ClassificationReport& r);
// format: "json" | "text" (numbered proof sketch)
std::string emit_report(const ClassificationReport& r,
                        const std::string& format);
nlohmann::json range_summary(const std::vector<ClassificationReport>& rs);

// Scan of all nonsplit-Cartan-normalizer subgroups at prime level against
// the (l^2-1)/12 degree bound. Subgroups failing the admissibility or
// inertia filter are reported with included = false, never dropped; a
// bound violation among included subgroups would falsify the cited bound.
struct CnsScanRow {
  std::string label;
  uint64_t order = 0;
  GaloisAdmissibility flags;
  CnsInertia inertia;
  uint64_t min_degree = 0;
  bool included = false;
  bool violates_bound = false;
};

struct CnsScanResult {
  uint32_t ell = 0;
  uint64_t bound = 0;  // (l^2-1)/12
  uint64_t genus = 0;  // genus X1(l)
  std::vector<CnsScanRow> rows;
  uint64_t included_count = 0;
  uint64_t included_violators = 0;
  uint64_t excluded_violators = 0;
};

CnsScanResult scan_cns(uint32_t ell);
nlohmann::json scan_to_json(const CnsScanResult& s);

}  // namespace isopoint
