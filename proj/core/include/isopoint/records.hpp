#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isopoint/criteria.hpp"
#include "isopoint/facts.hpp"
#include "isopoint/subgroup.hpp"

namespace isopoint {

// A literature-sourced mod-l Galois image: cited generator data plus the
// j-invariant it belongs to. Loaded records are always validated: generator
// invertibility, determinant surjectivity, containment in the declared
// class, and exact agreement between the factored and expanded j values.
struct ExternalImageRecord {
  std::string label;
  uint32_t ell = 0;
  Modulus level{2};
  ImageClass image_class = ImageClass::Borel;
  JInvariant j;
  Subgroup group;  // closed from the record's generators
  std::string source;
};

// Parse and validate a JSON image table (schema: array of records; see the
// shipped data file for a worked example). Errors are reported with the
// record index and label. `origin` names the source in error messages.
std::vector<ExternalImageRecord> parse_image_table(const nlohmann::json& doc,
                                                   const std::string& origin);

std::vector<ExternalImageRecord> load_image_table(const std::string& path);

nlohmann::json image_table_to_json(
    const std::vector<ExternalImageRecord>& records);

// The bundled table: the two level-17 and two level-37 Borel images and the
// three level-13 exceptional j-invariants (sharing one image), with sources.
const std::vector<ExternalImageRecord>& builtin_image_table();
// its JSON text, the same document shipped under data/image_tables/
const std::string& builtin_image_table_text();

}  // namespace isopoint
