#pragma once

#include <string>

#include <json.hpp>

#include "glue/ringed.hpp"
#include "glue/sheafglue.hpp"
#include "glue/topglue.hpp"

// JSON reading and writing.  Parse errors are InvalidInput whose message starts
// with the JSON pointer of the offending value, e.g. "/overlaps/0/space: ...".
namespace glue::io {

using nlohmann::json;

// "0,2" <-> {0,2}; "" is the empty set.
std::string open_key(PointSet s);
PointSet parse_open_key(const std::string& key, const std::string& where);

json space_to_json(const FinSpace& x);
FinSpace space_from_json(const json& j, const std::string& where = "");

json group_to_json(const FgAbGroup& g);
FgAbGroup group_from_json(const json& j, const std::string& where = "");
json matrix_to_json(const Matrix& m);  // list of rows
Matrix matrix_from_json(const json& j, int rows, int cols, const std::string& where = "");

json presheaf_to_json(const Presheaf& f);

json ring_to_json(const FinCommRing& r);
FinCommRing ring_from_json(const json& j, const std::string& where = "");

struct GluingDocument {
  std::string kind;     // "top" | "sheaf" | "ringed"
  std::string variant;  // "top" | "otop" | "sheaf" | "presheaf" | "rts" | "lrts" | "sch"
  json payload;
  TopGluingData top;
  SheafGluingData sheaf;
  RingedGluingData ringed;
};

// Schema and referential checks only; gluing conditions are checked by the pipeline.
GluingDocument parse_document_json(const json& j);
GluingDocument parse_document(const std::string& path);

json top_data_to_json(const TopGluingData& d);
json sheaf_data_to_json(const SheafGluingData& d);
json ringed_data_to_json(const RingedGluingData& d);

// Stable text form: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace glue::io
