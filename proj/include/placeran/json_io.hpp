// File formats.  Topology: JSON with nodes[], links[], metadata{} (bps for
// capacity, seconds for latency, reference cores for proc_capacity).
// Catalog: JSON with drcs[] and vnf_demands{}; unknown DRC ids are rejected.
// Serialization is canonical: fixed key order, so parse-then-serialize is
// the identity on canonical files.

#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "placeran/domain.hpp"

namespace placeran {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json topology_to_json(const Topology& topology);
Topology topology_from_json(const Json& j);

Json catalog_to_json(const DrcCatalog& catalog);
DrcCatalog catalog_from_json(const Json& j);

// Read/write helpers; write_text is atomic-ish (write then rename not
// required here, plain overwrite) and always ends with a newline.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

Topology load_topology(const std::string& path);
void save_topology(const Topology& topology, const std::string& path);
DrcCatalog load_catalog(const std::string& path);
void save_catalog(const DrcCatalog& catalog, const std::string& path);

// The nine industry DRCs plus default per-VNF compute demands.  Numeric
// bandwidth/latency/priority values mirror catalog/default.json; the file
// is the editable source of truth, this is the built-in fallback.
DrcCatalog builtin_default_catalog();

}  // namespace placeran
