#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ripshom/filtration.hpp"
#include "ripshom/invariants.hpp"
#include "ripshom/stability.hpp"
#include "ripshom/systems.hpp"

namespace ripshom {

// Key order is preserved so identical inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

// Point clouds: CSV (one point per row, numeric columns) or JSON
// {"points": [[...], ...]}. Distance matrices: JSON
// {"labels": [...], "dist": [[...], ...]}. Dispatch is by content for
// .json files and by extension otherwise.
MetricPoints load_points(const std::filesystem::path& path, double tol = kDefaultTol);

MetricPoints points_from_json(const Json& doc, double tol = kDefaultTol);
MetricPoints points_from_csv(const std::string& text);

Json complex_to_json(const BifilteredComplex& complex);

Json certificate_to_json(const InterleavingCertificate& cert);

Json abelian_to_json(const AbelianInvariants& inv);

Json set_system_to_json(const SetSystem& sys);
SetSystem set_system_from_json(const Json& doc);
SetSystemMap set_system_map_from_json(const Json& doc);
Json vec_system_to_json(const VecSystem& sys);
VecSystem vec_system_from_json(const Json& doc);
VecSystemMap vec_system_map_from_json(const Json& doc);
Json verdict_to_json(const RIsoVerdict& verdict, double r);

// Writes via a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace ripshom
