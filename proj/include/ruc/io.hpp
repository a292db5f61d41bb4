#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ruc/admissibility.hpp"
#include "ruc/cellspec.hpp"
#include "ruc/fem.hpp"
#include "ruc/mesh.hpp"
#include "ruc/pairing.hpp"

namespace ruc {

using Json = nlohmann::ordered_json;

// Cell spec file:
// { "dim": 2|3, "bbox": [[min,max],...], "kind": "UC"|"OrUC"|"rUC",
//   "periodicity": [[..],..],
//   "relations": [{ "label": "E1", "T": [[..]], "offset": [..],
//                   "source": {"x": v | [lo,hi], "y": ..., "z": ...} }],
//   "free": [{"y": v, "x": [lo,hi]}] }        (optional; traction-free patches)
Json spec_to_json(const CellSpec& spec);
CellSpec spec_from_json(const Json& j);

// Mesh file: { "dim": 2|3, "nodes": [[x,y(,z)],...],
//              "elements": [[n0..n3|n0..n7],...], "materials": [tag,...] }
Json mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const Json& j);

// Material file: { "materials": { "1": {"E":..., "nu":...} | {"C": [[...]]} } }
Json materials_to_json(const MaterialSet& materials);
MaterialSet materials_from_json(const Json& j);

// Load file: { "macro_strain_voigt": [e11,e22,(e33),(2e23),(2e13),2e12] }
Json load_to_json(Dim dim, const MacroStrain& eps);
MacroStrain load_from_json(const Json& j, Dim dim);

Json validation_report_to_json(const ValidationReport& report);
Json gamma_assignment_to_json(const CellSpec& spec, const GammaAssignment& g);
Json load_cases_to_json(const CellSpec& spec, const std::vector<LoadCase>& cases);
Json pairs_to_json(const CellSpec& spec, const ResolvedPairing& pairing, const Mesh& mesh);
Json solution_to_json(const FieldSolution& sol, bool include_fields);
Json stiffness_to_json(const HomogenizedStiffness& h, Dim dim);
Json equivalence_report_to_json(const EquivalenceReport& report);

std::string gauss_csv(const FieldSolution& sol);

// file helpers
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& payload);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace ruc
