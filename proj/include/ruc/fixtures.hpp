#pragma once

#include <string>

#include "ruc/cellspec.hpp"
#include "ruc/mesh.hpp"

namespace ruc::fixtures {

/// 3D woven composite reduced cell (six adjacent sub-domains, box w x l x t
/// with w=2, l=4, t=1, centered frame). In-plane periodic, free thickness
/// faces: the cell is a plate, so through-thickness macro strain cannot be
/// prescribed on it.
CellSpec woven3d_spec();
/// Same cell made fully periodic by a seventh identity relation pairing the
/// thickness faces. Every unit macro strain is then realizable; used by the
/// solve-based checks.
CellSpec woven3d_periodic_spec();
Mesh woven3d_mesh(int refine = 1);
MaterialSet woven3d_materials();

/// Honeycomb reduced cell (three adjacent sub-domains, box w x l with w=1,
/// l=2). The cell holds half a vertical wall on its left edge, an inclined
/// wall cut by the right edge at its midpoint, and a free top edge.
CellSpec honeycomb_spec();
Mesh honeycomb_ruc_mesh(int refine = 1);
/// Full cell: eight transformed copies of the reduced cell, classical PBC.
CellSpec honeycomb_uc_spec();
Mesh honeycomb_uc_mesh(int refine = 1);
MaterialSet honeycomb_materials();

/// Two-phase checkerboard: full cell 2x2 squares, reduced cell = offset
/// half cell (non-orthogonal translation, all T = I).
CellSpec checkerboard_ruc_spec();
Mesh checkerboard_ruc_mesh(int refine = 1);
CellSpec checkerboard_uc_spec();
Mesh checkerboard_uc_mesh(int refine = 1);
MaterialSet checkerboard_materials();

/// Writes every bundled spec, mesh, material set and two example loads into
/// `dir`. Returns the list of files written.
std::vector<std::string> write_all(const std::string& dir);

}  // namespace ruc::fixtures
