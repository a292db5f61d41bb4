#include "ruc/fixtures.hpp"

#include <cmath>

#include "ruc/admissibility.hpp"
#include "ruc/io.hpp"

namespace ruc::fixtures {

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Matrix diag3(double a, double b, double c) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Vector vec3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}

BoundaryRegion region2(BoundaryRegion::Axis x, BoundaryRegion::Axis y) {
    return BoundaryRegion({x, y});
}

BoundaryRegion region3(BoundaryRegion::Axis x, BoundaryRegion::Axis y, BoundaryRegion::Axis z) {
    return BoundaryRegion({x, y, z});
}

// honeycomb geometry parameters (reduced-cell frame)
constexpr double kWallThickness = 0.2;
const double kArmCut = 0.1 * std::sqrt(1.16);  // half-length of the inclined wall cut

}  // namespace

CellSpec woven3d_spec() {
    const double w = 2.0, l = 4.0, t = 1.0;
    CellSpec spec;
    spec.dim = Dim::three;
    spec.bbox = {{-w / 2, w / 2}, {-l / 2, l / 2}, {-t / 2, t / 2}};
    spec.kind = CellKind::rUC;
    spec.periodicity = {vec3(2 * w, 0, 0), vec3(0, 2 * l, 0)};

    const BoundaryRegion::Axis z_full{-t / 2, t / 2};
    auto add = [&](const std::string& label, Matrix T, Vector offset, BoundaryRegion region) {
        EquivalenceRelation rel;
        rel.label = label;
        rel.T = Transform(std::move(T));
        rel.offset = std::move(offset);
        rel.source_region = std::move(region);
        spec.relations.push_back(std::move(rel));
    };

    add("E1", diag3(-1, -1, -1), vec3(w, -l / 2, 0),
        region3({w / 2, w / 2}, {-l / 2, 0}, z_full));
    add("E2", diag3(1, 1, 1), vec3(w, l / 2, 0), region3({w / 2, w / 2}, {0, l / 2}, z_full));
    add("E3", diag3(-1, -1, 1), vec3(0, l, 0), region3({-w / 2, w / 2}, {l / 2, l / 2}, z_full));
    add("E4", diag3(-1, -1, 1), vec3(-w, l / 2, 0),
        region3({-w / 2, -w / 2}, {0, l / 2}, z_full));
    add("E5", diag3(1, 1, 1), vec3(-w, -l / 2, 0),
        region3({-w / 2, -w / 2}, {-l / 2, 0}, z_full));
    add("E6", diag3(-1, -1, -1), vec3(0, -l, 0),
        region3({-w / 2, w / 2}, {-l / 2, -l / 2}, z_full));
    return spec;
}

CellSpec woven3d_periodic_spec() {
    const double w = 2.0, l = 4.0, t = 1.0;
    CellSpec spec = woven3d_spec();
    spec.periodicity.push_back(vec3(0, 0, t));
    EquivalenceRelation rel;
    rel.label = "E7";
    rel.T = Transform::identity(Dim::three);
    rel.offset = vec3(0, 0, t);
    rel.source_region = region3({-w / 2, w / 2}, {-l / 2, l / 2}, {t / 2, t / 2});
    spec.relations.push_back(std::move(rel));
    return spec;
}

Mesh woven3d_mesh(int refine) {
    const auto spec = woven3d_spec();
    return structured_mesh(Dim::three, spec.bbox, {4 * refine, 8 * refine, 4 * refine},
                           [](const Vector&) { return 1; });
}

MaterialSet woven3d_materials() {
    Material m;
    m.E = 10.0;
    m.nu = 0.3;
    return {{1, m}};
}

CellSpec honeycomb_spec() {
    const double w = 1.0, l = 2.0;
    CellSpec spec;
    spec.dim = Dim::two;
    spec.bbox = {{-w / 2, w / 2}, {-l / 2, l / 2}};
    spec.kind = CellKind::rUC;
    spec.periodicity = {vec2(4 * w, 0), vec2(0, 2 * l)};

    auto add = [&](const std::string& label, Matrix T, Vector offset, BoundaryRegion region) {
        EquivalenceRelation rel;
        rel.label = label;
        rel.T = Transform(std::move(T));
        rel.offset = std::move(offset);
        rel.source_region = std::move(region);
        spec.relations.push_back(std::move(rel));
    };

    add("E1", diag2(-1, -1), vec2(w, 0), region2({w / 2, w / 2}, {-l / 2, l / 2}));
    add("E2", diag2(-1, 1), vec2(-w, 0), region2({-w / 2, -w / 2}, {-l / 2, l / 2}));
    add("E3", diag2(1, -1), vec2(0, -l), region2({-w / 2, w / 2}, {-l / 2, -l / 2}));

    // nothing continues across the top edge: the wall network stays clear of
    // it inside this cell
    spec.free_regions = {region2({-w / 2, w / 2}, {l / 2, l / 2})};
    return spec;
}

Mesh honeycomb_ruc_mesh(int refine) {
    // Half a vertical wall along the left edge, one inclined wall from the
    // junction at (-0.5,-0.4) to the cut at the right-edge midpoint (0.5,0),
    // and a transition block that miters the junction.
    const double c = kArmCut;
    const int k = refine;

    QuadBlock wall;
    wall.corners << -0.5, -1.0,  //
        -0.4, -1.0,              //
        -0.4, -0.4 - c + 0.04,   //
        -0.5, -0.4 - c;
    wall.n0 = 2 * k;
    wall.n1 = 6 * k;
    wall.material = 1;

    QuadBlock arm;
    arm.corners << -0.5, -0.4 - c,  //
        0.5, -c,                    //
        0.5, c,                     //
        -0.5, -0.4 + c;
    arm.n0 = 20 * k;
    arm.n1 = 2 * k;
    arm.material = 1;

    return mesh_from_blocks({wall, arm}, 1e-9);
}

CellSpec honeycomb_uc_spec() {
    return classical_uc_spec(Dim::two, {{-1.5, 2.5}, {-3.0, 1.0}},
                             {vec2(4, 0), vec2(0, 4)});
}

Mesh honeycomb_uc_mesh(int refine) {
    const Mesh ruc = honeycomb_ruc_mesh(refine);
    const auto spec = honeycomb_spec();
    const IsometryMap id = IsometryMap::identity(Dim::two);
    const IsometryMap p1{spec.relations[0].T, spec.relations[0].offset};  // point reflection
    const IsometryMap p2{spec.relations[1].T, spec.relations[1].offset};  // mirror x=-1/2
    const IsometryMap p3{spec.relations[2].T, spec.relations[2].offset};  // mirror y=-1
    const IsometryMap p12 = IsometryMap::compose(p1, p2);

    std::vector<IsometryMap> copies = {id, p1, p2, p12};
    const size_t base = copies.size();
    for (size_t i = 0; i < base; ++i) copies.push_back(IsometryMap::compose(p3, copies[i]));
    return merge_transformed_copies(ruc, copies, 1e-9);
}

MaterialSet honeycomb_materials() {
    Material m;
    m.E = 70.0;
    m.nu = 0.33;
    return {{1, m}};
}

namespace {

int checker_tag(const Vector& center) {
    const long long ix = static_cast<long long>(std::floor(center[0]));
    const long long iy = static_cast<long long>(std::floor(center[1]));
    return ((ix + iy) % 2 + 2) % 2 == 0 ? 1 : 2;
}

}  // namespace

CellSpec checkerboard_ruc_spec() {
    return classical_uc_spec(Dim::two, {{-0.5, 0.5}, {-1.0, 1.0}}, {vec2(1, 1), vec2(0, 2)});
}

Mesh checkerboard_ruc_mesh(int refine) {
    return structured_mesh(Dim::two, {{-0.5, 0.5}, {-1.0, 1.0}}, {4 * refine, 8 * refine},
                           checker_tag);
}

CellSpec checkerboard_uc_spec() {
    return classical_uc_spec(Dim::two, {{-1.0, 1.0}, {-1.0, 1.0}}, {vec2(2, 0), vec2(0, 2)});
}

Mesh checkerboard_uc_mesh(int refine) {
    return structured_mesh(Dim::two, {{-1.0, 1.0}, {-1.0, 1.0}}, {8 * refine, 8 * refine},
                           checker_tag);
}

MaterialSet checkerboard_materials() {
    Material soft, stiff;
    soft.E = 1.0;
    soft.nu = 0.3;
    stiff.E = 10.0;
    stiff.nu = 0.3;
    return {{1, soft}, {2, stiff}};
}

std::vector<std::string> write_all(const std::string& dir) {
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const Json& payload) {
        const std::string path = dir.empty() ? name : dir + "/" + name;
        write_json_file(path, payload);
        written.push_back(path);
    };

    put("woven3d.json", spec_to_json(woven3d_spec()));
    put("woven3d_periodic.json", spec_to_json(woven3d_periodic_spec()));
    put("woven3d_mesh.json", mesh_to_json(woven3d_mesh()));
    put("woven3d_materials.json", materials_to_json(woven3d_materials()));

    put("honeycomb.json", spec_to_json(honeycomb_spec()));
    put("honeycomb_mesh.json", mesh_to_json(honeycomb_ruc_mesh()));
    put("honeycomb_uc.json", spec_to_json(honeycomb_uc_spec()));
    put("honeycomb_uc_mesh.json", mesh_to_json(honeycomb_uc_mesh()));
    put("honeycomb_materials.json", materials_to_json(honeycomb_materials()));

    put("checkerboard_ruc.json", spec_to_json(checkerboard_ruc_spec()));
    put("checkerboard_ruc_mesh.json", mesh_to_json(checkerboard_ruc_mesh()));
    put("checkerboard_uc.json", spec_to_json(checkerboard_uc_spec()));
    put("checkerboard_uc_mesh.json", mesh_to_json(checkerboard_uc_mesh()));
    put("checkerboard_materials.json", materials_to_json(checkerboard_materials()));

    Vector e11 = Vector::Zero(3);
    e11[0] = 0.01;
    put("load_e11_2d.json", load_to_json(Dim::two, MacroStrain::from_voigt(Dim::two, e11)));
    Vector shear = Vector::Zero(3);
    shear[2] = 0.02;  // engineering shear
    put("load_shear_2d.json", load_to_json(Dim::two, MacroStrain::from_voigt(Dim::two, shear)));
    Vector e13 = Vector::Zero(6);
    e13[4] = 0.02;
    put("load_e13_3d.json", load_to_json(Dim::three, MacroStrain::from_voigt(Dim::three, e13)));
    return written;
}

}  // namespace ruc::fixtures
