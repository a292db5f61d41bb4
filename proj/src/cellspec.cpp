#include "ruc/cellspec.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ruc/mesh.hpp"

namespace ruc {

std::string to_string(CellKind k) {
    switch (k) {
        case CellKind::UC: return "UC";
        case CellKind::OrUC: return "OrUC";
        case CellKind::rUC: return "rUC";
    }
    return "rUC";
}

CellKind cell_kind_from_string(const std::string& s) {
    if (s == "UC") return CellKind::UC;
    if (s == "OrUC") return CellKind::OrUC;
    if (s == "rUC") return CellKind::rUC;
    throw Error("InvalidSpec", s, "unknown cell kind '" + s + "'");
}

Matrix material_stiffness(const Material& m, Dim dim, PlaneKind plane) {
    const int vs = voigt_size(dim);
    if (m.stiffness_voigt) {
        if (m.stiffness_voigt->rows() != vs || m.stiffness_voigt->cols() != vs)
            throw Error("InvalidMaterial", "stiffness", "stiffness matrix has the wrong size");
        return *m.stiffness_voigt;
    }
    if (!m.E || !m.nu) throw Error("InvalidMaterial", "material", "E and nu required");
    const double E = *m.E, nu = *m.nu;
    if (E <= 0.0 || nu <= -1.0 || nu >= 0.5)
        throw Error("InvalidMaterial", "material", "isotropic constants out of range");
    if (dim == Dim::three) {
        const double lam = E * nu / ((1 + nu) * (1 - 2 * nu));
        const double mu = E / (2 * (1 + nu));
        Matrix C = Matrix::Zero(6, 6);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) C(i, j) = lam;
            C(i, i) = lam + 2 * mu;
            C(3 + i, 3 + i) = mu;
        }
        return C;
    }
    Matrix C = Matrix::Zero(3, 3);
    if (plane == PlaneKind::stress) {
        const double f = E / (1 - nu * nu);
        C(0, 0) = C(1, 1) = f;
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1 - nu) / 2;
    } else {
        const double f = E / ((1 + nu) * (1 - 2 * nu));
        C(0, 0) = C(1, 1) = f * (1 - nu);
        C(0, 1) = C(1, 0) = f * nu;
        C(2, 2) = f * (1 - 2 * nu) / 2;
    }
    return C;
}

double CellSpec::bbox_diagonal() const {
    double s = 0.0;
    for (const auto& b : bbox) s += b.extent() * b.extent();
    return std::sqrt(s);
}

Vector CellSpec::bbox_center() const {
    Vector c(dim_value(dim));
    for (int i = 0; i < dim_value(dim); ++i) c[i] = 0.5 * (bbox[i].min + bbox[i].max);
    return c;
}

const EquivalenceRelation& CellSpec::relation(const std::string& label) const {
    for (const auto& r : relations)
        if (r.label == label) return r;
    throw Error("UnknownRelation", label, "no relation labelled '" + label + "'");
}

bool ValidationReport::ok() const {
    return std::none_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
        return i.severity == ValidationIssue::Severity::error;
    });
}

std::vector<const ValidationIssue*> ValidationReport::errors() const {
    std::vector<const ValidationIssue*> out;
    for (const auto& i : issues)
        if (i.severity == ValidationIssue::Severity::error) out.push_back(&i);
    return out;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (issues.empty()) {
        os << "valid, full coverage";
        return os.str();
    }
    for (const auto& i : issues) {
        os << (i.severity == ValidationIssue::Severity::error ? "error" : "warning") << " ["
           << i.code << "] " << i.entity << ": " << i.message << "\n";
    }
    return os.str();
}

namespace {

std::string facet_name(int axis, bool max_side) {
    static const char* names = "xyz";
    return std::string(1, names[axis]) + (max_side ? "+" : "-");
}

// True when `x` is reachable from the relations: inside a source region or
// inside the image of one.
bool point_covered(const CellSpec& spec, const Vector& x, double tol) {
    for (const auto& rel : spec.relations) {
        if (rel.source_region.contains(x, tol)) return true;
        if (rel.source_region.contains(inverse_map(rel, x), tol)) return true;
    }
    return false;
}

bool in_free_region(const CellSpec& spec, const Vector& x, double tol) {
    for (const auto& region : spec.free_regions)
        if (region.contains(x, tol)) return true;
    return false;
}

// Facets orthogonal to every periodicity vector carry free surfaces of the
// structure (no periodic continuation), so coverage is not required there.
bool facet_is_periodic(const CellSpec& spec, int axis, double tol) {
    for (const auto& d : spec.periodicity)
        if (std::abs(d[axis]) > tol) return true;
    return spec.periodicity.empty();  // no lattice given: check everything
}

constexpr int kFacetSamples = 17;

// Consistency of the relation set as a whole: the group generated by the
// relation maps must not contain an element that is almost the identity but
// not the identity. A perturbed offset shows up as a forbidden tiny
// translation (two relations then send shared points to images that are not
// equivalent under the rest of the spec); a healthy spec only produces
// lattice translations and exact point-group elements.
struct GroupDefect {
    std::vector<std::string> chain;
    double translation;
};

std::optional<GroupDefect> relation_group_defect(const CellSpec& spec, double tol) {
    const int d = dim_value(spec.dim);
    const double diag = spec.bbox_diagonal();
    double min_extent = spec.bbox[0].extent();
    for (const auto& b : spec.bbox) min_extent = std::min(min_extent, b.extent());

    struct Element {
        IsometryMap map;
        std::vector<std::string> chain;
    };
    auto key_of = [&](const IsometryMap& m) {
        std::ostringstream os;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << std::llround(m.T.matrix()(i, j) * 1e8) << ",";
        for (int i = 0; i < d; ++i)
            os << std::llround(m.offset[i] / (1e-3 * min_extent)) << ",";
        return os.str();
    };

    std::vector<Element> group{{IsometryMap::identity(spec.dim), {}}};
    std::set<std::string> seen{key_of(group[0].map)};
    size_t cursor = 0;
    const size_t cap = 4096;
    while (cursor < group.size() && group.size() < cap) {
        const Element current = group[cursor++];
        for (const auto& rel : spec.relations) {
            const IsometryMap fwd{rel.T, rel.offset};
            for (int dir = 0; dir < 2; ++dir) {
                Element next;
                next.map = IsometryMap::compose(dir ? fwd.inverse() : fwd, current.map);
                if (next.map.offset.norm() > 2.5 * diag) continue;
                const std::string key = key_of(next.map);
                if (seen.count(key)) continue;
                seen.insert(key);
                next.chain = current.chain;
                next.chain.push_back((dir ? "~" : "") + rel.label);
                const double shift = next.map.offset.norm();
                const bool near_identity_T =
                    max_abs_diff(next.map.T.matrix(), Matrix::Identity(d, d)) <= 1e-9;
                const bool tiny_T_defect =
                    !near_identity_T &&
                    max_abs_diff(next.map.T.matrix(), Matrix::Identity(d, d)) < 0.1;
                if (tiny_T_defect || (near_identity_T && shift > tol && shift < 0.2 * min_extent))
                    return GroupDefect{next.chain, shift};
                group.push_back(std::move(next));
            }
        }
    }
    return std::nullopt;
}

}  // namespace

ValidationReport validate(const CellSpec& spec, const Mesh* mesh) {
    ValidationReport report;
    const int d = dim_value(spec.dim);
    const double diag = spec.bbox_diagonal();
    const double geom_tol = 1e-9 * diag;

    if (static_cast<int>(spec.bbox.size()) != d) {
        report.issues.push_back({ValidationIssue::Severity::error, "InvalidBBox", "bbox",
                                 "bounding box does not match the dimension"});
        return report;
    }
    for (int a = 0; a < d; ++a) {
        if (spec.bbox[a].extent() <= 0.0)
            report.issues.push_back({ValidationIssue::Severity::error, "InvalidBBox",
                                     facet_name(a, true), "degenerate extent on axis"});
    }

    // Per-relation checks.
    for (const auto& rel : spec.relations) {
        if (rel.T.dim() != d || rel.offset.size() != d || rel.source_region.dim() != d) {
            report.issues.push_back(
                {ValidationIssue::Severity::error, "DimensionMismatch", rel.label,
                 "transform, offset or source region has the wrong dimension"});
            continue;
        }
        const double defect = rel.T.orthogonality_defect();
        if (defect > Tol::orthogonality)
            report.issues.push_back({ValidationIssue::Severity::error, "Orthogonality", rel.label,
                                     "T^t T deviates from identity by " + std::to_string(defect)});
        const double det = rel.T.det();
        if (std::abs(std::abs(det) - 1.0) > Tol::orthogonality)
            report.issues.push_back({ValidationIssue::Severity::error, "Determinant", rel.label,
                                     "det(T) = " + std::to_string(det)});
        if (!rel.offset.allFinite())
            report.issues.push_back({ValidationIssue::Severity::error, "Offset", rel.label,
                                     "offset is not finite"});
        // source region inside the box and on its boundary
        bool on_boundary = false;
        for (int a = 0; a < d; ++a) {
            const auto& ax = rel.source_region.axes()[a];
            if (ax.lo < spec.bbox[a].min - geom_tol || ax.hi > spec.bbox[a].max + geom_tol)
                report.issues.push_back({ValidationIssue::Severity::error, "Region", rel.label,
                                         "source region exceeds the bounding box"});
            if (ax.fixed() && (std::abs(ax.lo - spec.bbox[a].min) <= geom_tol ||
                               std::abs(ax.lo - spec.bbox[a].max) <= geom_tol))
                on_boundary = true;
        }
        if (!on_boundary)
            report.issues.push_back({ValidationIssue::Severity::error, "Region", rel.label,
                                     "source region does not lie on a boundary facet"});
    }
    if (!report.ok()) return report;

    // Kind-specific structure.
    if (spec.kind == CellKind::UC || spec.kind == CellKind::OrUC) {
        for (const auto& rel : spec.relations) {
            if (!rel.T.is_identity())
                report.issues.push_back({ValidationIssue::Severity::error, "Kind", rel.label,
                                         "kind " + to_string(spec.kind) +
                                             " requires parallel frames (T = I)"});
        }
    }
    if (spec.kind == CellKind::UC) {
        for (const auto& rel : spec.relations) {
            bool matches = false;
            for (const auto& dk : spec.periodicity)
                if ((rel.offset - dk).norm() <= geom_tol || (rel.offset + dk).norm() <= geom_tol)
                    matches = true;
            if (!matches)
                report.issues.push_back({ValidationIssue::Severity::error, "Kind", rel.label,
                                         "UC offsets must equal a periodicity vector"});
        }
    }

    // Coverage: deterministic sample grid per periodic facet. A sample is
    // fine if some relation reaches it (as source or image) or it was
    // declared free.
    const double cover_tol = 1e-9 * diag;
    for (int axis = 0; axis < d; ++axis) {
        if (!facet_is_periodic(spec, axis, cover_tol)) continue;
        for (bool max_side : {false, true}) {
            const double value = max_side ? spec.bbox[axis].max : spec.bbox[axis].min;
            int uncovered = 0;
            Vector witness;
            const int nu = kFacetSamples;
            const int nv = (d == 3) ? kFacetSamples : 1;
            for (int iu = 0; iu < nu; ++iu) {
                for (int iv = 0; iv < nv; ++iv) {
                    Vector x(d);
                    x[axis] = value;
                    int free_axis = 0;
                    for (int a = 0; a < d; ++a) {
                        if (a == axis) continue;
                        const double t = (free_axis == 0 ? iu : iv) / double(kFacetSamples - 1);
                        x[a] = spec.bbox[a].min + t * spec.bbox[a].extent();
                        ++free_axis;
                    }
                    if (in_free_region(spec, x, cover_tol)) continue;
                    if (!point_covered(spec, x, cover_tol)) {
                        if (uncovered == 0) witness = x;
                        ++uncovered;
                    }
                }
            }
            if (uncovered > 0) {
                std::ostringstream os;
                os << "facet " << facet_name(axis, max_side) << " has " << uncovered << "/"
                   << nu * nv << " sample points not reached by any relation (first at";
                for (int a = 0; a < d; ++a) os << " " << witness[a];
                os << ")";
                report.issues.push_back({ValidationIssue::Severity::error, "UncoveredFacet",
                                         facet_name(axis, max_side), os.str()});
            }
        }
    }

    // Consistency of the whole relation set: shared points must map to
    // mutually equivalent images, which holds exactly when the generated
    // group is free of near-identity defects.
    const double consist_tol = Tol::consistency * diag;
    if (const auto defect = relation_group_defect(spec, consist_tol)) {
        std::ostringstream os;
        os << "relation chain";
        for (const auto& label : defect->chain) os << " " << label;
        os << " composes to a forbidden small translation of length " << defect->translation
           << "; the relations map shared points to inequivalent images";
        std::string entity;
        for (const auto& label : defect->chain) entity += (entity.empty() ? "" : "/") + label;
        report.issues.push_back(
            {ValidationIssue::Severity::error, "Consistency", entity, os.str()});
    }

    // Mesh-aware coverage: every mesh boundary node sitting on a periodic,
    // non-free facet must be reachable by some relation.
    if (mesh) {
        const double node_tol = Tol::pairing * diag;
        for (int nid : mesh->boundary_nodes()) {
            const Vector& x = mesh->node(nid);
            bool on_checked_facet = false;
            for (int axis = 0; axis < d && !on_checked_facet; ++axis) {
                if (!facet_is_periodic(spec, axis, cover_tol)) continue;
                if (std::abs(x[axis] - spec.bbox[axis].min) <= node_tol ||
                    std::abs(x[axis] - spec.bbox[axis].max) <= node_tol)
                    on_checked_facet = true;
            }
            if (!on_checked_facet) continue;
            if (in_free_region(spec, x, node_tol)) continue;
            if (!point_covered(spec, x, node_tol)) {
                report.issues.push_back({ValidationIssue::Severity::error, "UncoveredNode",
                                         "node " + std::to_string(nid),
                                         "boundary node " + std::to_string(nid) +
                                             " on a periodic facet is reached by no relation"});
            }
        }
    }

    return report;
}

CellSpec classical_uc_spec(Dim dim, const std::vector<AxisBounds>& bbox,
                           const std::vector<Vector>& periodicity) {
    const int d = dim_value(dim);
    if (static_cast<int>(bbox.size()) != d)
        throw Error("InvalidSpec", "bbox", "bounding box does not match the dimension");
    if (periodicity.empty())
        throw Error("DegenerateVectors", "periodicity", "at least one periodicity vector required");
    Matrix dmat(d, static_cast<int>(periodicity.size()));
    for (size_t k = 0; k < periodicity.size(); ++k) {
        if (periodicity[k].size() != d)
            throw Error("DegenerateVectors", "periodicity", "vector dimension mismatch");
        dmat.col(static_cast<int>(k)) = periodicity[k];
    }
    if (Eigen::FullPivLU<Matrix>(dmat).rank() < static_cast<int>(periodicity.size()))
        throw Error("DegenerateVectors", "periodicity",
                    "periodicity vectors are linearly dependent");

    CellSpec spec;
    spec.dim = dim;
    spec.bbox = bbox;
    spec.periodicity = periodicity;

    double diag = 0.0;
    for (const auto& b : bbox) diag += b.extent() * b.extent();
    diag = std::sqrt(diag);
    const double tol = 1e-9 * diag;

    bool oblique = false;
    for (const auto& dk : periodicity) {
        int nonzero = 0;
        for (int a = 0; a < d; ++a)
            if (std::abs(dk[a]) > tol) ++nonzero;
        if (nonzero > 1) oblique = true;
    }
    spec.kind = oblique ? CellKind::OrUC : CellKind::UC;

    const int m = static_cast<int>(periodicity.size());
    for (int k = 0; k < m; ++k) {
        const Vector& dk = periodicity[k];
        // primary axis: the one along which the vector spans the whole box
        int axis = -1;
        for (int a = 0; a < d; ++a) {
            if (std::abs(std::abs(dk[a]) - bbox[a].extent()) > tol) continue;
            if (axis < 0 || std::abs(dk[a]) > std::abs(dk[axis])) axis = a;
        }
        if (axis < 0)
            throw Error("DegenerateVectors", "d" + std::to_string(k + 1),
                        "vector does not connect opposite facets of the box");
        const bool from_max = dk[axis] > 0;
        const double facet_value = from_max ? bbox[axis].max : bbox[axis].min;

        // Wrap the source facet through neighbouring lattice combinations so
        // every image stays inside the box.
        std::vector<int> combo(m, 0);
        std::function<void(int)> emit = [&](int pos) {
            if (pos == m) {
                Vector offset = dk;
                std::string suffix;
                for (int j = 0; j < m; ++j) {
                    if (j == k || combo[j] == 0) continue;
                    offset += combo[j] * periodicity[j];
                    suffix += (combo[j] > 0 ? "+" : "-") + std::to_string(j + 1);
                }
                if (std::abs(std::abs(offset[axis]) - bbox[axis].extent()) > tol) return;
                if ((offset[axis] > 0) != from_max) return;
                // image interval per remaining axis must overlap the box
                std::vector<BoundaryRegion::Axis> axes(d);
                for (int a = 0; a < d; ++a) {
                    if (a == axis) {
                        axes[a] = {facet_value, facet_value};
                        continue;
                    }
                    const double lo = std::max(bbox[a].min, bbox[a].min + offset[a]);
                    const double hi = std::min(bbox[a].max, bbox[a].max + offset[a]);
                    if (hi - lo <= tol) return;
                    axes[a] = {lo, hi};
                }
                EquivalenceRelation rel;
                rel.label = "E" + std::to_string(k + 1) + suffix;
                rel.T = Transform::identity(dim);
                rel.offset = offset;
                rel.source_region = BoundaryRegion(std::move(axes));
                spec.relations.push_back(std::move(rel));
                return;
            }
            if (pos == k) {
                emit(pos + 1);
                return;
            }
            for (int v : {0, -1, 1}) {
                combo[pos] = v;
                emit(pos + 1);
            }
            combo[pos] = 0;
        };
        emit(0);
    }

    // Deterministic order: by label.
    std::sort(spec.relations.begin(), spec.relations.end(),
              [](const EquivalenceRelation& a, const EquivalenceRelation& b) {
                  return a.label < b.label;
              });
    return spec;
}

}  // namespace ruc
