#include "ruc/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "ruc/elements.hpp"

namespace ruc {

namespace {

// Facets of one element as local node index tuples: edges for Q4, quads
// for H8.
std::vector<std::vector<int>> element_facets(Dim dim) {
    if (dim == Dim::two) return {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    return {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
}

// Spatial hash for merging coincident nodes.
class NodeMerger {
  public:
    NodeMerger(int dim, double tol) : dim_(dim), tol_(tol), cell_(std::max(tol, 1e-300) * 4) {}

    // Returns the id of an existing node within tol, or inserts a new one.
    int insert(const Vector& x, std::vector<Vector>& nodes) {
        const auto key = cell_key(x);
        const int zrange = dim_ == 3 ? 1 : 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -zrange; dz <= zrange; ++dz) {
                    auto it = buckets_.find({key[0] + dx, key[1] + dy, key[2] + dz});
                    if (it == buckets_.end()) continue;
                    for (int id : it->second) {
                        if ((nodes[id] - x).norm() <= tol_) return id;
                    }
                }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(x);
        buckets_[key].push_back(id);
        return id;
    }

  private:
    std::array<long long, 3> cell_key(const Vector& x) const {
        std::array<long long, 3> k{0, 0, 0};
        for (int i = 0; i < dim_; ++i) k[i] = static_cast<long long>(std::floor(x[i] / cell_));
        return k;
    }

    struct KeyHash {
        size_t operator()(const std::array<long long, 3>& k) const {
            size_t h = 1469598103934665603ull;
            for (long long v : k) {
                h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    int dim_;
    double tol_;
    double cell_;
    std::unordered_map<std::array<long long, 3>, std::vector<int>, KeyHash> buckets_;
};

}  // namespace

Mesh::Mesh(Dim dim, std::vector<Vector> nodes, std::vector<std::vector<int>> elements,
           std::vector<int> material_tags)
    : dim_(dim),
      nodes_(std::move(nodes)),
      elements_(std::move(elements)),
      material_tags_(std::move(material_tags)) {
    const int npe = nodes_per_element();
    for (size_t e = 0; e < elements_.size(); ++e) {
        if (static_cast<int>(elements_[e].size()) != npe)
            throw Error("InvalidMesh", "element " + std::to_string(e),
                        "wrong node count for element " + std::to_string(e));
        for (int n : elements_[e])
            if (n < 0 || n >= n_nodes())
                throw Error("InvalidMesh", "element " + std::to_string(e),
                            "node index out of range in element " + std::to_string(e));
    }
    if (material_tags_.empty()) material_tags_.assign(elements_.size(), 1);
    if (material_tags_.size() != elements_.size())
        throw Error("InvalidMesh", "materials", "one material tag per element required");
}

const std::vector<int>& Mesh::boundary_nodes() const {
    if (boundary_valid_) return boundary_cache_;
    std::map<std::vector<int>, int> facet_count;
    const auto facets = element_facets(dim_);
    for (const auto& elem : elements_) {
        for (const auto& f : facets) {
            std::vector<int> key;
            key.reserve(f.size());
            for (int local : f) key.push_back(elem[local]);
            std::sort(key.begin(), key.end());
            facet_count[key]++;
        }
    }
    std::set<int> bnodes;
    for (const auto& [key, count] : facet_count) {
        if (count == 1) bnodes.insert(key.begin(), key.end());
    }
    boundary_cache_.assign(bnodes.begin(), bnodes.end());
    boundary_valid_ = true;
    return boundary_cache_;
}

std::vector<int> Mesh::incident_material_tags(int node) const {
    std::vector<int> tags;
    for (int e = 0; e < n_elements(); ++e) {
        if (std::find(elements_[e].begin(), elements_[e].end(), node) != elements_[e].end())
            tags.push_back(material_tags_[e]);
    }
    std::sort(tags.begin(), tags.end());
    return tags;
}

double Mesh::diagonal() const {
    if (nodes_.empty()) return 0.0;
    Vector lo = nodes_[0], hi = nodes_[0];
    for (const auto& x : nodes_) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    return (hi - lo).norm();
}

ValidationReport Mesh::validate(const CellSpec* spec) const {
    ValidationReport report;
    if (spec) {
        const double tol = 1e-9 * spec->bbox_diagonal();
        for (int i = 0; i < n_nodes(); ++i) {
            for (int a = 0; a < dim_value(dim_); ++a) {
                if (nodes_[i][a] < spec->bbox[a].min - tol || nodes_[i][a] > spec->bbox[a].max + tol) {
                    report.issues.push_back({ValidationIssue::Severity::error, "NodeOutsideBBox",
                                             "node " + std::to_string(i),
                                             "node " + std::to_string(i) + " lies outside the cell box"});
                    break;
                }
            }
        }
    }
    const auto rule = gauss_rule(dim_);
    const int npe = nodes_per_element();
    Matrix coords(npe, dim_value(dim_));
    for (int e = 0; e < n_elements(); ++e) {
        for (int a = 0; a < npe; ++a) coords.row(a) = nodes_[elements_[e][a]].transpose();
        for (const auto& gp : rule) {
            if (element_geometry(dim_, coords, gp.xi).det <= 0.0) {
                report.issues.push_back({ValidationIssue::Severity::error, "InvertedElement",
                                         "element " + std::to_string(e),
                                         "non-positive Jacobian in element " + std::to_string(e)});
                break;
            }
        }
    }
    return report;
}

Mesh structured_mesh(Dim dim, const std::vector<AxisBounds>& bbox,
                     const std::vector<int>& divisions,
                     const std::function<int(const Vector&)>& material) {
    const int d = dim_value(dim);
    if (static_cast<int>(bbox.size()) != d || static_cast<int>(divisions.size()) != d)
        throw Error("InvalidMesh", "grid", "bbox/divisions size must match the dimension");
    std::vector<int> n(divisions);
    for (int v : n)
        if (v < 1) throw Error("InvalidMesh", "grid", "divisions must be positive");

    std::vector<Vector> nodes;
    std::vector<std::vector<int>> elements;
    std::vector<int> tags;

    auto coord = [&](int axis, int i) {
        return bbox[axis].min + bbox[axis].extent() * static_cast<double>(i) / n[axis];
    };

    if (dim == Dim::two) {
        auto id = [&](int i, int j) { return i + (n[0] + 1) * j; };
        for (int j = 0; j <= n[1]; ++j)
            for (int i = 0; i <= n[0]; ++i) {
                Vector x(2);
                x << coord(0, i), coord(1, j);
                nodes.push_back(x);
            }
        for (int j = 0; j < n[1]; ++j)
            for (int i = 0; i < n[0]; ++i) {
                elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
                Vector c(2);
                c << 0.5 * (coord(0, i) + coord(0, i + 1)), 0.5 * (coord(1, j) + coord(1, j + 1));
                tags.push_back(material ? material(c) : 1);
            }
    } else {
        auto id = [&](int i, int j, int k) { return i + (n[0] + 1) * (j + (n[1] + 1) * k); };
        for (int k = 0; k <= n[2]; ++k)
            for (int j = 0; j <= n[1]; ++j)
                for (int i = 0; i <= n[0]; ++i) {
                    Vector x(3);
                    x << coord(0, i), coord(1, j), coord(2, k);
                    nodes.push_back(x);
                }
        for (int k = 0; k < n[2]; ++k)
            for (int j = 0; j < n[1]; ++j)
                for (int i = 0; i < n[0]; ++i) {
                    elements.push_back({id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k),
                                        id(i, j + 1, k), id(i, j, k + 1), id(i + 1, j, k + 1),
                                        id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)});
                    Vector c(3);
                    c << 0.5 * (coord(0, i) + coord(0, i + 1)),
                        0.5 * (coord(1, j) + coord(1, j + 1)),
                        0.5 * (coord(2, k) + coord(2, k + 1));
                    tags.push_back(material ? material(c) : 1);
                }
    }
    return Mesh(dim, std::move(nodes), std::move(elements), std::move(tags));
}

Mesh mesh_from_blocks(const std::vector<QuadBlock>& blocks, double merge_tol) {
    std::vector<Vector> nodes;
    std::vector<std::vector<int>> elements;
    std::vector<int> tags;
    NodeMerger merger(2, merge_tol);

    for (const auto& block : blocks) {
        const int n0 = block.n0, n1 = block.n1;
        // bilinear placement of grid nodes inside the block
        std::vector<int> ids((n0 + 1) * (n1 + 1));
        for (int j = 0; j <= n1; ++j) {
            for (int i = 0; i <= n0; ++i) {
                const double s = static_cast<double>(i) / n0;
                const double t = static_cast<double>(j) / n1;
                Eigen::RowVector2d p = (1 - s) * (1 - t) * block.corners.row(0) +
                                       s * (1 - t) * block.corners.row(1) +
                                       s * t * block.corners.row(2) +
                                       (1 - s) * t * block.corners.row(3);
                Vector x(2);
                x << p(0), p(1);
                ids[i + (n0 + 1) * j] = merger.insert(x, nodes);
            }
        }
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n0; ++i) {
                elements.push_back({ids[i + (n0 + 1) * j], ids[i + 1 + (n0 + 1) * j],
                                    ids[i + 1 + (n0 + 1) * (j + 1)], ids[i + (n0 + 1) * (j + 1)]});
                tags.push_back(block.material);
            }
    }
    return Mesh(Dim::two, std::move(nodes), std::move(elements), std::move(tags));
}

Mesh merge_transformed_copies(const Mesh& mesh, const std::vector<IsometryMap>& copies,
                              double merge_tol) {
    const Dim dim = mesh.dim();
    const int d = dim_value(dim);
    std::vector<Vector> nodes;
    std::vector<std::vector<int>> elements;
    std::vector<int> tags;
    NodeMerger merger(d, merge_tol);

    for (const auto& copy : copies) {
        const bool reversed = copy.T.det() < 0.0;
        std::vector<int> ids(mesh.n_nodes());
        for (int i = 0; i < mesh.n_nodes(); ++i)
            ids[i] = merger.insert(copy.apply(mesh.node(i)), nodes);
        for (int e = 0; e < mesh.n_elements(); ++e) {
            std::vector<int> conn;
            conn.reserve(mesh.nodes_per_element());
            for (int local : mesh.element(e)) conn.push_back(ids[local]);
            if (reversed) {
                if (dim == Dim::two) {
                    std::swap(conn[1], conn[3]);
                } else {
                    std::swap_ranges(conn.begin(), conn.begin() + 4, conn.begin() + 4);
                }
            }
            elements.push_back(std::move(conn));
            tags.push_back(mesh.material_tag(e));
        }
    }
    return Mesh(dim, std::move(nodes), std::move(elements), std::move(tags));
}

}  // namespace ruc
