#include "ruc/pairing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ruc {

namespace {

// Grid-bucketed point lookup over the mesh nodes.
class NodeLocator {
  public:
    NodeLocator(const Mesh& mesh, double cell) : mesh_(mesh), cell_(cell) {
        for (int i = 0; i < mesh.n_nodes(); ++i) buckets_[key(mesh.node(i))].push_back(i);
    }

    std::vector<int> find(const Vector& x, double tol) const {
        std::vector<int> out;
        const auto k = key(x);
        const int zr = dim_value(mesh_.dim()) == 3 ? 1 : 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -zr; dz <= zr; ++dz) {
                    auto it = buckets_.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == buckets_.end()) continue;
                    for (int id : it->second)
                        if ((mesh_.node(id) - x).norm() <= tol) out.push_back(id);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::array<long long, 3> key(const Vector& x) const {
        std::array<long long, 3> k{0, 0, 0};
        for (int i = 0; i < x.size(); ++i)
            k[i] = static_cast<long long>(std::floor(x[i] / cell_));
        return k;
    }

    const Mesh& mesh_;
    double cell_;
    std::map<std::array<long long, 3>, std::vector<int>> buckets_;
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool coords_less(const Vector& a, const Vector& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

IsometryMap relation_map(const CellSpec& spec, const ChainStep& step) {
    const auto& rel = spec.relations[step.relation];
    IsometryMap m{rel.T, rel.offset};
    return step.inverted ? m.inverse() : m;
}

Vector element_centroid(const Mesh& mesh, int e) {
    Vector c = Vector::Zero(dim_value(mesh.dim()));
    for (int n : mesh.element(e)) c += mesh.node(n);
    return c / static_cast<double>(mesh.element(e).size());
}

// Physical equivalence at mesh resolution: elements incident to the master
// node whose mapped centroid lands inside the slave's neighbourhood must
// carry the same material tag. Centroids mapping outside the mesh belong to
// neighbouring copies of the cell and are skipped.
bool materials_congruent(const Mesh& mesh, const std::vector<std::vector<int>>& node_elems,
                         const EquivalenceRelation& rel, int master, int slave, double tol) {
    for (int em : node_elems[master]) {
        const Vector mapped = map_point(rel, element_centroid(mesh, em));
        for (int es : node_elems[slave]) {
            if ((element_centroid(mesh, es) - mapped).norm() <= tol) {
                if (mesh.material_tag(em) != mesh.material_tag(es)) return false;
                break;
            }
        }
    }
    return true;
}

}  // namespace

std::vector<std::string> NodePair::chain_labels(const CellSpec& spec) const {
    std::vector<std::string> out;
    for (const auto& step : chain)
        out.push_back((step.inverted ? "~" : "") + spec.relations[step.relation].label);
    return out;
}

PairingGraph pair_boundary_nodes(const Mesh& mesh, const CellSpec& spec, double tol) {
    PairingGraph graph;
    graph.tol = tol > 0 ? tol : Tol::pairing * spec.bbox_diagonal();

    const NodeLocator locator(mesh, std::max(graph.tol * 8, 1e-12));
    const auto& boundary = mesh.boundary_nodes();

    std::vector<std::vector<int>> node_elems(mesh.n_nodes());
    for (int e = 0; e < mesh.n_elements(); ++e)
        for (int n : mesh.element(e)) node_elems[n].push_back(e);

    // centroid matching tolerance: centroids are element-scale apart
    const double centroid_tol = graph.tol * 10;

    for (int r = 0; r < spec.n(); ++r) {
        const auto& rel = spec.relations[r];
        for (int node : boundary) {
            if (!rel.source_region.contains(mesh.node(node), graph.tol)) continue;
            const Vector image = map_point(rel, mesh.node(node));
            const auto hits = locator.find(image, graph.tol);
            if (hits.empty()) {
                graph.report.unmatched.push_back({node, rel.label, image});
                continue;
            }
            if (hits.size() > 1) {
                graph.report.ambiguous.push_back({node, rel.label, hits[0], hits[1]});
                continue;
            }
            const int slave = hits[0];
            if (!materials_congruent(mesh, node_elems, rel, node, slave, centroid_tol))
                graph.report.material_mismatches.push_back({slave, node, rel.label});
            PairingEdge edge{slave, node, r};
            if (slave == node) {
                graph.self_edges.push_back(edge);
                ++graph.report.n_self;
            } else {
                graph.edges.push_back(edge);
                ++graph.report.n_edges;
            }
        }
    }
    return graph;
}

ResolvedPairing resolve(const PairingGraph& graph, const Mesh& mesh, const CellSpec& spec) {
    if (!graph.report.unmatched.empty()) {
        const auto& u = graph.report.unmatched.front();
        std::ostringstream os;
        os << "no mesh node within tolerance of the image of node " << u.node << " under relation "
           << u.relation << " (mesh not symmetry-compatible)";
        throw Error("UnmatchedNode", "node " + std::to_string(u.node), os.str());
    }
    if (!graph.report.ambiguous.empty()) {
        const auto& a = graph.report.ambiguous.front();
        throw Error("AmbiguousMatch", "node " + std::to_string(a.node),
                    "nodes " + std::to_string(a.candidate_a) + " and " +
                        std::to_string(a.candidate_b) + " both match the image of node " +
                        std::to_string(a.node) + " under relation " + a.relation);
    }
    if (!graph.report.material_mismatches.empty()) {
        const auto& m = graph.report.material_mismatches.front();
        throw Error("MaterialMismatch",
                    "nodes " + std::to_string(m.slave) + "/" + std::to_string(m.master),
                    "material tags differ across the pair matched by relation " + m.relation +
                        " (physical equivalence violated at mesh resolution)");
    }

    ResolvedPairing out;
    out.report = graph.report;
    const double tol = graph.tol;

    UnionFind uf(mesh.n_nodes());
    for (const auto& e : graph.edges) uf.unite(e.slave, e.master);

    std::map<int, std::vector<int>> classes;
    for (const auto& e : graph.edges) {
        for (int n : {e.slave, e.master}) {
            auto& members = classes[uf.find(n)];
            if (std::find(members.begin(), members.end(), n) == members.end())
                members.push_back(n);
        }
    }

    std::map<int, std::vector<int>> adjacency;  // node -> edge indices
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        adjacency[graph.edges[i].master].push_back(static_cast<int>(i));
        adjacency[graph.edges[i].slave].push_back(static_cast<int>(i));
    }

    struct Chained {
        IsometryMap map;  // canonical master coordinate -> node coordinate
        std::vector<ChainStep> chain;
    };

    std::vector<char> edge_used(graph.edges.size(), 0);

    for (auto& [root, members] : classes) {
        std::sort(members.begin(), members.end());
        int canon = members.front();
        for (int n : members)
            if (coords_less(mesh.node(n), mesh.node(canon))) canon = n;

        // breadth-first spanning tree rooted at the canonical master
        std::map<int, Chained> reached;
        reached[canon] = {IsometryMap::identity(spec.dim), {}};
        std::vector<int> frontier{canon};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int u : frontier) {
                auto it = adjacency.find(u);
                if (it == adjacency.end()) continue;
                for (int ei : it->second) {
                    const auto& e = graph.edges[ei];
                    const int v = (e.master == u) ? e.slave : e.master;
                    if (reached.count(v)) continue;
                    const ChainStep step{e.relation, e.master != u};
                    edge_used[ei] = 1;
                    Chained c;
                    c.map = IsometryMap::compose(relation_map(spec, step), reached[u].map);
                    c.chain = reached[u].chain;
                    c.chain.push_back(step);
                    reached.emplace(v, std::move(c));
                    next.push_back(v);
                }
            }
            std::sort(next.begin(), next.end());
            frontier = std::move(next);
        }

        for (int n : members) {
            if (n == canon) continue;
            const auto& c = reached.at(n);
            NodePair pair;
            pair.slave = n;
            pair.master = canon;
            pair.chain = c.chain;
            pair.map = c.map;
            if ((pair.map.apply(mesh.node(canon)) - mesh.node(n)).norm() > 10 * tol)
                throw Error("InconsistentCycle", "node " + std::to_string(n),
                            "composed chain does not reproduce the coordinates of node " +
                                std::to_string(n));
            out.pairs.push_back(std::move(pair));
        }

        // cycle-closing edges: test closure, keep the constraint as redundant
        for (int u : members) {
            auto it = adjacency.find(u);
            if (it == adjacency.end()) continue;
            for (int ei : it->second) {
                if (edge_used[ei]) continue;
                const auto& e = graph.edges[ei];
                if (e.master != u) continue;  // handle each unused edge from its master side
                edge_used[ei] = 1;
                const ChainStep step{e.relation, false};
                const IsometryMap via =
                    IsometryMap::compose(relation_map(spec, step), reached.at(e.master).map);
                const Vector closure =
                    via.apply(mesh.node(canon)) - reached.at(e.slave).map.apply(mesh.node(canon));
                if (closure.norm() > 10 * tol) {
                    std::ostringstream os;
                    os << "cycle through relation " << spec.relations[e.relation].label
                       << " between nodes " << e.master << " and " << e.slave
                       << " does not close (residual " << closure.norm() << "); tree chain:";
                    for (const auto& s : reached.at(e.slave).chain)
                        os << " " << (s.inverted ? "~" : "") << spec.relations[s.relation].label;
                    throw Error("InconsistentCycle", spec.relations[e.relation].label, os.str());
                }
                NodePair pair;
                pair.slave = e.slave;
                pair.master = e.master;
                pair.chain = {step};
                pair.map = relation_map(spec, step);
                pair.redundant = true;
                out.pairs.push_back(std::move(pair));
            }
        }
    }

    for (const auto& e : graph.self_edges) {
        NodePair pair;
        pair.slave = e.slave;
        pair.master = e.master;
        pair.chain = {{e.relation, false}};
        pair.map = relation_map(spec, {e.relation, false});
        pair.self_pair = true;
        out.pairs.push_back(std::move(pair));
    }

    std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const NodePair& a, const NodePair& b) {
        const int ka = a.self_pair ? 2 : (a.redundant ? 1 : 0);
        const int kb = b.self_pair ? 2 : (b.redundant ? 1 : 0);
        if (ka != kb) return ka < kb;
        if (a.slave != b.slave) return a.slave < b.slave;
        return a.master < b.master;
    });
    return out;
}

std::vector<const NodePair*> ResolvedPairing::eliminating() const {
    std::vector<const NodePair*> out;
    for (const auto& p : pairs)
        if (!p.self_pair && !p.redundant) out.push_back(&p);
    return out;
}

}  // namespace ruc
