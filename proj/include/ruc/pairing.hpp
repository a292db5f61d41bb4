#pragma once

#include <string>
#include <vector>

#include "ruc/cellspec.hpp"
#include "ruc/mesh.hpp"

namespace ruc {

/// One directed match: the node at x^A (slave) and its equivalent partner
/// x^Ahat (master, inside the relation's source region).
struct PairingEdge {
    int slave = -1;
    int master = -1;
    int relation = -1;  // index into spec.relations
};

struct PairingReport {
    struct Unmatched {
        int node;
        std::string relation;
        Vector image;  // where the partner was expected
    };
    struct Ambiguous {
        int node;
        std::string relation;
        int candidate_a;
        int candidate_b;
    };
    struct MaterialMismatch {
        int slave;
        int master;
        std::string relation;
    };

    std::vector<Unmatched> unmatched;
    std::vector<Ambiguous> ambiguous;
    std::vector<MaterialMismatch> material_mismatches;
    int n_edges = 0;
    int n_self = 0;

    bool ok() const {
        return unmatched.empty() && ambiguous.empty() && material_mismatches.empty();
    }
};

struct PairingGraph {
    std::vector<PairingEdge> edges;       // slave != master
    std::vector<PairingEdge> self_edges;  // fixed points of a relation
    PairingReport report;
    double tol = 0.0;
};

/// Matches every boundary node inside a relation source region with the mesh
/// node at its image. Match failures are collected in the report, not thrown.
/// tol <= 0 selects the default 1e-8 * bbox diagonal.
PairingGraph pair_boundary_nodes(const Mesh& mesh, const CellSpec& spec, double tol = -1.0);

/// One step of a composed relation chain.
struct ChainStep {
    int relation;
    bool inverted;
};

/// Resolved master-slave pair: slave chained directly to the canonical
/// master of its equivalence class. `map` sends the master coordinate to the
/// slave coordinate; self-pairs (slave == master) are degenerate constraints
/// at fixed points of a relation. `redundant` pairs close a cycle of the
/// pairing graph; they eliminate no unknown but their constraint content is
/// kept.
struct NodePair {
    int slave = -1;
    int master = -1;
    std::vector<ChainStep> chain;
    IsometryMap map;
    bool self_pair = false;
    bool redundant = false;

    std::vector<std::string> chain_labels(const CellSpec& spec) const;
};

struct ResolvedPairing {
    std::vector<NodePair> pairs;  // eliminating pairs first, then self/redundant
    PairingReport report;

    std::vector<const NodePair*> eliminating() const;
};

/// Union-find over the pairing graph. Canonical master per class = node with
/// lexicographically smallest coordinates. Every cycle of the graph must
/// compose to a map that fixes the node it closes on (closure test); a
/// violation throws InconsistentCycle naming the relations involved.
/// Throws UnmatchedNode / AmbiguousMatch when the graph carries match
/// failures.
ResolvedPairing resolve(const PairingGraph& graph, const Mesh& mesh, const CellSpec& spec);

}  // namespace ruc
