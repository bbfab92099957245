#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tropmod/rational.hpp"

namespace tropmod {

/// Dual graph of a nodal curve: vertices carry geometric genus, edges are
/// nodes (loops allowed), legs are labeled marked points.  Edge k owns the
/// half-edges 2k (at ends[k].first) and 2k+1 (at ends[k].second); the pairing
/// involution is h -> h^1.
struct DualGraph {
    std::vector<int> genus;                 // genus weight h(v) per vertex
    std::vector<std::pair<int, int>> ends;  // edge endpoints, first <= second; loop iff equal
    std::vector<int> leg_at;                // leg_at[i] = vertex carrying label i+1

    int num_vertices() const { return static_cast<int>(genus.size()); }
    int num_edges() const { return static_cast<int>(ends.size()); }
    int num_legs() const { return static_cast<int>(leg_at.size()); }
    int num_half_edges() const { return 2 * num_edges(); }

    int half_edge_vertex(int h) const {
        const auto& e = ends[h >> 1];
        return (h & 1) ? e.second : e.first;
    }
    static int half_edge_mate(int h) { return h ^ 1; }
    static int half_edge_edge(int h) { return h >> 1; }
    bool is_loop(int e) const { return ends[e].first == ends[e].second; }

    bool connected() const;
    void validate() const;  // throws std::invalid_argument on malformed input

    int total_genus() const;        // sum of weights plus first Betti number
    int valence(int v) const;       // incident half-edges (loops twice) plus legs
    int edge_valence(int v) const;  // incident half-edges only
    int loops_at(int v) const;
    int legs_at(int v) const;

    bool is_stable() const;
    bool is_pseudostable() const;
    bool is_weighted_stable(const std::vector<Rat>& weights) const;

    DualGraph contract_edge(int e) const;
    // Contract every edge not listed in `keep` (sorted, distinct).  Reports the
    // index each kept edge receives in the result.
    DualGraph contract_complement(const std::vector<int>& keep,
                                  std::vector<int>* kept_to_new = nullptr) const;

    bool operator==(const DualGraph& other) const = default;
};

struct CanonicalForm {
    DualGraph graph;              // canonically labeled representative
    std::vector<int> vertex_map;  // input vertex -> canonical vertex
    std::vector<int> edge_map;    // input edge -> canonical edge
    std::string encoding;         // equal iff the graphs are isomorphic
};

CanonicalForm canonical_form(const DualGraph& g);
std::string canonical_encoding(const DualGraph& g);

/// Automorphisms fix vertex genera and leg labels, permute half-edges and
/// commute with the pairing.  A loop flip is a nontrivial automorphism, so the
/// one-loop graph always has even order.
struct AutGroup {
    std::uint64_t order = 1;
    std::vector<std::vector<int>> edge_perms;       // induced action on edges (contains id)
    std::vector<std::vector<int>> half_edge_perms;  // full group on half-edges (contains id)

    bool edge_action_trivial() const { return edge_perms.size() <= 1; }
};

AutGroup automorphisms(const DualGraph& g);

struct Pseudostabilization {
    DualGraph graph;  // pseudostable result
    // transfer[j][i]: coefficient of source edge coordinate i in result edge j
    std::vector<std::vector<std::int64_t>> transfer;
};

bool admitted_range(int g, int n);

/// Eliminates legless one-valent genus-1 vertices (tail edge e at w becomes a
/// loop at w with coordinate 12*x_e) and legless three-valent genus-0 loop
/// vertices (loop l plus edge e to w become a loop at w with coordinate
/// x_l + 12*x_e) until the graph is pseudostable.  Requires a stable graph in
/// the admitted range.
Pseudostabilization pseudostabilize(const DualGraph& g);

/// Like pseudostabilize but explores every order of applying the two local
/// moves; used to check confluence.
std::vector<Pseudostabilization> pseudostabilize_all_orders(const DualGraph& g);

// JSON graph schema: {"vertices":[{"genus":..}],"edges":[[u,v],..],
// "legs":[{"label":..,"vertex":..}]} in canonical order.
nlohmann::ordered_json graph_to_json(const DualGraph& g);
DualGraph graph_from_json(const nlohmann::ordered_json& j);
std::string graph_to_dot(const DualGraph& g, const std::string& name);

/// One-line structural summary, e.g. "v[h1,h0+12]  e(0-1)" style description.
std::string graph_summary(const DualGraph& g);

}  // namespace tropmod
