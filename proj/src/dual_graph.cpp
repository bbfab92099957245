#include "tropmod/dual_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tropmod {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool DualGraph::connected() const {
    if (num_vertices() == 0)
        return false;
    UnionFind uf(num_vertices());
    for (const auto& [u, v] : ends)
        uf.unite(u, v);
    int root = uf.find(0);
    for (int v = 1; v < num_vertices(); ++v)
        if (uf.find(v) != root)
            return false;
    return true;
}

void DualGraph::validate() const {
    if (num_vertices() == 0)
        throw std::invalid_argument("dual graph needs at least one vertex");
    for (int h : genus)
        if (h < 0)
            throw std::invalid_argument("negative vertex genus");
    for (const auto& [u, v] : ends) {
        if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices())
            throw std::invalid_argument("edge endpoint out of range");
        if (u > v)
            throw std::invalid_argument("edge endpoints must be normalized (first <= second)");
    }
    for (int v : leg_at)
        if (v < 0 || v >= num_vertices())
            throw std::invalid_argument("leg vertex out of range");
    if (!connected())
        throw std::invalid_argument("dual graph must be connected");
}

int DualGraph::total_genus() const {
    int s = std::accumulate(genus.begin(), genus.end(), 0);
    return s + num_edges() - num_vertices() + 1;
}

int DualGraph::edge_valence(int v) const {
    int d = 0;
    for (const auto& [a, b] : ends) {
        if (a == v)
            ++d;
        if (b == v)
            ++d;
    }
    return d;
}

int DualGraph::legs_at(int v) const {
    int d = 0;
    for (int w : leg_at)
        if (w == v)
            ++d;
    return d;
}

int DualGraph::loops_at(int v) const {
    int d = 0;
    for (const auto& [a, b] : ends)
        if (a == v && b == v)
            ++d;
    return d;
}

int DualGraph::valence(int v) const { return edge_valence(v) + legs_at(v); }

bool DualGraph::is_stable() const {
    for (int v = 0; v < num_vertices(); ++v) {
        if (genus[v] == 0 && valence(v) < 3)
            return false;
        if (genus[v] == 1 && valence(v) < 1)
            return false;
    }
    return true;
}

bool DualGraph::is_pseudostable() const {
    if (!is_stable())
        return false;
    for (int v = 0; v < num_vertices(); ++v) {
        if (genus[v] == 1 && valence(v) < 2)
            return false;
        if (genus[v] == 0 && valence(v) == 3 && loops_at(v) > 0)
            return false;
    }
    return true;
}

bool DualGraph::is_weighted_stable(const std::vector<Rat>& weights) const {
    if (static_cast<int>(weights.size()) != num_legs())
        throw std::invalid_argument("weight vector length must match the number of legs");
    for (const Rat& w : weights)
        if (w <= 0 || w > 1)
            throw std::invalid_argument("weights must lie in (0,1]");
    for (int v = 0; v < num_vertices(); ++v) {
        if (genus[v] == 0) {
            Rat wval = edge_valence(v);
            for (int i = 0; i < num_legs(); ++i)
                if (leg_at[i] == v)
                    wval += weights[i];
            if (wval <= 2)
                return false;
        } else if (valence(v) < 1) {
            return false;
        }
    }
    return true;
}

DualGraph DualGraph::contract_edge(int e) const {
    std::vector<int> keep;
    keep.reserve(num_edges() - 1);
    for (int i = 0; i < num_edges(); ++i)
        if (i != e)
            keep.push_back(i);
    return contract_complement(keep);
}

DualGraph DualGraph::contract_complement(const std::vector<int>& keep,
                                         std::vector<int>* kept_to_new) const {
    std::vector<char> kept(num_edges(), 0);
    for (int e : keep)
        kept[e] = 1;

    UnionFind uf(num_vertices());
    for (int e = 0; e < num_edges(); ++e)
        if (!kept[e])
            uf.unite(ends[e].first, ends[e].second);

    // New vertex ids in order of first appearance of each class.
    std::vector<int> new_id(num_vertices(), -1);
    int nv = 0;
    for (int v = 0; v < num_vertices(); ++v) {
        int r = uf.find(v);
        if (new_id[r] < 0)
            new_id[r] = nv++;
        new_id[v] = new_id[r];
    }

    DualGraph out;
    out.genus.assign(nv, 0);
    // Merged genus: sum of member genera plus the independent cycles formed by
    // the contracted edges inside the class (each contracted cycle edge became
    // a loop before contraction and contributes 1).
    std::vector<int> class_size(nv, 0), contracted_inside(nv, 0);
    for (int v = 0; v < num_vertices(); ++v) {
        out.genus[new_id[v]] += genus[v];
        ++class_size[new_id[v]];
    }
    for (int e = 0; e < num_edges(); ++e)
        if (!kept[e])
            ++contracted_inside[new_id[ends[e].first]];
    for (int c = 0; c < nv; ++c)
        out.genus[c] += contracted_inside[c] - (class_size[c] - 1);

    if (kept_to_new)
        kept_to_new->assign(num_edges(), -1);
    for (int e = 0; e < num_edges(); ++e) {
        if (!kept[e])
            continue;
        int u = new_id[ends[e].first], v = new_id[ends[e].second];
        if (u > v)
            std::swap(u, v);
        if (kept_to_new)
            (*kept_to_new)[e] = static_cast<int>(out.ends.size());
        out.ends.emplace_back(u, v);
    }
    out.leg_at.reserve(num_legs());
    for (int v : leg_at)
        out.leg_at.push_back(new_id[v]);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical labeling: color refinement seeded on (genus, legs, degrees)
// followed by exhaustive search over class-consistent orderings.  Graphs here
// have at most 3g-3+n edges, so the search space is tiny and exactness wins.
// ---------------------------------------------------------------------------

namespace {

// Encoding of a relabeled graph as a flat integer vector, compared
// lexicographically: sizes, genera, legs, sorted edge pairs.
std::vector<int> relabel_encoding(const DualGraph& g, const std::vector<int>& vmap) {
    std::vector<int> enc;
    enc.reserve(3 + g.num_vertices() + g.num_legs() + 2 * g.num_edges());
    enc.push_back(g.num_vertices());
    enc.push_back(g.num_edges());
    enc.push_back(g.num_legs());
    std::vector<int> gen(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        gen[vmap[v]] = g.genus[v];
    for (int x : gen)
        enc.push_back(x);
    for (int v : g.leg_at)
        enc.push_back(vmap[v]);
    std::vector<std::pair<int, int>> es;
    es.reserve(g.num_edges());
    for (const auto& [u, v] : g.ends) {
        int a = vmap[u], b = vmap[v];
        if (a > b)
            std::swap(a, b);
        es.emplace_back(a, b);
    }
    std::sort(es.begin(), es.end());
    for (const auto& [a, b] : es) {
        enc.push_back(a);
        enc.push_back(b);
    }
    return enc;
}

// Refined vertex partition, classes sorted by content so that isomorphic
// graphs produce matching class sequences.
std::vector<std::vector<int>> refined_classes(const DualGraph& g) {
    int n = g.num_vertices();
    std::vector<std::vector<int>> key(n);
    for (int v = 0; v < n; ++v) {
        key[v] = {g.genus[v], g.edge_valence(v), g.loops_at(v)};
        std::vector<int> legs;
        for (int i = 0; i < g.num_legs(); ++i)
            if (g.leg_at[i] == v)
                legs.push_back(i);
        key[v].push_back(static_cast<int>(legs.size()));
        key[v].insert(key[v].end(), legs.begin(), legs.end());
    }
    std::vector<int> color(n);
    auto assign_colors = [&]() {
        std::map<std::vector<int>, int> ranks;
        for (int v = 0; v < n; ++v)
            ranks[key[v]] = 0;
        int r = 0;
        for (auto& [k, rank] : ranks)
            rank = r++;
        for (int v = 0; v < n; ++v)
            color[v] = ranks[key[v]];
        return r;
    };
    int ncolors = assign_colors();
    for (;;) {
        // multiplicity profile towards each color
        for (int v = 0; v < n; ++v) {
            std::vector<int> profile(ncolors, 0);
            for (const auto& [a, b] : g.ends) {
                if (a == v && b != v)
                    ++profile[color[b]];
                else if (b == v && a != v)
                    ++profile[color[a]];
            }
            key[v].push_back(color[v]);
            key[v].insert(key[v].end(), profile.begin(), profile.end());
        }
        int next = assign_colors();
        if (next == ncolors)
            break;
        ncolors = next;
    }
    std::vector<std::vector<int>> classes(ncolors);
    for (int v = 0; v < n; ++v)
        classes[color[v]].push_back(v);
    return classes;
}

// Enumerates all orderings consistent with the refined classes (classes in
// rank order, vertices permuted within each class), invoking fn(vmap).
void for_each_consistent_ordering(const std::vector<std::vector<int>>& classes, int n,
                                  const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> vmap(n, -1);
    int base = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t ci) {
        if (ci == classes.size()) {
            fn(vmap);
            return;
        }
        std::vector<int> cls = classes[ci];
        std::sort(cls.begin(), cls.end());
        int start = base;
        base += static_cast<int>(cls.size());
        do {
            for (std::size_t i = 0; i < cls.size(); ++i)
                vmap[cls[i]] = start + static_cast<int>(i);
            rec(ci + 1);
        } while (std::next_permutation(cls.begin(), cls.end()));
        base = start;
    };
    rec(0);
}

std::string encoding_string(const std::vector<int>& enc) {
    std::string s;
    s.reserve(enc.size() * 3);
    for (std::size_t i = 0; i < enc.size(); ++i) {
        if (i)
            s.push_back(',');
        s += std::to_string(enc[i]);
    }
    return s;
}

}  // namespace

CanonicalForm canonical_form(const DualGraph& g) {
    auto classes = refined_classes(g);
    int n = g.num_vertices();

    std::vector<int> best_enc;
    std::vector<int> best_map;
    for_each_consistent_ordering(classes, n, [&](const std::vector<int>& vmap) {
        auto enc = relabel_encoding(g, vmap);
        if (best_enc.empty() || enc < best_enc) {
            best_enc = enc;
            best_map = vmap;
        }
    });

    CanonicalForm cf;
    cf.vertex_map = best_map;
    cf.encoding = encoding_string(best_enc);

    cf.graph.genus.assign(n, 0);
    for (int v = 0; v < n; ++v)
        cf.graph.genus[best_map[v]] = g.genus[v];
    cf.graph.leg_at.reserve(g.num_legs());
    for (int v : g.leg_at)
        cf.graph.leg_at.push_back(best_map[v]);

    // Edges sorted by (new endpoints, old index): deterministic map, identity
    // on an already-canonical graph.
    std::vector<std::tuple<int, int, int>> es;
    es.reserve(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        int a = best_map[g.ends[e].first], b = best_map[g.ends[e].second];
        if (a > b)
            std::swap(a, b);
        es.emplace_back(a, b, e);
    }
    std::sort(es.begin(), es.end());
    cf.edge_map.assign(g.num_edges(), -1);
    for (std::size_t i = 0; i < es.size(); ++i) {
        auto [a, b, e] = es[i];
        cf.graph.ends.emplace_back(a, b);
        cf.edge_map[e] = static_cast<int>(i);
    }
    return cf;
}

std::string canonical_encoding(const DualGraph& g) { return canonical_form(g).encoding; }

AutGroup automorphisms(const DualGraph& g) {
    int n = g.num_vertices();
    auto classes = refined_classes(g);

    // Multiplicity map: unordered pair -> edge list.
    std::map<std::pair<int, int>, std::vector<int>> pair_edges;
    for (int e = 0; e < g.num_edges(); ++e)
        pair_edges[g.ends[e]].push_back(e);

    const auto identity_enc = relabel_encoding(g, [&] {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        return id;
    }());

    // Equality of relabeled encodings pins genera, leg labels and the edge
    // multiset, which is exactly the vertex-level automorphism condition.
    std::vector<std::vector<int>> vertex_autos;
    for_each_consistent_ordering(classes, n, [&](const std::vector<int>& vmap) {
        if (relabel_encoding(g, vmap) == identity_enc)
            vertex_autos.push_back(vmap);
    });

    AutGroup aut;
    std::set<std::vector<int>> edge_set;
    std::set<std::vector<int>> half_set;

    int m = g.num_edges();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [p, es] : pair_edges)
        pairs.push_back(p);

    for (const auto& pi : vertex_autos) {
        // Assemble all edge bijections compatible with pi, pair by pair.
        std::vector<int> edge_perm(m, -1);
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == pairs.size()) {
                edge_set.insert(edge_perm);
                // Half-edge lifts: orientation forced on non-loops, free on loops.
                std::vector<int> loops;
                for (int e = 0; e < m; ++e)
                    if (g.is_loop(e))
                        loops.push_back(e);
                int L = static_cast<int>(loops.size());
                for (int mask = 0; mask < (1 << L); ++mask) {
                    std::vector<int> hp(2 * m, -1);
                    for (int e = 0; e < m; ++e) {
                        int f = edge_perm[e];
                        if (!g.is_loop(e)) {
                            int u = g.ends[e].first;
                            // half 2e sits at u; its image sits at pi(u)
                            if (g.ends[f].first == pi[u]) {
                                hp[2 * e] = 2 * f;
                                hp[2 * e + 1] = 2 * f + 1;
                            } else {
                                hp[2 * e] = 2 * f + 1;
                                hp[2 * e + 1] = 2 * f;
                            }
                        }
                    }
                    for (int li = 0; li < L; ++li) {
                        int e = loops[li], f = edge_perm[e];
                        int flip = (mask >> li) & 1;
                        hp[2 * e] = 2 * f + flip;
                        hp[2 * e + 1] = 2 * f + 1 - flip;
                    }
                    half_set.insert(hp);
                }
                return;
            }
            auto p = pairs[k];
            std::pair<int, int> q{pi[p.first], pi[p.second]};
            if (q.first > q.second)
                std::swap(q.first, q.second);
            auto it = pair_edges.find(q);
            if (it == pair_edges.end() || it->second.size() != pair_edges[p].size())
                return;  // pi not edge-compatible (cannot happen for true autos)
            const auto& src = pair_edges[p];
            std::vector<int> dst = it->second;
            std::sort(dst.begin(), dst.end());
            do {
                for (std::size_t i = 0; i < src.size(); ++i)
                    edge_perm[src[i]] = dst[i];
                rec(k + 1);
            } while (std::next_permutation(dst.begin(), dst.end()));
        };
        rec(0);
    }

    aut.order = static_cast<std::uint64_t>(half_set.size());
    aut.edge_perms.assign(edge_set.begin(), edge_set.end());
    aut.half_edge_perms.assign(half_set.begin(), half_set.end());
    return aut;
}

// ---------------------------------------------------------------------------
// Pseudostabilization
// ---------------------------------------------------------------------------

bool admitted_range(int g, int n) {
    if (g < 1 || n < 0)
        return false;
    if (g == 1 && n <= 1)
        return false;
    if (g == 2 && n == 0)
        return false;
    return true;
}

namespace {

struct Move {
    enum Kind { E1, E2 } kind;
    int vertex;  // the vertex removed by the move
    int edge;    // tail edge e
    int loop;    // loop l (E2 only)
};

std::vector<Move> find_moves(const DualGraph& g) {
    std::vector<Move> moves;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.legs_at(v) > 0)
            continue;
        if (g.genus[v] == 1 && g.valence(v) == 1) {
            for (int e = 0; e < g.num_edges(); ++e)
                if (!g.is_loop(e) && (g.ends[e].first == v || g.ends[e].second == v)) {
                    moves.push_back({Move::E1, v, e, -1});
                    break;
                }
        } else if (g.genus[v] == 0 && g.valence(v) == 3 && g.loops_at(v) == 1) {
            int loop = -1, edge = -1;
            for (int e = 0; e < g.num_edges(); ++e) {
                if (g.ends[e].first == v && g.ends[e].second == v)
                    loop = e;
                else if (g.ends[e].first == v || g.ends[e].second == v)
                    edge = e;
            }
            if (edge >= 0)
                moves.push_back({Move::E2, v, edge, loop});
        }
    }
    return moves;
}

// Applies one move to (graph, transfer), producing the successor state.
void apply_move(const DualGraph& g, const std::vector<std::vector<std::int64_t>>& transfer,
                const Move& mv, DualGraph& out, std::vector<std::vector<std::int64_t>>& out_transfer) {
    int v = mv.vertex;
    int w = g.ends[mv.edge].first == v ? g.ends[mv.edge].second : g.ends[mv.edge].first;

    // Delete vertex v; re-index the others.
    std::vector<int> vmap(g.num_vertices(), -1);
    int nv = 0;
    for (int u = 0; u < g.num_vertices(); ++u)
        if (u != v)
            vmap[u] = nv++;

    out = DualGraph{};
    out.genus.reserve(nv);
    for (int u = 0; u < g.num_vertices(); ++u)
        if (u != v)
            out.genus.push_back(g.genus[u]);
    out.leg_at.reserve(g.num_legs());
    for (int u : g.leg_at)
        out.leg_at.push_back(vmap[u]);

    out_transfer.clear();
    for (int e = 0; e < g.num_edges(); ++e) {
        if (e == mv.edge || e == mv.loop)
            continue;
        out.ends.emplace_back(vmap[g.ends[e].first], vmap[g.ends[e].second]);
        if (out.ends.back().first > out.ends.back().second)
            std::swap(out.ends.back().first, out.ends.back().second);
        out_transfer.push_back(transfer[e]);
    }
    // New loop at w with coordinate 12*x_e (E1) or x_l + 12*x_e (E2).
    out.ends.emplace_back(vmap[w], vmap[w]);
    std::vector<std::int64_t> row(transfer[mv.edge].size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
        row[i] = 12 * transfer[mv.edge][i];
        if (mv.kind == Move::E2)
            row[i] += transfer[mv.loop][i];
    }
    out_transfer.push_back(std::move(row));
}

std::vector<std::vector<std::int64_t>> identity_transfer(int m) {
    std::vector<std::vector<std::int64_t>> t(m, std::vector<std::int64_t>(m, 0));
    for (int i = 0; i < m; ++i)
        t[i][i] = 1;
    return t;
}

}  // namespace

Pseudostabilization pseudostabilize(const DualGraph& g) {
    if (!g.is_stable())
        throw std::invalid_argument("pseudostabilize requires a stable graph");
    if (!admitted_range(g.total_genus(), g.num_legs()))
        throw std::invalid_argument("pseudostabilize: (g,n) outside the admitted range");

    DualGraph cur = g;
    auto transfer = identity_transfer(g.num_edges());
    for (;;) {
        auto moves = find_moves(cur);
        if (moves.empty())
            break;
        DualGraph next;
        std::vector<std::vector<std::int64_t>> next_transfer;
        apply_move(cur, transfer, moves.front(), next, next_transfer);
        cur = std::move(next);
        transfer = std::move(next_transfer);
    }
    if (!cur.is_pseudostable())
        throw std::logic_error("pseudostabilize: local moves did not reach a pseudostable graph");
    return {std::move(cur), std::move(transfer)};
}

std::vector<Pseudostabilization> pseudostabilize_all_orders(const DualGraph& g) {
    if (!g.is_stable())
        throw std::invalid_argument("pseudostabilize requires a stable graph");
    std::vector<Pseudostabilization> results;
    std::function<void(const DualGraph&, const std::vector<std::vector<std::int64_t>>&)> rec =
        [&](const DualGraph& cur, const std::vector<std::vector<std::int64_t>>& transfer) {
            auto moves = find_moves(cur);
            if (moves.empty()) {
                results.push_back({cur, transfer});
                return;
            }
            for (const auto& mv : moves) {
                DualGraph next;
                std::vector<std::vector<std::int64_t>> next_transfer;
                apply_move(cur, transfer, mv, next, next_transfer);
                rec(next, next_transfer);
            }
        };
    rec(g, identity_transfer(g.num_edges()));
    return results;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::ordered_json graph_to_json(const DualGraph& g) {
    nlohmann::ordered_json j;
    j["vertices"] = nlohmann::ordered_json::array();
    for (int h : g.genus)
        j["vertices"].push_back({{"genus", h}});
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [u, v] : g.ends)
        j["edges"].push_back({u, v});
    j["legs"] = nlohmann::ordered_json::array();
    for (int i = 0; i < g.num_legs(); ++i)
        j["legs"].push_back({{"label", i + 1}, {"vertex", g.leg_at[i]}});
    return j;
}

DualGraph graph_from_json(const nlohmann::ordered_json& j) {
    DualGraph g;
    for (const auto& v : j.at("vertices"))
        g.genus.push_back(v.at("genus").get<int>());
    for (const auto& e : j.at("edges")) {
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        if (u > v)
            std::swap(u, v);
        g.ends.emplace_back(u, v);
    }
    std::map<int, int> legs;
    for (const auto& l : j.at("legs"))
        legs[l.at("label").get<int>()] = l.at("vertex").get<int>();
    int expect = 1;
    for (const auto& [label, vertex] : legs) {
        if (label != expect++)
            throw std::invalid_argument("leg labels must be 1..n");
        g.leg_at.push_back(vertex);
    }
    g.validate();
    return g;
}

std::string graph_to_dot(const DualGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "graph " << (name.empty() ? "G" : name) << " {\n";
    for (int v = 0; v < g.num_vertices(); ++v)
        os << "  v" << v << " [label=\"h=" << g.genus[v] << "\"];\n";
    for (const auto& [u, v] : g.ends)
        os << "  v" << u << " -- v" << v << ";\n";
    for (int i = 0; i < g.num_legs(); ++i) {
        os << "  leg" << (i + 1) << " [shape=none,label=\"" << (i + 1) << "\"];\n";
        os << "  v" << g.leg_at[i] << " -- leg" << (i + 1) << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string graph_summary(const DualGraph& g) {
    std::ostringstream os;
    os << "v[";
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (v)
            os << ",";
        os << "h" << g.genus[v];
        std::string legs;
        for (int i = 0; i < g.num_legs(); ++i)
            if (g.leg_at[i] == v)
                legs += (legs.empty() ? "" : " ") + std::to_string(i + 1);
        if (!legs.empty())
            os << "(" << legs << ")";
    }
    os << "] e[";
    for (int e = 0; e < g.num_edges(); ++e) {
        if (e)
            os << ",";
        os << g.ends[e].first << "-" << g.ends[e].second;
    }
    os << "]";
    return os.str();
}

}  // namespace tropmod
