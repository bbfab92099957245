#include "tropmod/cone_complex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tropmod {

// ---------------------------------------------------------------------------
// Enumeration.  Bottom-up scan per the layout: split the genus among up to
// 2g-2+n vertices, the edge count is then forced by the total genus, generate
// edge multisets with a stability-deficit prune, distribute legs, keep the
// connected stable results, dedup by canonical form.
// ---------------------------------------------------------------------------

namespace {

struct Sink {
    std::map<std::string, DualGraph> found;

    void emit(const DualGraph& g) {
        auto cf = canonical_form(g);
        found.emplace(std::move(cf.encoding), std::move(cf.graph));
    }
    void merge(Sink&& other) {
        for (auto& [enc, g] : other.found)
            found.emplace(enc, std::move(g));
    }
};

int required_valence(int h) { return h == 0 ? 3 : (h == 1 ? 1 : 0); }

// Distributes leg labels over vertices; prunes on remaining stability needs.
void assign_legs(const std::vector<int>& genus, const std::vector<std::pair<int, int>>& edges,
                 const std::vector<int>& deg, int n, Sink& sink) {
    int V = static_cast<int>(genus.size());
    std::vector<int> need(V);
    int total_need = 0;
    for (int v = 0; v < V; ++v) {
        need[v] = std::max(0, required_valence(genus[v]) - deg[v]);
        total_need += need[v];
    }
    if (total_need > n)
        return;

    std::vector<int> leg_at(n, -1);
    std::function<void(int, int)> rec = [&](int i, int remaining_need) {
        if (n - i < remaining_need)
            return;
        if (i == n) {
            DualGraph g;
            g.genus = genus;
            g.ends = edges;
            g.leg_at = leg_at;
            sink.emit(g);
            return;
        }
        for (int v = 0; v < V; ++v) {
            leg_at[i] = v;
            bool was_needed = need[v] > 0;
            --need[v];
            rec(i + 1, remaining_need - (was_needed ? 1 : 0));
            ++need[v];
        }
    };
    rec(0, total_need);
}

// Recursion over the lexicographic list of vertex pairs (i <= j), choosing a
// multiplicity for each.  deg counts edge half-edges per vertex.
struct PairScan {
    int V = 0, E = 0, n = 0;
    std::vector<int> genus;
    std::vector<std::pair<int, int>> pairs;

    void init(const std::vector<int>& h, int edges, int legs) {
        genus = h;
        V = static_cast<int>(h.size());
        E = edges;
        n = legs;
        pairs.clear();
        for (int i = 0; i < V; ++i)
            for (int j = i; j < V; ++j)
                pairs.emplace_back(i, j);
    }

    // A vertex is closed once no pair at index >= k can touch it.
    bool feasible(const std::vector<int>& deg, std::size_t k, int remaining) const {
        int closed_deficit = 0, open_deficit = 0;
        for (int v = 0; v < V; ++v) {
            int d = std::max(0, required_valence(genus[v]) - deg[v]);
            if (d == 0)
                continue;
            // pairs are lex sorted; vertex v is open iff some pair >= k contains v,
            // i.e. k <= last pair touching v, whose index is pair (v, V-1) when
            // v <= V-1: index of (i,j) = i*V - i(i-1)/2 + (j - i).
            int last = v * V - v * (v - 1) / 2 + (V - 1 - v);
            if (static_cast<int>(k) <= last)
                open_deficit += d;
            else
                closed_deficit += d;
        }
        int future = 2 * remaining;
        return closed_deficit + std::max(0, open_deficit - future) <= n;
    }

    void run(std::size_t k, int placed, std::vector<int>& counts, std::vector<int>& deg,
             Sink& sink) const {
        if (placed == E) {
            finish(counts, deg, sink);
            return;
        }
        if (k == pairs.size())
            return;
        if (!feasible(deg, k, E - placed))
            return;
        auto [i, j] = pairs[k];
        int inc = (i == j) ? 2 : 1;  // a loop contributes two half-edges at i
        for (int c = 0; placed + c <= E; ++c) {
            if (c > 0) {
                ++counts[k];
                deg[i] += inc;
                if (i != j)
                    deg[j] += inc;
            }
            run(k + 1, placed + c, counts, deg, sink);
        }
        // undo
        int c = counts[k];
        counts[k] = 0;
        deg[i] -= c * inc;
        if (i != j)
            deg[j] -= c * inc;
    }

    void finish(const std::vector<int>& counts, const std::vector<int>& deg, Sink& sink) const {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(E);
        for (std::size_t k = 0; k < pairs.size(); ++k)
            for (int c = 0; c < counts[k]; ++c)
                edges.push_back(pairs[k]);
        if (V > 1) {
            std::vector<int> parent(V);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            for (const auto& [u, v] : edges)
                parent[find(u)] = find(v);
            int root = find(0);
            for (int v = 1; v < V; ++v)
                if (find(v) != root)
                    return;
        }
        assign_legs(genus, edges, deg, n, sink);
    }
};

void check_range(int g, int n, int bound) {
    if (!admitted_range(g, n))
        throw std::invalid_argument("(g,n) outside the admitted range");
    if (3 * g - 3 + n > bound)
        throw std::invalid_argument("3g-3+n exceeds the configured bound");
}

std::vector<std::vector<int>> genus_compositions(int g, int V) {
    std::vector<std::vector<int>> out;
    std::vector<int> h(V, 0);
    std::function<void(int, int)> rec = [&](int v, int left) {
        if (v == V) {
            out.push_back(h);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            h[v] = x;
            rec(v + 1, left - x);
        }
    };
    rec(0, g);
    return out;
}

std::vector<DualGraph> sorted_graphs(std::map<std::string, DualGraph>&& found) {
    std::vector<std::pair<std::string, DualGraph>> items;
    items.reserve(found.size());
    for (auto& [enc, g] : found)
        items.emplace_back(enc, std::move(g));
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        int da = a.second.num_edges(), db = b.second.num_edges();
        if (da != db)
            return da < db;
        return a.first < b.first;
    });
    std::vector<DualGraph> out;
    out.reserve(items.size());
    for (auto& [enc, g] : items)
        out.push_back(std::move(g));
    return out;
}

}  // namespace

std::vector<DualGraph> enumerate_stable_graphs_serial(int g, int n, int bound) {
    check_range(g, n, bound);
    Sink sink;
    int vmax = 2 * g - 2 + n;
    for (int V = 1; V <= vmax; ++V) {
        for (const auto& h : genus_compositions(g, V)) {
            int sum = std::accumulate(h.begin(), h.end(), 0);
            int E = g - sum + V - 1;
            if (E < 0)
                continue;
            PairScan scan;
            scan.init(h, E, n);
            std::vector<int> counts(scan.pairs.size(), 0), deg(V, 0);
            scan.run(0, 0, counts, deg, sink);
        }
    }
    return sorted_graphs(std::move(sink.found));
}

std::vector<DualGraph> enumerate_stable_graphs(int g, int n, const EnumerateOptions& opt) {
    check_range(g, n, opt.bound);
    if (!opt.parallel)
        return enumerate_stable_graphs_serial(g, n, opt.bound);

    // Tasks: (vertex count, genus split, multiplicity of the first pair).
    struct Task {
        std::vector<int> h;
        int E;
        int c0;
    };
    std::vector<Task> tasks;
    int vmax = 2 * g - 2 + n;
    for (int V = 1; V <= vmax; ++V) {
        for (const auto& h : genus_compositions(g, V)) {
            int sum = std::accumulate(h.begin(), h.end(), 0);
            int E = g - sum + V - 1;
            if (E < 0)
                continue;
            for (int c0 = 0; c0 <= E; ++c0)
                tasks.push_back({h, E, c0});
        }
    }

    Sink global;
#pragma omp parallel
    {
        Sink local;
#pragma omp for schedule(dynamic) nowait
        for (long t = 0; t < static_cast<long>(tasks.size()); ++t) {
            const Task& task = tasks[t];
            int V = static_cast<int>(task.h.size());
            PairScan scan;
            scan.init(task.h, task.E, n);
            std::vector<int> counts(scan.pairs.size(), 0), deg(V, 0);
            // pair 0 is (0,0), a loop at vertex 0
            counts[0] = task.c0;
            deg[0] = 2 * task.c0;
            scan.run(1, task.c0, counts, deg, local);
        }
#pragma omp critical
        global.merge(std::move(local));
    }
    return sorted_graphs(std::move(global.found));
}

std::vector<DualGraph> enumerate_weighted_graphs(int g, int n, const std::vector<Rat>& weights,
                                                 const EnumerateOptions& opt) {
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("weight vector length must equal n");
    Rat total = 2 * g - 2;
    for (const Rat& w : weights) {
        if (w <= 0 || w > 1)
            throw std::invalid_argument("weights must lie in (0,1]");
        total += w;
    }
    if (total <= 0)
        throw std::invalid_argument("2g-2+sum(w) must be positive");
    auto graphs = enumerate_stable_graphs(g, n, opt);
    std::vector<DualGraph> out;
    for (auto& gr : graphs)
        if (gr.is_weighted_stable(weights))
            out.push_back(std::move(gr));
    return out;
}

// ---------------------------------------------------------------------------
// Complex assembly
// ---------------------------------------------------------------------------

namespace {

RayLabel make_ray_label(const DualGraph& g) {
    RayLabel lab;
    if (g.is_loop(0)) {
        lab.irreducible = true;
        lab.name = "rho0";
        return lab;
    }
    auto side = [&](int v) {
        std::vector<int> legs;
        for (int i = 0; i < g.num_legs(); ++i)
            if (g.leg_at[i] == v)
                legs.push_back(i + 1);
        return std::make_pair(g.genus[v], legs);
    };
    auto [gu, lu] = side(g.ends[0].first);
    auto [gv, lv] = side(g.ends[0].second);
    if (gu > gv || (gu == gv && lu <= lv)) {
        lab.side_genus = gu;
        lab.side_legs = lu;
    } else {
        lab.side_genus = gv;
        lab.side_legs = lv;
    }
    std::ostringstream os;
    if (lab.side_genus == 1 && lab.side_legs.empty()) {
        lab.name = "rho1";
    } else {
        os << "rho(" << lab.side_genus << ",{";
        for (std::size_t i = 0; i < lab.side_legs.size(); ++i)
            os << (i ? "," : "") << lab.side_legs[i];
        os << "})";
        lab.name = os.str();
    }
    return lab;
}

bool is_banana_shape(const DualGraph& g) {
    return g.num_vertices() == 2 && g.num_edges() == 2 && !g.is_loop(0) && !g.is_loop(1);
}

bool is_loop_tail_shape(const DualGraph& g) {
    return g.num_vertices() == 2 && g.num_edges() == 2 &&
           (g.is_loop(0) != g.is_loop(1));
}

}  // namespace

ConeComplex ConeComplex::build(int g, int n, ComplexKind kind, const std::vector<Rat>& weights,
                               std::vector<DualGraph> graphs) {
    ConeComplex cx;
    cx.g_ = g;
    cx.n_ = n;
    cx.kind_ = kind;
    cx.weights_ = weights;

    cx.cones_.resize(graphs.size());
    cx.ray_labels_.resize(graphs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(graphs.size()); ++i) {
        Cone& c = cx.cones_[i];
        c.id = static_cast<int>(i);
        c.graph = std::move(graphs[i]);
        c.encoding = canonical_encoding(c.graph);
        c.dim = c.graph.num_edges();
        c.aut = automorphisms(c.graph);
        c.folded = c.aut.edge_perms.size() > 1;
    }

    for (const Cone& c : cx.cones_) {
        if (!cx.by_encoding_.emplace(c.encoding, c.id).second)
            throw std::logic_error("duplicate cone encoding in complex");
    }

    // Names and ray labels.
    std::vector<int> per_dim_counter(16, 0);
    for (Cone& c : cx.cones_) {
        if (c.dim == 0) {
            c.name = "smooth";
        } else if (c.dim == 1) {
            RayLabel lab = make_ray_label(c.graph);
            c.name = lab.name;
            cx.ray_labels_[c.id] = lab;
            if (lab.irreducible)
                cx.rho0_ = c.id;
            else if (lab.side_genus == 1 && lab.side_legs.empty())
                cx.rho1_ = c.id;
        } else {
            c.name = "c" + std::to_string(c.dim) + "." + std::to_string(per_dim_counter[c.dim]++);
        }
    }
    for (const Cone& c : cx.cones_)
        cx.by_name_[c.name] = c.id;
    {
        std::vector<int> counter(16, 0);
        for (const Cone& c : cx.cones_) {
            std::string handle = "c" + std::to_string(c.dim) + "." + std::to_string(counter[c.dim]++);
            cx.by_name_.emplace(handle, c.id);
        }
        if (cx.rho1_ >= 0)
            cx.by_name_.emplace("rho(1,{})", cx.rho1_);
        int bananas = 0, loop_tails = 0, banana_id = -1, loop_tail_id = -1;
        for (const Cone& c : cx.cones_) {
            if (is_banana_shape(c.graph)) {
                ++bananas;
                banana_id = c.id;
            }
            if (is_loop_tail_shape(c.graph)) {
                ++loop_tails;
                loop_tail_id = c.id;
            }
        }
        if (bananas == 1)
            cx.by_name_.emplace("banana", banana_id);
        if (loop_tails == 1)
            cx.by_name_.emplace("loop+tail", loop_tail_id);
    }

    // Face maps: one per (cone, edge subset).
    std::vector<std::vector<FaceMap>> per_cone(cx.cones_.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(cx.cones_.size()); ++i) {
        const Cone& c = cx.cones_[i];
        int m = c.dim;
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            FaceMap f;
            f.source = c.id;
            for (int e = 0; e < m; ++e)
                if (mask & (1u << e))
                    f.kept.push_back(e);
            std::vector<int> kept_to_new;
            DualGraph contracted = c.graph.contract_complement(f.kept, &kept_to_new);
            auto cf = canonical_form(contracted);
            auto it = cx.by_encoding_.find(cf.encoding);
            if (it == cx.by_encoding_.end())
                throw std::logic_error("complex is not face-closed: missing contraction target");
            f.target = it->second;
            f.inj.reserve(f.kept.size());
            for (int e : f.kept)
                f.inj.push_back(cf.edge_map[kept_to_new[e]]);
            per_cone[i].push_back(std::move(f));
        }
    }
    for (auto& fs : per_cone)
        for (auto& f : fs)
            cx.faces_.push_back(std::move(f));

    cx.faces_of_.assign(cx.cones_.size(), {});
    cx.maps_onto_.assign(cx.cones_.size(), {});
    for (int i = 0; i < static_cast<int>(cx.faces_.size()); ++i) {
        cx.faces_of_[cx.faces_[i].source].push_back(i);
        cx.maps_onto_[cx.faces_[i].target].push_back(i);
    }
    return cx;
}

ConeComplex ConeComplex::enumerate_stable(int g, int n, const EnumerateOptions& opt) {
    return build(g, n, ComplexKind::Stable, {}, enumerate_stable_graphs(g, n, opt));
}

ConeComplex ConeComplex::enumerate_weighted(int g, int n, const std::vector<Rat>& weights,
                                            const EnumerateOptions& opt) {
    return build(g, n, ComplexKind::Weighted, weights, enumerate_weighted_graphs(g, n, weights, opt));
}

int ConeComplex::find_by_encoding(const std::string& enc) const {
    auto it = by_encoding_.find(enc);
    return it == by_encoding_.end() ? -1 : it->second;
}

int ConeComplex::find_cone(const DualGraph& graph) const {
    return find_by_encoding(canonical_encoding(graph));
}

int ConeComplex::cone_by_name(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        throw std::invalid_argument("unknown cone name: " + name);
    return it->second;
}

const RayLabel& ConeComplex::ray_label(int cone_id) const {
    if (cones_.at(cone_id).dim != 1)
        throw std::invalid_argument("ray label requested for a non-ray cone");
    return ray_labels_.at(cone_id);
}

std::vector<int> ConeComplex::dims_histogram() const {
    int maxd = 0;
    for (const Cone& c : cones_)
        maxd = std::max(maxd, c.dim);
    std::vector<int> h(maxd + 1, 0);
    for (const Cone& c : cones_)
        ++h[c.dim];
    return h;
}

std::vector<int> ConeComplex::open_star(int tau) const {
    std::set<int> star;
    for (int fi : maps_onto_.at(tau))
        star.insert(faces_[fi].source);
    return {star.begin(), star.end()};
}

ConeComplex subcomplex_of(const ConeComplex& parent, const std::vector<int>& keep,
                          ComplexKind kind) {
    std::vector<DualGraph> graphs;
    graphs.reserve(keep.size());
    for (int id : keep)
        graphs.push_back(parent.cone(id).graph);
    ConeComplex sub = ConeComplex::build(parent.g(), parent.n(), kind, parent.weights(),
                                         std::move(graphs));
    return sub;
}

ConeComplex ConeComplex::pseudostable_subcomplex() const {
    std::vector<int> keep;
    std::set<int> star;
    if (rho1_ >= 0) {
        auto s = open_star(rho1_);
        star.insert(s.begin(), s.end());
    }
    for (const Cone& c : cones_)
        if (!star.count(c.id))
            keep.push_back(c.id);

    // The complement of the open star must agree with the pseudostability
    // predicate cone by cone.
    for (const Cone& c : cones_) {
        bool in_keep = !star.count(c.id);
        if (in_keep != c.graph.is_pseudostable())
            throw std::logic_error("open-star complement disagrees with the pseudostable predicate");
    }
    return subcomplex_of(*this, keep, ComplexKind::Pseudostable);
}

nlohmann::ordered_json ConeComplex::to_json() const {
    nlohmann::ordered_json j;
    j["g"] = g_;
    j["n"] = n_;
    j["kind"] = kind_ == ComplexKind::Stable        ? "stable"
                : kind_ == ComplexKind::Pseudostable ? "pseudostable"
                                                     : "weighted";
    if (kind_ == ComplexKind::Weighted) {
        j["weights"] = nlohmann::ordered_json::array();
        for (const Rat& w : weights_)
            j["weights"].push_back(rat_to_string(w));
    }
    j["cones"] = nlohmann::ordered_json::array();
    for (const Cone& c : cones_) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["dim"] = c.dim;
        jc["graph"] = graph_to_json(c.graph);
        jc["aut_order"] = c.aut.order;
        jc["folded"] = c.folded;
        j["cones"].push_back(std::move(jc));
    }
    j["faces"] = nlohmann::ordered_json::array();
    for (const FaceMap& f : faces_) {
        nlohmann::ordered_json jf;
        jf["source"] = f.source;
        jf["target"] = f.target;
        jf["kept_edges"] = f.kept;
        j["faces"].push_back(std::move(jf));
    }
    j["rays"] = nlohmann::ordered_json::array();
    for (const Cone& c : cones_)
        if (c.dim == 1) {
            nlohmann::ordered_json jr;
            jr["cone"] = c.id;
            jr["label"] = c.name;
            j["rays"].push_back(std::move(jr));
        }
    return j;
}

// ---------------------------------------------------------------------------
// Abstract isomorphism of complexes
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> all_perms(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Face maps of `cx` grouped by source, as (target, kept, inj).
struct FaceView {
    const ConeComplex* cx;
    std::vector<std::vector<const FaceMap*>> by_source;
    explicit FaceView(const ConeComplex& c) : cx(&c), by_source(c.num_cones()) {
        for (const auto& f : c.faces())
            by_source[f.source].push_back(&f);
    }
};

}  // namespace

bool complexes_isomorphic(const ConeComplex& a, const ConeComplex& b) {
    if (a.num_cones() != b.num_cones())
        return false;
    if (a.dims_histogram() != b.dims_histogram())
        return false;

    FaceView fa(a), fb(b);
    int N = a.num_cones();
    std::vector<int> mu(N, -1);        // a cone id -> b cone id
    std::vector<int> used(N, 0);
    std::vector<std::vector<int>> pi(N);  // coordinate bijection per matched a-cone

    // process in increasing dimension (ids are sorted by dim already)
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == N)
            return true;
        const Cone& ca = a.cone(i);
        for (int j = 0; j < N; ++j) {
            const Cone& cb = b.cone(j);
            if (used[j] || cb.dim != ca.dim || cb.folded != ca.folded ||
                cb.aut.order != ca.aut.order)
                continue;
            for (const auto& perm : all_perms(ca.dim)) {
                // Aut edge actions must correspond under perm.
                std::set<std::vector<int>> image;
                for (const auto& ep : ca.aut.edge_perms) {
                    std::vector<int> q(ca.dim);
                    for (int x = 0; x < ca.dim; ++x)
                        q[perm[x]] = perm[ep[x]];
                    image.insert(q);
                }
                std::set<std::vector<int>> target(cb.aut.edge_perms.begin(),
                                                  cb.aut.edge_perms.end());
                if (image != target)
                    continue;
                // Every face map of ca must transport to a face map of cb.
                bool ok = true;
                for (const FaceMap* f : fa.by_source[i]) {
                    if (mu[f->target] < 0 && f->target != i) {
                        continue;  // face not yet matched (can't happen: faces have lower dim)
                    }
                    int bt = f->target == i ? j : mu[f->target];
                    const auto& tperm = f->target == i ? perm : pi[f->target];
                    bool found = false;
                    for (const FaceMap* h : fb.by_source[j]) {
                        if (h->target != bt || h->kept.size() != f->kept.size())
                            continue;
                        // match kept sets under perm and injections under tperm
                        std::map<int, int> want;  // b kept edge -> b target edge
                        for (std::size_t p = 0; p < f->kept.size(); ++p)
                            want[perm[f->kept[p]]] = tperm[f->inj[p]];
                        bool same = true;
                        for (std::size_t p = 0; p < h->kept.size() && same; ++p) {
                            auto it = want.find(h->kept[p]);
                            if (it == want.end() || it->second != h->inj[p])
                                same = false;
                        }
                        if (same) {
                            found = true;
                            break;
                        }
                    }
                    if (!found) {
                        ok = false;
                        break;
                    }
                }
                if (!ok)
                    continue;
                mu[i] = j;
                used[j] = 1;
                pi[i] = perm;
                if (rec(i + 1))
                    return true;
                mu[i] = -1;
                used[j] = 0;
            }
        }
        return false;
    };
    return rec(0);
}

}  // namespace tropmod
