#include "tropmod/strata.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tropmod {

int StrataTerm::degree() const {
    return graph.num_edges() + std::accumulate(psi.begin(), psi.end(), 0);
}

namespace {

// Canonical (graph, decoration) pair: relabel psi along the canonical form,
// then minimize over the half-edge automorphism group.
StrataTerm canonical_term(const DualGraph& graph, const std::vector<int>& psi) {
    auto cf = canonical_form(graph);
    std::vector<int> moved(psi.size(), 0);
    for (int e = 0; e < graph.num_edges(); ++e) {
        int f = cf.edge_map[e];
        int u = cf.vertex_map[graph.ends[e].first];
        // half 2e sits at ends[e].first; in the canonical graph edge f has
        // ends sorted, so the half at the smaller vertex comes first
        bool straight = cf.graph.ends[f].first == u;
        if (cf.graph.ends[f].first == cf.graph.ends[f].second)
            straight = true;  // loop: orientation handled by the orbit pass
        moved[2 * f + (straight ? 0 : 1)] = psi[2 * e];
        moved[2 * f + (straight ? 1 : 0)] = psi[2 * e + 1];
    }
    AutGroup aut = automorphisms(cf.graph);
    std::vector<int> best = moved;
    for (const auto& hp : aut.half_edge_perms) {
        std::vector<int> cand(moved.size(), 0);
        for (std::size_t h = 0; h < moved.size(); ++h)
            cand[hp[h]] = moved[h];
        if (cand < best)
            best = cand;
    }
    StrataTerm t;
    t.graph = std::move(cf.graph);
    t.encoding = std::move(cf.encoding);
    t.psi = std::move(best);
    t.coeff = 0;
    return {std::move(t), std::string()};
}

}  // namespace

void StrataExpr::add(const DualGraph& graph, const std::vector<int>& psi, const Rat& coeff) {
    if (coeff == 0)
        return;
    if (static_cast<int>(psi.size()) != graph.num_half_edges())
        throw std::invalid_argument("decoration vector must cover all half-edges");
    auto [term, unused] = canonical_term(graph, psi);
    auto key = std::make_pair(term.encoding, term.psi);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        term.coeff = coeff;
        terms_.emplace(std::move(key), std::move(term));
    } else {
        it->second.coeff += coeff;
        if (it->second.coeff == 0)
            terms_.erase(it);
    }
}

StrataExpr StrataExpr::operator+(const StrataExpr& o) const {
    StrataExpr r = *this;
    for (const auto& [key, t] : o.terms_) {
        auto it = r.terms_.find(key);
        if (it == r.terms_.end()) {
            r.terms_.emplace(key, t);
        } else {
            it->second.coeff += t.coeff;
            if (it->second.coeff == 0)
                r.terms_.erase(it);
        }
    }
    r.cusp_ += o.cusp_;
    return r;
}

StrataExpr StrataExpr::scaled(const Rat& c) const {
    StrataExpr r;
    if (c == 0)
        return r;
    for (const auto& [key, t] : terms_) {
        StrataTerm s = t;
        s.coeff *= c;
        r.terms_.emplace(key, std::move(s));
    }
    r.cusp_ = cusp_ * c;
    return r;
}

bool StrataExpr::operator==(const StrataExpr& o) const {
    if (cusp_ != o.cusp_ || terms_.size() != o.terms_.size())
        return false;
    for (const auto& [key, t] : terms_) {
        auto it = o.terms_.find(key);
        if (it == o.terms_.end() || it->second.coeff != t.coeff)
            return false;
    }
    return true;
}

std::vector<const StrataTerm*> StrataExpr::terms() const {
    std::vector<const StrataTerm*> out;
    out.reserve(terms_.size());
    for (const auto& [key, t] : terms_)
        out.push_back(&t);
    return out;
}

nlohmann::ordered_json StrataExpr::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [key, t] : terms_) {
        nlohmann::ordered_json jt;
        jt["graph"] = graph_to_json(t.graph);
        jt["decorations"] = nlohmann::ordered_json::array();
        for (std::size_t h = 0; h < t.psi.size(); ++h)
            if (t.psi[h] > 0)
                jt["decorations"].push_back(
                    {{"half_edge", static_cast<int>(h)}, {"exponent", t.psi[h]}});
        jt["coeff"] = rat_to_string(t.coeff);
        j.push_back(std::move(jt));
    }
    if (cusp_ != 0) {
        nlohmann::ordered_json jc;
        jc["cusp"] = rat_to_string(cusp_);
        j.push_back(std::move(jc));
    }
    return j;
}

std::string StrataExpr::to_string() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, t] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << rat_to_string(t.coeff) << "*[" << graph_summary(t.graph);
        for (std::size_t h = 0; h < t.psi.size(); ++h)
            if (t.psi[h] > 0)
                os << " psi(" << h << ")^" << t.psi[h];
        os << "]";
    }
    if (cusp_ != 0) {
        if (!first)
            os << " + ";
        os << rat_to_string(cusp_) << "*cusp";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// alpha_star
// ---------------------------------------------------------------------------

StrataExpr alpha_star(const PiecewisePoly& f) {
    const ConeComplex& cx = f.complex();
    StrataExpr out;
    for (const SupportPart& part : strict_support_decomposition(f)) {
        const Cone& c = cx.cone(part.cone);
        Rat norm = Rat(1) / Rat(Int(c.aut.order));
        for (const auto& [exp, coeff] : part.poly.terms()) {
            // expand prod_e (-psi_a - psi_b)^(exp[e]-1)
            std::vector<int> psi(c.graph.num_half_edges(), 0);
            std::function<void(int, Rat)> expand = [&](int e, Rat acc) {
                if (e == c.dim) {
                    out.add(c.graph, psi, acc * norm);
                    return;
                }
                int b = exp[e] - 1;
                for (int j = 0; j <= b; ++j) {
                    psi[2 * e] = j;
                    psi[2 * e + 1] = b - j;
                    Rat factor = Rat(binomial(b, j)) * ((b % 2) ? -1 : 1);
                    expand(e + 1, acc * factor);
                }
                psi[2 * e] = psi[2 * e + 1] = 0;
            };
            expand(0, coeff);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Correlators
// ---------------------------------------------------------------------------

Rat correlator(int genus, std::vector<int> exps) {
    if (genus < 0 || genus > 1)
        throw std::invalid_argument("correlators implemented for genus 0 and 1 only");
    int n = static_cast<int>(exps.size());
    int total = std::accumulate(exps.begin(), exps.end(), 0);
    if (genus == 0) {
        if (n < 3)
            throw std::invalid_argument("genus 0 correlators need at least 3 insertions");
        if (total != n - 3)
            return 0;
        Rat r = Rat(factorial(n - 3));
        for (int a : exps)
            r /= Rat(factorial(a));
        return r;
    }
    // genus 1
    if (total != n || n < 1)
        return 0;

    static std::map<std::vector<int>, Rat> cache;
    static std::mutex cache_mutex;
    std::sort(exps.begin(), exps.end());
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(exps);
        if (it != cache.end())
            return it->second;
    }

    Rat value = 0;
    if (n == 1) {
        value = Rat(1, 24);  // normalized base value
    } else if (exps.front() == 0) {
        // string equation: remove one exponent-0 insertion
        std::vector<int> rest(exps.begin() + 1, exps.end());
        for (std::size_t j = 0; j < rest.size(); ++j) {
            if (rest[j] == 0)
                continue;
            std::vector<int> next = rest;
            --next[j];
            value += correlator(1, next);
        }
    } else {
        // all exponents >= 1 with total == n forces all equal to 1; dilaton
        std::vector<int> rest(exps.begin(), exps.end() - 1);
        value = Rat(2 * 1 - 2 + static_cast<int>(rest.size())) * correlator(1, rest);
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(std::move(exps), value);
    return value;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

namespace {

Rat term_degree_value(const StrataTerm& t) {
    const DualGraph& g = t.graph;
    Rat prod = 1;
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<int> ins;
        for (int h = 0; h < g.num_half_edges(); ++h)
            if (g.half_edge_vertex(h) == v)
                ins.push_back(t.psi[h]);
        for (int i = 0; i < g.num_legs(); ++i)
            if (g.leg_at[i] == v)
                ins.push_back(0);
        prod *= correlator(g.genus[v], ins);
        if (prod == 0)
            return 0;
    }
    return prod;
}

}  // namespace

Rat integrate(const StrataExpr& e, int g, int n, Side side) {
    if (g > 1)
        throw std::invalid_argument("integration implemented for ambient genus <= 1");
    int top = 3 * g - 3 + n;
    Rat total = 0;
    for (const StrataTerm* t : e.terms()) {
        if (t->graph.total_genus() != g || t->graph.num_legs() != n)
            throw std::invalid_argument("strata term lives on the wrong moduli space");
        if (t->degree() != top)
            throw std::invalid_argument("integration requires top-degree terms");
        if (side == Side::Pseudostable && !t->graph.is_pseudostable())
            throw std::invalid_argument(
                "pseudostable-side term supported on a non-pseudostable stratum; integrate the "
                "generating piecewise polynomial through the pullback pipeline instead");
        total += t->coeff * term_degree_value(*t);
    }
    if (e.cusp() != 0) {
        if (side != Side::Pseudostable)
            throw std::invalid_argument("cusp terms only exist on the pseudostable side");
        total += e.cusp();
    }
    return total;
}

StrataExpr pushforward_T(const StrataExpr& e, int g, int n) {
    int top = 3 * g - 3 + n;
    StrataExpr out;
    for (const StrataTerm* t : e.terms()) {
        if (t->graph.is_pseudostable()) {
            out.add(t->graph, t->psi, t->coeff);
            continue;
        }
        if (t->degree() == top) {
            // zero-cycle over the contracted locus: its degree moves to the cusp
            out.add_cusp(t->coeff * term_degree_value(*t));
            continue;
        }
        bool undecorated = std::all_of(t->psi.begin(), t->psi.end(), [](int a) { return a == 0; });
        bool elliptic_tail_divisor = false;
        if (t->graph.num_edges() == 1 && !t->graph.is_loop(0)) {
            for (int v : {t->graph.ends[0].first, t->graph.ends[0].second})
                if (t->graph.genus[v] == 1 && t->graph.legs_at(v) == 0 &&
                    t->graph.valence(v) == 1)
                    elliptic_tail_divisor = true;
        }
        if (undecorated && elliptic_tail_divisor)
            continue;  // the contraction kills the divisor class
        throw std::invalid_argument("pushforward not defined for this term shape");
    }
    out.add_cusp(e.cusp());
    return out;
}

Rat integrate_ps(const PiecewisePoly& f, const PLMap& trop_T) {
    if (&f.complex() != &trop_T.target())
        throw std::invalid_argument("integrate_ps input must live on the pseudostable complex");
    const ConeComplex& stable = trop_T.source();
    return integrate(alpha_star(trop_T.pullback(f)), stable.g(), stable.n(), Side::Stable);
}

Rat solve_contraction_coefficient(const Rat& int_d0_d1, const Rat& int_d1_sq) {
    if (int_d1_sq == 0)
        throw std::invalid_argument("degenerate linear solve");
    return -int_d0_d1 / int_d1_sq;
}

Rat solve_contraction_coefficient() {
    ConeComplex stable = ConeComplex::enumerate_stable(1, 2);
    PiecewisePoly p0 = phi_ray(stable, stable.rho0());
    PiecewisePoly p1 = phi_ray(stable, stable.rho1());
    Rat d0d1 = integrate(alpha_star(p0 * p1), 1, 2, Side::Stable) * 2;
    Rat d1sq = integrate(alpha_star(p1 * p1), 1, 2, Side::Stable);
    return solve_contraction_coefficient(d0d1, d1sq);
}

PiecewisePoly cusp_class(const ConeComplex& ps) {
    if (ps.kind() != ComplexKind::Pseudostable || ps.g() != 1 || ps.n() < 2)
        throw std::invalid_argument("cusp_class expects the pseudostable complex of (1,n), n >= 2");
    PiecewisePoly p0 = phi_ray(ps, ps.rho0());
    return (p0 * p0).scaled(Rat(1, 6));
}

bool lambda1_check(int n) {
    if (n < 2)
        throw std::invalid_argument("lambda1_check needs n >= 2");
    ConeComplex stable = ConeComplex::enumerate_stable(1, n);
    ConeComplex ps = stable.pseudostable_subcomplex();
    PLMap trop_T = build_trop_T(stable, ps);

    PiecewisePoly lhs = trop_T.pullback(phi_ray(ps, ps.rho0()).scaled(Rat(1, 12)));
    PiecewisePoly rhs =
        phi_ray(stable, stable.rho0()).scaled(Rat(1, 12)) + phi_ray(stable, stable.rho1());
    if (!(lhs == rhs))
        return false;

    if (n == 2) {
        PiecewisePoly p0 = phi_ray(stable, stable.rho0());
        PiecewisePoly p1 = phi_ray(stable, stable.rho1());
        auto pair_with = [&](const PiecewisePoly& f, const PiecewisePoly& divisor_phi,
                             const Rat& mult) {
            return integrate(alpha_star(f * divisor_phi), 1, 2, Side::Stable) * mult;
        };
        // against delta0 = 2 alpha*(phi0) and delta1 = alpha*(phi1)
        Rat l0 = pair_with(lhs, p0, 2), r0 = pair_with(rhs, p0, 2);
        Rat l1 = pair_with(lhs, p1, 1), r1 = pair_with(rhs, p1, 1);
        if (l0 != r0 || l1 != r1)
            return false;
        if (l0 != 1 || l1 != 0)
            return false;
    }
    return true;
}

}  // namespace tropmod
