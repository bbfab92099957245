#include "tropmod/pl_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropmod {

namespace {

std::vector<std::vector<std::int64_t>> identity_matrix(int n) {
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

}  // namespace

PLMap::PLMap(const ConeComplex& source, const ConeComplex& target, std::vector<ConeData> data)
    : src_(&source), dst_(&target), data_(std::move(data)) {
    if (static_cast<int>(data_.size()) != source.num_cones())
        throw std::invalid_argument("PL map needs data for every source cone");
    for (const Cone& c : source.cones()) {
        const ConeData& d = data_[c.id];
        const Cone& t = target.cone(d.target);
        if (static_cast<int>(d.matrix.size()) != t.dim)
            throw std::invalid_argument("PL map matrix has wrong row count");
        for (const auto& row : d.matrix) {
            if (static_cast<int>(row.size()) != c.dim)
                throw std::invalid_argument("PL map matrix has wrong column count");
            for (auto v : row)
                if (v < 0)
                    throw std::invalid_argument("PL map matrix must be non-negative");
        }
    }
    verify();
}

void PLMap::verify() const {
    // Each edge ray of each cone must map to a multiple of a single target
    // coordinate (a ray of the target cone) or to zero.
    for (const Cone& c : src_->cones()) {
        const ConeData& d = data_[c.id];
        for (int s = 0; s < c.dim; ++s) {
            int hits = 0;
            for (const auto& row : d.matrix)
                if (row[s] != 0)
                    ++hits;
            if (hits > 1)
                throw std::invalid_argument("a source ray maps into the interior of a cone");
        }
    }
    // Restriction to every face agrees with the face's own assignment:
    // A_sigma composed with the face embedding equals some face embedding of
    // the target composed with A_tau.
    for (const FaceMap& f : src_->faces()) {
        const ConeData& big = data_[f.source];
        const ConeData& small = data_[f.target];
        const Cone& tau = src_->cone(f.target);
        const Cone& big_target = dst_->cone(big.target);
        const Cone& small_target = dst_->cone(small.target);

        // B = A_sigma * embed_f, a (dim big_target) x (dim tau) matrix.
        std::vector<std::vector<std::int64_t>> B(
            big_target.dim, std::vector<std::int64_t>(tau.dim, 0));
        for (int t = 0; t < big_target.dim; ++t)
            for (std::size_t p = 0; p < f.kept.size(); ++p)
                B[t][f.inj[p]] += big.matrix[t][f.kept[p]];

        bool matched = false;
        for (int fi : dst_->faces_of(big.target)) {
            const FaceMap& h = dst_->faces()[fi];
            if (h.target != small.target || static_cast<int>(h.kept.size()) != small_target.dim)
                continue;
            // C = embed_h * A_tau
            std::vector<std::vector<std::int64_t>> C(
                big_target.dim, std::vector<std::int64_t>(tau.dim, 0));
            for (std::size_t p = 0; p < h.kept.size(); ++p)
                for (int s = 0; s < tau.dim; ++s)
                    C[h.kept[p]][s] = small.matrix[h.inj[p]][s];
            if (B == C) {
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::invalid_argument("PL map does not restrict to faces consistently");
    }
}

ConePoint to_minimal_face(const ConeComplex& cx, const ConePoint& p) {
    const Cone& c = cx.cone(p.cone);
    if (static_cast<int>(p.coords.size()) != c.dim)
        throw std::invalid_argument("point has wrong number of coordinates");
    std::vector<int> support;
    for (int i = 0; i < c.dim; ++i) {
        if (p.coords[i] < 0)
            throw std::invalid_argument("point has a negative coordinate");
        if (p.coords[i] > 0)
            support.push_back(i);
    }
    if (static_cast<int>(support.size()) == c.dim)
        return p;
    for (int fi : cx.faces_of(p.cone)) {
        const FaceMap& f = cx.faces()[fi];
        if (f.kept != support)
            continue;
        ConePoint q;
        q.cone = f.target;
        q.coords.assign(cx.cone(f.target).dim, Rat(0));
        for (std::size_t k = 0; k < f.kept.size(); ++k)
            q.coords[f.inj[k]] = p.coords[f.kept[k]];
        return q;
    }
    throw std::logic_error("missing face map for point support");
}

ConePoint PLMap::apply(const ConePoint& p) const {
    ConePoint q = to_minimal_face(*src_, p);
    const ConeData& d = data_[q.cone];
    ConePoint r;
    r.cone = d.target;
    r.coords.assign(dst_->cone(d.target).dim, Rat(0));
    for (std::size_t t = 0; t < d.matrix.size(); ++t)
        for (std::size_t s = 0; s < d.matrix[t].size(); ++s)
            r.coords[t] += Rat(d.matrix[t][s]) * q.coords[s];
    return to_minimal_face(*dst_, r);
}

PiecewisePoly PLMap::pullback(const PiecewisePoly& f) const {
    if (&f.complex() != dst_)
        throw std::invalid_argument("pullback input must live on the target complex");
    std::vector<Poly> parts;
    parts.reserve(src_->num_cones());
    for (const Cone& c : src_->cones()) {
        const ConeData& d = data_[c.id];
        parts.push_back(f.on(d.target).substitute_linear(d.matrix, c.dim));
    }
    return PiecewisePoly(*src_, std::move(parts));
}

std::pair<int, std::int64_t> PLMap::ray_image(int ray_id) const {
    const Cone& c = src_->cone(ray_id);
    if (c.dim != 1)
        throw std::invalid_argument("ray_image requires a ray");
    const ConeData& d = data_[ray_id];
    for (std::size_t t = 0; t < d.matrix.size(); ++t)
        if (d.matrix[t][0] != 0) {
            // locate the ray of the target cone carrying coordinate t
            const Cone& tc = dst_->cone(d.target);
            if (tc.dim == 1)
                return {d.target, d.matrix[t][0]};
            for (int fi : dst_->faces_of(d.target)) {
                const FaceMap& f = dst_->faces()[fi];
                if (f.kept.size() == 1 && f.kept[0] == static_cast<int>(t))
                    return {f.target, d.matrix[t][0]};
            }
            throw std::logic_error("missing one-edge face of target cone");
        }
    return {-1, 0};  // contracted to the origin
}

bool PLMap::identity_on(int source_cone) const {
    const Cone& c = src_->cone(source_cone);
    const ConeData& d = data_[source_cone];
    return dst_->cone(d.target).encoding == c.encoding && d.matrix == identity_matrix(c.dim);
}

nlohmann::ordered_json PLMap::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const Cone& c : src_->cones()) {
        nlohmann::ordered_json e;
        e["target"] = data_[c.id].target;
        e["matrix"] = data_[c.id].matrix;
        j[std::to_string(c.id)] = std::move(e);
    }
    return j;
}

// ---------------------------------------------------------------------------
// The two maps
// ---------------------------------------------------------------------------

PLMap build_trop_T(const ConeComplex& stable, const ConeComplex& ps) {
    if (stable.kind() != ComplexKind::Stable || ps.kind() != ComplexKind::Pseudostable)
        throw std::invalid_argument("build_trop_T expects a stable source and pseudostable target");
    if (stable.g() != ps.g() || stable.n() != ps.n())
        throw std::invalid_argument("complex (g,n) mismatch");

    // The pseudostable complex must be exactly the complement of the open star.
    std::vector<char> in_star(stable.num_cones(), 0);
    if (stable.rho1() >= 0)
        for (int id : stable.open_star(stable.rho1()))
            in_star[id] = 1;
    for (const Cone& c : stable.cones()) {
        bool present = ps.find_by_encoding(c.encoding) >= 0;
        if (present == static_cast<bool>(in_star[c.id]))
            throw std::invalid_argument(
                "pseudostable complex does not match the open-star complement");
    }

    std::vector<PLMap::ConeData> data(stable.num_cones());
    for (const Cone& c : stable.cones()) {
        auto p = pseudostabilize(c.graph);
        auto cf = canonical_form(p.graph);
        int target = ps.find_by_encoding(cf.encoding);
        if (target < 0)
            throw std::logic_error("pseudostabilization left the pseudostable complex");
        PLMap::ConeData d;
        d.target = target;
        d.matrix.assign(ps.cone(target).dim, std::vector<std::int64_t>(c.dim, 0));
        for (int r = 0; r < p.graph.num_edges(); ++r)
            d.matrix[cf.edge_map[r]] = p.transfer[r];
        data[c.id] = std::move(d);
    }
    PLMap map(stable, ps, std::move(data));

    // Witness the characterization: rho1 to 12 e0, all other rays identical,
    // identity off the star.
    for (const Cone& c : stable.cones()) {
        if (c.dim == 1) {
            auto [ray, mult] = map.ray_image(c.id);
            if (c.id == stable.rho1()) {
                if (ray != map.target().rho0() || mult != 12)
                    throw std::logic_error("trop(T) must send e1 to 12 e0");
            } else if (mult != 1 || map.target().cone(ray).encoding != c.encoding) {
                throw std::logic_error("trop(T) must send other rays identically");
            }
        }
        if (!in_star[c.id] && !map.identity_on(c.id))
            throw std::logic_error("trop(T) must be the identity off the open star of rho1");
    }
    return map;
}

PLMap build_hassett_pi(const ConeComplex& stable, const ConeComplex& weighted) {
    if (stable.kind() != ComplexKind::Stable || weighted.kind() != ComplexKind::Weighted)
        throw std::invalid_argument("build_hassett_pi expects a stable source and weighted target");
    if (stable.g() != weighted.g() || stable.n() != weighted.n())
        throw std::invalid_argument("complex (g,n) mismatch");
    const std::vector<Rat>& w = weighted.weights();

    std::vector<PLMap::ConeData> data(stable.num_cones());
    for (const Cone& c : stable.cones()) {
        DualGraph cur = c.graph;
        std::vector<int> orig_of(cur.num_edges());
        for (int i = 0; i < cur.num_edges(); ++i)
            orig_of[i] = i;

        // weighted stabilization: contract the edge at each failing genus-0
        // vertex until the predicate holds
        for (;;) {
            int bad = -1;
            for (int v = 0; v < cur.num_vertices() && bad < 0; ++v) {
                if (cur.genus[v] != 0)
                    continue;
                Rat wval = cur.edge_valence(v);
                for (int i = 0; i < cur.num_legs(); ++i)
                    if (cur.leg_at[i] == v)
                        wval += w[i];
                if (wval <= 2)
                    bad = v;
            }
            if (bad < 0)
                break;
            int dying = -1;
            for (int e = 0; e < cur.num_edges(); ++e)
                if (!cur.is_loop(e) && (cur.ends[e].first == bad || cur.ends[e].second == bad)) {
                    if (dying >= 0)
                        throw std::logic_error("failing vertex with more than one edge");
                    dying = e;
                }
            if (dying < 0)
                throw std::logic_error("failing vertex without a contractible edge");
            std::vector<int> keep;
            for (int e = 0; e < cur.num_edges(); ++e)
                if (e != dying)
                    keep.push_back(e);
            std::vector<int> kept_to_new;
            DualGraph next = cur.contract_complement(keep, &kept_to_new);
            std::vector<int> next_orig(next.num_edges(), -1);
            for (int e : keep)
                next_orig[kept_to_new[e]] = orig_of[e];
            cur = std::move(next);
            orig_of = std::move(next_orig);
        }

        auto cf = canonical_form(cur);
        int target = weighted.find_by_encoding(cf.encoding);
        if (target < 0)
            throw std::logic_error("weighted stabilization left the weighted complex");
        PLMap::ConeData d;
        d.target = target;
        d.matrix.assign(weighted.cone(target).dim, std::vector<std::int64_t>(c.dim, 0));
        for (int r = 0; r < cur.num_edges(); ++r)
            d.matrix[cf.edge_map[r]][orig_of[r]] = 1;
        data[c.id] = std::move(d);
    }
    return PLMap(stable, weighted, std::move(data));
}

}  // namespace tropmod
