#include "tropmod/piecewise_poly.hpp"

#include <stdexcept>

namespace tropmod {

PiecewisePoly::PiecewisePoly(const ConeComplex& cx, std::vector<Poly> parts, bool check)
    : cx_(&cx), parts_(std::move(parts)) {
    if (static_cast<int>(parts_.size()) != cx.num_cones())
        throw std::invalid_argument("piecewise polynomial needs one part per cone");
    for (const Cone& c : cx.cones())
        if (parts_[c.id].nvars() != c.dim)
            throw std::invalid_argument("cone part has wrong number of variables");
    if (check)
        check_invariants();
}

void PiecewisePoly::check_invariants() const {
    for (const Cone& c : cx_->cones())
        if (!parts_[c.id].invariant_under(c.aut.edge_perms))
            throw std::invalid_argument("cone part is not invariant under the cone automorphisms");
    for (const FaceMap& f : cx_->faces()) {
        const Cone& tgt = cx_->cone(f.target);
        Poly restricted = parts_[f.source].restrict_rename(f.kept, f.inj, tgt.dim);
        if (!(restricted == parts_[f.target]))
            throw std::invalid_argument("face compatibility violated");
    }
}

PiecewisePoly PiecewisePoly::zero(const ConeComplex& cx) {
    std::vector<Poly> parts;
    parts.reserve(cx.num_cones());
    for (const Cone& c : cx.cones())
        parts.emplace_back(c.dim);
    return PiecewisePoly(cx, std::move(parts), false);
}

PiecewisePoly PiecewisePoly::constant(const ConeComplex& cx, const Rat& c) {
    std::vector<Poly> parts;
    parts.reserve(cx.num_cones());
    for (const Cone& cone : cx.cones())
        parts.push_back(Poly::constant(cone.dim, c));
    return PiecewisePoly(cx, std::move(parts), false);
}

bool PiecewisePoly::is_zero() const {
    for (const Poly& p : parts_)
        if (!p.is_zero())
            return false;
    return true;
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
    if (!same_complex(o))
        throw std::invalid_argument("piecewise polynomials live on different complexes");
    std::vector<Poly> parts;
    parts.reserve(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i)
        parts.push_back(parts_[i] + o.parts_[i]);
    return PiecewisePoly(*cx_, std::move(parts));
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const {
    return *this + o.scaled(-1);
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& o) const {
    if (!same_complex(o))
        throw std::invalid_argument("piecewise polynomials live on different complexes");
    std::vector<Poly> parts;
    parts.reserve(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i)
        parts.push_back(parts_[i] * o.parts_[i]);
    return PiecewisePoly(*cx_, std::move(parts));
}

PiecewisePoly PiecewisePoly::scaled(const Rat& c) const {
    std::vector<Poly> parts;
    parts.reserve(parts_.size());
    for (const Poly& p : parts_)
        parts.push_back(p.scaled(c));
    return PiecewisePoly(*cx_, std::move(parts), false);
}

PiecewisePoly PiecewisePoly::pow(int k) const {
    PiecewisePoly r = constant(*cx_, 1);
    for (int i = 0; i < k; ++i)
        r = r * *this;
    return r;
}

bool PiecewisePoly::operator==(const PiecewisePoly& o) const {
    if (!same_complex(o))
        return false;
    for (std::size_t i = 0; i < parts_.size(); ++i)
        if (!(parts_[i] == o.parts_[i]))
            return false;
    return true;
}

int PiecewisePoly::homogeneous_degree() const {
    int deg = -1;
    for (const Poly& p : parts_) {
        if (p.is_zero())
            continue;
        int d = 0;
        if (!p.is_homogeneous(&d))
            throw std::invalid_argument("piecewise polynomial is not homogeneous");
        if (deg >= 0 && deg != d)
            throw std::invalid_argument("piecewise polynomial has mixed degrees");
        deg = d;
    }
    return deg;
}

nlohmann::ordered_json PiecewisePoly::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const Cone& c : cx_->cones()) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [e, k] : parts_[c.id].terms()) {
            nlohmann::ordered_json t;
            t["coeff"] = rat_to_string(k);
            t["exponents"] = e;
            terms.push_back(std::move(t));
        }
        j[std::to_string(c.id)] = std::move(terms);
    }
    return j;
}

std::string PiecewisePoly::to_string() const {
    std::string s;
    for (const Cone& c : cx_->cones()) {
        if (parts_[c.id].is_zero())
            continue;
        if (!s.empty())
            s += "; ";
        s += c.name + ": " + parts_[c.id].to_string();
    }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// target id of the face keeping exactly edge e of cone sigma
int edge_ray(const ConeComplex& cx, int sigma, int e) {
    for (int fi : cx.faces_of(sigma)) {
        const FaceMap& f = cx.faces()[fi];
        if (f.kept.size() == 1 && f.kept[0] == e)
            return f.target;
    }
    throw std::logic_error("missing one-edge face map");
}

}  // namespace

PiecewisePoly phi_ray(const ConeComplex& cx, int ray_id) {
    if (cx.cone(ray_id).dim != 1)
        throw std::invalid_argument("phi_ray requires a ray");
    std::vector<Poly> parts;
    parts.reserve(cx.num_cones());
    for (const Cone& c : cx.cones()) {
        Poly p(c.dim);
        for (int e = 0; e < c.dim; ++e)
            if (edge_ray(cx, c.id, e) == ray_id)
                p = p + Poly::variable(c.dim, e);
        parts.push_back(std::move(p));
    }
    return PiecewisePoly(cx, std::move(parts));
}

PiecewisePoly Phi_ray(const ConeComplex& cx, int ray_id) {
    if (cx.cone(ray_id).dim != 1)
        throw std::invalid_argument("Phi_ray requires a ray");
    std::vector<Poly> parts;
    parts.reserve(cx.num_cones());
    for (const Cone& c : cx.cones()) {
        Poly p(c.dim);
        for (int e = 0; e < c.dim; ++e)
            if (edge_ray(cx, c.id, e) == ray_id)
                p = p + Poly::variable(c.dim, e) * Poly::variable(c.dim, e);
        parts.push_back(std::move(p));
    }
    return PiecewisePoly(cx, std::move(parts));
}

PiecewisePoly extend_from_cone(const ConeComplex& cx, int cone_id, const Poly& m) {
    const Cone& src = cx.cone(cone_id);
    if (m.nvars() != src.dim)
        throw std::invalid_argument("polynomial does not live on the given cone");
    if (!m.invariant_under(src.aut.edge_perms))
        throw std::invalid_argument("subset-sum extension needs an Aut-invariant polynomial");
    std::vector<Poly> parts;
    parts.reserve(cx.num_cones());
    for (const Cone& c : cx.cones()) {
        Poly p(c.dim);
        for (int fi : cx.faces_of(c.id)) {
            const FaceMap& f = cx.faces()[fi];
            if (f.target != cone_id)
                continue;
            // pull m through the identification: target var inj[p] is source
            // var kept[p] of this cone
            std::vector<int> tgt_to_src(src.dim, -1);
            for (std::size_t q = 0; q < f.kept.size(); ++q)
                tgt_to_src[f.inj[q]] = f.kept[q];
            Poly copy(c.dim);
            for (const auto& [e, k] : m.terms()) {
                std::vector<int> exp(c.dim, 0);
                for (int i = 0; i < src.dim; ++i)
                    exp[tgt_to_src[i]] += e[i];
                copy.add_term(exp, k);
            }
            p = p + copy;
        }
        parts.push_back(std::move(p));
    }
    return PiecewisePoly(cx, std::move(parts));
}

PiecewisePoly phi_cone(const ConeComplex& cx, int cone_id) {
    const Cone& c = cx.cone(cone_id);
    std::vector<int> ones(c.dim, 1);
    return extend_from_cone(cx, cone_id, Poly::monomial(c.dim, ones, 1));
}

std::vector<SupportPart> strict_support_decomposition(const PiecewisePoly& f) {
    const ConeComplex& cx = f.complex();
    std::vector<SupportPart> parts;
    std::vector<PiecewisePoly> extensions;
    // cone ids are sorted by dimension
    for (const Cone& c : cx.cones()) {
        Poly residue = f.on(c.id);
        for (const PiecewisePoly& ext : extensions)
            residue = residue - ext.on(c.id);
        if (residue.is_zero())
            continue;
        if (!residue.fully_supported())
            throw std::invalid_argument(
                "strict support decomposition failed: residue not divisible by the coordinate "
                "product (face-incompatible input)");
        if (!residue.invariant_under(c.aut.edge_perms))
            throw std::logic_error("decomposition residue lost Aut-invariance");
        parts.push_back({c.id, residue});
        extensions.push_back(extend_from_cone(cx, c.id, residue));
    }
    return parts;
}

}  // namespace tropmod
