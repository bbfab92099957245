#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tropmod/cone_complex.hpp"
#include "tropmod/polynomial.hpp"

namespace tropmod {

/// Element of PP(Sigma): one polynomial per cone in that cone's edge
/// coordinates, invariant under the cone's automorphism action and compatible
/// with every face restriction.  Both conditions are checked on construction.
class PiecewisePoly {
public:
    PiecewisePoly(const ConeComplex& cx, std::vector<Poly> parts, bool check = true);

    static PiecewisePoly zero(const ConeComplex& cx);
    static PiecewisePoly constant(const ConeComplex& cx, const Rat& c);

    const ConeComplex& complex() const { return *cx_; }
    const Poly& on(int cone_id) const { return parts_.at(cone_id); }

    bool is_zero() const;
    bool same_complex(const PiecewisePoly& o) const { return cx_ == o.cx_; }

    PiecewisePoly operator+(const PiecewisePoly& o) const;
    PiecewisePoly operator-(const PiecewisePoly& o) const;
    PiecewisePoly operator*(const PiecewisePoly& o) const;
    PiecewisePoly scaled(const Rat& c) const;
    PiecewisePoly pow(int k) const;
    bool operator==(const PiecewisePoly& o) const;

    /// Degree of the top-dimensional parts when the function is homogeneous of
    /// a single degree across cones; -1 for zero, throws when mixed.
    int homogeneous_degree() const;

    nlohmann::ordered_json to_json() const;
    std::string to_string() const;

private:
    const ConeComplex* cx_;
    std::vector<Poly> parts_;

    void check_invariants() const;
};

/// Slope-one function of a ray: on each cone the sum of the coordinates of
/// the edges whose one-edge contraction lands on that ray.
PiecewisePoly phi_ray(const ConeComplex& cx, int ray_id);

/// The piecewise quadratic with restriction sum of x_e^2 over the same edges.
PiecewisePoly Phi_ray(const ConeComplex& cx, int ray_id);

/// Square-free monomial of a cone, star-extended by the subset-sum rule: on a
/// cone tau it is the sum over edge subsets S with tau/(complement of S)
/// isomorphic to sigma of the monomial prod_{e in S} x_e.
PiecewisePoly phi_cone(const ConeComplex& cx, int cone_id);

/// Subset-sum extension of an Aut-invariant polynomial living on one cone.
PiecewisePoly extend_from_cone(const ConeComplex& cx, int cone_id, const Poly& m);

struct SupportPart {
    int cone;
    Poly poly;  // divisible by the product of all cone coordinates
};

/// Writes f as a sum of subset-sum extensions of strictly supported
/// polynomials, one per cone, processed in increasing dimension.  Throws when
/// a residue is not divisible by the full coordinate product (which signals a
/// face-incompatible input).
std::vector<SupportPart> strict_support_decomposition(const PiecewisePoly& f);

}  // namespace tropmod
