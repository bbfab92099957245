#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "tropmod/cone_complex.hpp"
#include "tropmod/piecewise_poly.hpp"

namespace tropmod {

/// A point of a cone complex: a cone id plus one coordinate per edge of that
/// cone.  Zero coordinates are resolved by passing to the minimal face.
struct ConePoint {
    int cone = -1;
    std::vector<Rat> coords;
};

/// Piecewise-linear map of cone complexes, stored per source cone as the
/// integral matrix expressing every target coordinate in the source
/// coordinates.  Construction verifies that each edge ray maps to a single
/// ray (or the origin) with an integer multiplier, that the per-cone maps are
/// the linear extensions of the ray images, and that restriction to a face
/// agrees with the face's own assignment.
class PLMap {
public:
    struct ConeData {
        int target = -1;
        // matrix[t][s]: coefficient of source coordinate s in target coordinate t
        std::vector<std::vector<std::int64_t>> matrix;
    };

    PLMap(const ConeComplex& source, const ConeComplex& target, std::vector<ConeData> data);

    const ConeComplex& source() const { return *src_; }
    const ConeComplex& target() const { return *dst_; }
    const ConeData& on(int source_cone) const { return data_.at(source_cone); }

    ConePoint apply(const ConePoint& p) const;
    PiecewisePoly pullback(const PiecewisePoly& f) const;

    /// Image of the primitive generator of a ray as (target ray id, multiplier);
    /// target id is -1 when the ray is contracted to the origin.
    std::pair<int, std::int64_t> ray_image(int ray_id) const;

    /// True when the map restricted to the given source cone is the identity
    /// onto a cone with the same encoding.
    bool identity_on(int source_cone) const;

    nlohmann::ordered_json to_json() const;

private:
    const ConeComplex* src_;
    const ConeComplex* dst_;
    std::vector<ConeData> data_;

    void verify() const;
};

/// Canonicalizes a point to its minimal supporting face.
ConePoint to_minimal_face(const ConeComplex& cx, const ConePoint& p);

/// The tropical contraction: identity off the open star of rho1; on the star
/// the cone of a graph maps to the cone of its pseudostabilization with the
/// local transfer coordinates (a deleted elliptic tail edge e becomes a loop
/// with coordinate 12 x_e, a deleted genus-0 loop vertex with loop l and edge
/// e becomes a loop with coordinate x_l + 12 x_e).
PLMap build_trop_T(const ConeComplex& stable, const ConeComplex& ps);

/// The weighted-stabilization map for light weights: contracts every edge at
/// a genus-0 vertex whose weighted valency fails, iterating to a fixpoint; in
/// genus one this contracts the rho1 ray to the origin and kills the tail
/// coordinate on its star.
PLMap build_hassett_pi(const ConeComplex& stable, const ConeComplex& weighted);

}  // namespace tropmod
