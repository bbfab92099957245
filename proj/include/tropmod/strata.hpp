#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropmod/piecewise_poly.hpp"
#include "tropmod/pl_map.hpp"

namespace tropmod {

/// Boundary stratum decorated by cotangent-class exponents on half-edges.
/// Normalization: the undecorated stratum class is the gluing pushforward of
/// the fundamental class, with no division by the automorphism count.
struct StrataTerm {
    DualGraph graph;       // canonical representative
    std::string encoding;  // canonical encoding of graph
    std::vector<int> psi;  // exponent per half-edge, canonical orbit representative
    Rat coeff;

    int degree() const;  // edges plus total psi exponent
};

/// Formal rational combination of decorated strata plus an optional formal
/// cusp-class summand; terms are merged per (graph, decoration orbit).
class StrataExpr {
public:
    StrataExpr() = default;

    /// Adds coeff * [graph decorated by psi]; psi is indexed by the graph's
    /// half-edges.  The graph need not be canonical.
    void add(const DualGraph& graph, const std::vector<int>& psi, const Rat& coeff);
    void add_cusp(const Rat& coeff) { cusp_ += coeff; }

    StrataExpr operator+(const StrataExpr& o) const;
    StrataExpr scaled(const Rat& c) const;
    bool operator==(const StrataExpr& o) const;

    bool is_zero() const { return terms_.empty() && cusp_ == 0; }
    const Rat& cusp() const { return cusp_; }
    std::vector<const StrataTerm*> terms() const;

    nlohmann::ordered_json to_json() const;
    std::string to_string() const;

private:
    std::map<std::pair<std::string, std::vector<int>>, StrataTerm> terms_;
    Rat cusp_ = 0;
};

/// The piecewise-polynomial to strata correspondence: each strictly supported
/// part (sigma, c * prod x_e^{b_e}) contributes c/|Aut| times the stratum of
/// sigma's graph with (-psi_left - psi_right)^(b_e - 1) expanded on each edge.
StrataExpr alpha_star(const PiecewisePoly& f);

/// Genus <= 1 psi-correlator.  Genus 0 is the closed form
/// (n-3)!/prod(a_i!); genus 1 reduces by the string and dilaton equations to
/// the normalized base value 1/24.  Zero on dimension mismatch.
Rat correlator(int genus, std::vector<int> exponents);

enum class Side { Stable, Pseudostable };

/// Exact degree of a top-dimensional strata expression: the sum over terms of
/// the coefficient times the product of vertex correlators, plus the cusp
/// coefficient (pseudostable side only).  Ambient genus must be <= 1 and every
/// term must have top degree 3g-3+n.
Rat integrate(const StrataExpr& e, int g, int n, Side side);

/// Pushforward along the contraction.  Supported term shapes: pseudostable
/// graphs move unchanged; top-degree terms over non-pseudostable graphs
/// transfer their evaluated degree to the cusp symbol; the undecorated
/// elliptic-tail divisor dies.  Anything else is rejected.
StrataExpr pushforward_T(const StrataExpr& e, int g, int n);

/// Integral of a top-degree piecewise polynomial on the pseudostable side,
/// computed by pulling back through trop(T) and integrating on the stable
/// side (the contraction has degree one).
Rat integrate_ps(const PiecewisePoly& f, const PLMap& trop_T);

/// Solves deg(d0 d1) + q * deg(d1^2) = 0 for the elliptic-tail multiplier in
/// the boundary pullback ansatz; with the computed (1,2) intersection numbers
/// this yields 24.
Rat solve_contraction_coefficient(const Rat& int_d0_d1, const Rat& int_d1_sq);
Rat solve_contraction_coefficient();  // computes the two integrals on (1,2)

/// The cusp-locus class as a piecewise polynomial on the pseudostable side of
/// (1,n): (phi0^ps)^2 / 6.
PiecewisePoly cusp_class(const ConeComplex& ps);

/// Checks the genus-1 Hodge-class comparison on (1,n): the pullback of
/// phi0^ps/12 equals phi0/12 + phi1 exactly; for n = 2 also compares the
/// pairings of both sides against the two boundary divisors.
bool lambda1_check(int n);

}  // namespace tropmod
