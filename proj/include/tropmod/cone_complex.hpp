#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropmod/dual_graph.hpp"

namespace tropmod {

/// One cone per isomorphism class of graphs: coordinates are indexed by the
/// edges of the canonical representative, the automorphism group acts on them,
/// and the cone is folded when that action is nontrivial.
struct Cone {
    int id = -1;
    DualGraph graph;  // canonical representative
    std::string encoding;
    int dim = 0;  // number of edges
    AutGroup aut;
    bool folded = false;
    std::string name;
};

/// Face map recording one way of contracting the complement of `kept` in the
/// source cone: kept[p] is a source edge and inj[p] its edge in the target
/// cone under a fixed isomorphism.
struct FaceMap {
    int source = -1;
    int target = -1;
    std::vector<int> kept;
    std::vector<int> inj;
};

struct RayLabel {
    bool irreducible = false;  // the one-loop ray rho0
    int side_genus = 0;        // i of rho_{i,I}
    std::vector<int> side_legs;
    std::string name;  // "rho0", "rho1", "rho(1,{2})", ...
};

enum class ComplexKind { Stable, Pseudostable, Weighted };

struct EnumerateOptions {
    int bound = 6;         // maximum 3g-3+n accepted
    bool parallel = true;  // OpenMP candidate scan
};

class ConeComplex {
public:
    int g() const { return g_; }
    int n() const { return n_; }
    ComplexKind kind() const { return kind_; }
    const std::vector<Rat>& weights() const { return weights_; }

    const std::vector<Cone>& cones() const { return cones_; }
    const Cone& cone(int id) const { return cones_.at(id); }
    int num_cones() const { return static_cast<int>(cones_.size()); }
    const std::vector<FaceMap>& faces() const { return faces_; }
    const std::vector<int>& faces_of(int source) const { return faces_of_.at(source); }
    const std::vector<int>& maps_onto(int target) const { return maps_onto_.at(target); }

    int find_by_encoding(const std::string& enc) const;  // -1 if absent
    int find_cone(const DualGraph& graph) const;
    /// Resolves "smooth", "rho0", "rho1", "rho(i,{..})", "banana", "loop+tail"
    /// or "c<dim>.<index>"; throws on unknown or ambiguous names.
    int cone_by_name(const std::string& name) const;

    int rho0() const { return rho0_; }  // -1 when absent
    int rho1() const { return rho1_; }
    const std::vector<RayLabel>& ray_labels() const { return ray_labels_; }
    const RayLabel& ray_label(int cone_id) const;

    std::vector<int> dims_histogram() const;  // count of cones per dimension

    /// Cones admitting tau as a face (including tau itself).
    std::vector<int> open_star(int tau) const;

    /// The face-closed complement of the open star of rho1; checked to agree
    /// with the pseudostability predicate cone by cone.
    ConeComplex pseudostable_subcomplex() const;

    nlohmann::ordered_json to_json() const;

    static ConeComplex enumerate_stable(int g, int n, const EnumerateOptions& opt = {});
    static ConeComplex enumerate_weighted(int g, int n, const std::vector<Rat>& weights,
                                          const EnumerateOptions& opt = {});

private:
    int g_ = 0, n_ = 0;
    ComplexKind kind_ = ComplexKind::Stable;
    std::vector<Rat> weights_;
    std::vector<Cone> cones_;
    std::vector<FaceMap> faces_;
    std::vector<std::vector<int>> faces_of_;
    std::vector<std::vector<int>> maps_onto_;
    std::map<std::string, int> by_encoding_;
    std::map<std::string, int> by_name_;
    int rho0_ = -1, rho1_ = -1;
    std::vector<RayLabel> ray_labels_;  // indexed by cone id (empty label off rays)

    static ConeComplex build(int g, int n, ComplexKind kind, const std::vector<Rat>& weights,
                             std::vector<DualGraph> graphs);
    friend ConeComplex subcomplex_of(const ConeComplex& parent, const std::vector<int>& keep,
                                     ComplexKind kind);
};

/// All isomorphism classes of stable dual graphs for (g,n), canonical
/// representatives sorted by (dim, encoding).  The parallel scan and the
/// serial reference implementation produce identical output.
std::vector<DualGraph> enumerate_stable_graphs(int g, int n, const EnumerateOptions& opt = {});
std::vector<DualGraph> enumerate_stable_graphs_serial(int g, int n, int bound = 6);

std::vector<DualGraph> enumerate_weighted_graphs(int g, int n, const std::vector<Rat>& weights,
                                                 const EnumerateOptions& opt = {});

/// Abstract cone-complex isomorphism: a dimension-preserving bijection of
/// cones together with coordinate bijections compatible with all face maps
/// (graphs are ignored; only the integral combinatorics matters).
bool complexes_isomorphic(const ConeComplex& a, const ConeComplex& b);

}  // namespace tropmod
