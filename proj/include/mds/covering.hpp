// covering.hpp -- the covering system (X~, sigma~, tau) materialized as the
// backward-path space of the tail graph, with an exact clopen calculus:
// cylinders, locally constant functions, cylinder sets, eventually periodic
// tail points, the separation test and the tau-determinism report.
//
// A point of X~ is an infinite backward path x_0 <-(i_0)- x_1 <-(i_1)- ...
// of the tail graph.  A depth-D cylinder pins the first D labels and D+1
// vertices; since x_k = sigma_{i_k}(x_{k+1}), it is determined by the label
// word together with the deepest vertex, which must support an infinite
// continuation (be "live").

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mds/dynsys.hpp"
#include "mds/scalar.hpp"

namespace mds {

struct TailGraph {
    DynSys sys;
    std::vector<char> live;  // greatest fixpoint of "has an incoming edge from a live vertex"
    // preimages[x] = all (i, y) with sigma_i(y) = x, sorted
    std::vector<std::vector<std::pair<int, int>>> preimages;

    int live_count() const;
};

TailGraph build_tail_graph(const DynSys& sys);
std::string to_dot(const TailGraph& graph);

struct Cylinder {
    Word labels;                // i_0 ... i_{D-1}
    std::vector<int> vertices;  // x_0 ... x_D with sigma_{i_k}(x_{k+1}) = x_k
    int depth() const { return static_cast<int>(labels.size()); }
};

// All depth-D cylinders of a tail graph in a fixed order (label word
// lexicographic, then deepest vertex by live rank).
class CylinderComplex {
public:
    CylinderComplex(const TailGraph& graph, int depth);

    int depth() const { return depth_; }
    int count() const { return static_cast<int>(cyls_.size()); }
    const Cylinder& cylinder(int idx) const { return cyls_[idx]; }

    int index_of(const Word& labels, int deepest_vertex) const;

    // depth-(D-1) cylinder obtained by dropping the last label and vertex
    int parent(int idx) const;
    // tau image: drop the first label and vertex (depth D-1, needs D >= 1)
    int shift(int idx) const;

private:
    int depth_;
    int n_;
    std::vector<Cylinder> cyls_;
    std::vector<int> live_rank_;  // -1 for non-live vertices
    std::vector<int> live_list_;
};

// Immutable owner of the graph and the cylinder complexes up to a fixed
// maximal depth; shared by functions, sets and algebra elements.
class CoveringContext {
public:
    explicit CoveringContext(const DynSys& sys, int max_depth = 12);

    const DynSys& sys() const { return graph_.sys; }
    const TailGraph& graph() const { return graph_; }
    int max_depth() const { return static_cast<int>(complexes_.size()) - 1; }
    const CylinderComplex& complex(int depth) const;

private:
    TailGraph graph_;
    std::vector<CylinderComplex> complexes_;
};

using ContextPtr = std::shared_ptr<const CoveringContext>;

ContextPtr make_context(const DynSys& sys, int max_depth = 12);

// An eventually periodic point of X~: a finite backward prefix followed by a
// closed backward cycle.  Specifies one genuine infinite tail.
struct TailSpec {
    Word prefix_labels;                // i_0 ... i_{p-1}
    std::vector<int> prefix_vertices;  // x_0 ... x_p
    Word cycle_labels;                 // c_0 ... c_{q-1}, q >= 1
    std::vector<int> cycle_vertices;   // y_0 ... y_q with y_q = y_0 = x_p

    void validate(const DynSys& sys) const;
    int label_at(int k) const;
    int vertex_at(int k) const;

    TailSpec shifted() const;                            // tau
    TailSpec prepended(const DynSys& sys, int i) const;  // sigma~_i

    // fixed point x with labels cycling through word w
    static TailSpec fixed_point(const DynSys& sys, int x, const Word& w);
};

class CylinderSet;

// A locally constant function on X~ carried exactly on the depth-D skeleton.
class CylinderFunction {
public:
    CylinderFunction() = default;
    CylinderFunction(ContextPtr ctx, int depth, std::vector<Scalar> values);

    static CylinderFunction constant(ContextPtr ctx, const Scalar& c, int depth = 0);
    static CylinderFunction zero(ContextPtr ctx, int depth = 0);
    static CylinderFunction one(ContextPtr ctx, int depth = 0);
    // indicator of the label-prefix cylinder X~_w at depth |w|
    static CylinderFunction chi(ContextPtr ctx, const Word& w);
    // g o p_k: depends only on x_k; g given per point of X
    static CylinderFunction lift_p(ContextPtr ctx, const std::vector<Scalar>& g, int k);
    static CylinderFunction indicator(const CylinderSet& s);

    const ContextPtr& ctx() const { return ctx_; }
    int depth() const { return depth_; }
    const Scalar& value(int idx) const { return values_[idx]; }
    bool is_zero() const;
    bool all_exact() const;

    CylinderFunction refined(int depth) const;
    Scalar eval(const TailSpec& tail) const;

    CylinderFunction conj() const;
    friend CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b);
    friend CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b);
    friend CylinderFunction operator*(const CylinderFunction& a, const CylinderFunction& b);
    friend CylinderFunction operator*(const Scalar& c, const CylinderFunction& f);
    friend bool operator==(const CylinderFunction& a, const CylinderFunction& b);
    friend bool operator!=(const CylinderFunction& a, const CylinderFunction& b) { return !(a == b); }

private:
    ContextPtr ctx_;
    int depth_ = 0;
    std::vector<Scalar> values_;
};

// f o tau, one level deeper
CylinderFunction act_tau(const CylinderFunction& f);
// f o sigma~_i, same depth
CylinderFunction act_sigma(const CylinderFunction& f, int i);

// A clopen subset of X~ as a set of depth-D cylinders.
class CylinderSet {
public:
    CylinderSet() = default;
    CylinderSet(ContextPtr ctx, int depth, std::vector<char> member);

    static CylinderSet empty(ContextPtr ctx, int depth = 0);
    static CylinderSet whole(ContextPtr ctx, int depth = 0);
    static CylinderSet label_prefix(ContextPtr ctx, const Word& w);  // X~_w
    // p^{-1}(A) for A a subset of X (depth 0)
    static CylinderSet base_preimage(ContextPtr ctx, const std::vector<int>& A);
    static CylinderSet single(ContextPtr ctx, const Cylinder& c);

    const ContextPtr& ctx() const { return ctx_; }
    int depth() const { return depth_; }
    bool member(int idx) const { return member_[idx] != 0; }
    int count() const;
    bool is_empty() const { return count() == 0; }
    bool is_whole() const;
    std::vector<Cylinder> cylinders() const;

    CylinderSet refined(int depth) const;
    bool contains(const TailSpec& tail) const;

    // binary operations auto-refine to the common depth; the depth actually
    // used is recorded on the result
    int refinement_depth_used() const { return refinement_depth_used_; }

    friend CylinderSet set_union(const CylinderSet& a, const CylinderSet& b);
    friend CylinderSet set_intersection(const CylinderSet& a, const CylinderSet& b);
    friend CylinderSet set_difference(const CylinderSet& a, const CylinderSet& b);
    CylinderSet complement() const;
    friend bool is_subset(const CylinderSet& a, const CylinderSet& b);
    friend bool operator==(const CylinderSet& a, const CylinderSet& b);
    friend bool operator!=(const CylinderSet& a, const CylinderSet& b) { return !(a == b); }

private:
    ContextPtr ctx_;
    int depth_ = 0;
    std::vector<char> member_;
    int refinement_depth_used_ = -1;
};

// sigma~_i(A), one level deeper
CylinderSet image_sigma(const CylinderSet& a, int i);
// tau(A), one level shallower (auto-refines depth-0 input first)
CylinderSet image_tau(const CylinderSet& a);
// sigma~_i^{-1}(A) = tau(A intersect X~_i)
CylinderSet preimage_sigma(const CylinderSet& a, int i);

struct SeparationResult {
    bool separates = false;
    // two live vertices admitting distinct label-matching tails
    std::optional<std::pair<int, int>> witness;
};

// Do the indicators of the sets X~_w separate the points of X~ ?  Computed as
// emptiness of the greatest fixpoint of the off-diagonal backward pair graph.
SeparationResult separation_test(const TailGraph& graph);

struct TauDeterminismReport {
    bool pass = false;
    int max_depth = 0;
    std::vector<int> cylinder_counts;  // per depth 0..D
    std::string detail;                // first failure, if any
};

// Structural assertion that each tail has a unique tau-history: the first
// label partitions X~ into the disjoint X~_i at every depth up to D.
TauDeterminismReport tau_determinism(const TailGraph& graph, int D);

nlohmann::json complex_to_json(const CoveringContext& ctx, int depth);

std::string word_str(const Word& w);  // 1-based display, e.g. "12" or "e"

}  // namespace mds
