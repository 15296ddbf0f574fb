// dynsys.hpp -- finite multivariable dynamical systems (X, sigma) and their
// classical dynamics: deficiency, orbits, invariant / bi-invariant sets,
// minimality, and tail-adding for non-surjective systems.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mds {

using Word = std::vector<int>;  // letters are 0-based map indices

// A finite point set with n total self-maps.  maps[i][x] is the index of
// sigma_{i+1}(points[x]).
struct DynSys {
    std::string name;
    std::vector<std::string> points;
    std::vector<std::vector<int>> maps;

    int size() const { return static_cast<int>(points.size()); }
    int n() const { return static_cast<int>(maps.size()); }

    int apply(int i, int x) const { return maps[i][x]; }
    // sigma_w = sigma_{w0} o sigma_{w1} o ... (rightmost letter acts first)
    int apply_word(const Word& w, int x) const {
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = maps[*it][x];
        return x;
    }

    // throws std::invalid_argument naming the offending (i, x) on bad data
    void validate() const;

    static DynSys from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct RangeDeficiency {
    std::vector<int> range_union;  // sorted
    std::vector<int> deficiency;   // U = X \ range_union, sorted
    bool surjective = false;
};

RangeDeficiency range_deficiency(const DynSys& sys);

// least sigma-closed superset of {x} (BFS fixpoint); throws on unknown point
std::vector<int> forward_orbit(const DynSys& sys, int x);

// all A with sigma_i(A) subseteq A, canonically sorted; exhaustive scan with
// a refusal guard (the scan is 2^|X|)
std::vector<std::vector<int>> invariant_sets(const DynSys& sys, int guard = 20);

// sets closed under images and preimages of every map: unions of weakly
// connected components of the map graph
std::vector<std::vector<int>> bi_invariant_sets(const DynSys& sys);

// weak component of x: least bi-invariant superset of {x}
std::vector<int> full_orbit(const DynSys& sys, int x);

struct MinimalityResult {
    bool minimal = false;
    // on failure: a point whose forward orbit is a proper closed invariant set
    int witness_point = -1;
    std::vector<int> witness_set;
};

MinimalityResult is_minimal(const DynSys& sys);

// The system with a finite tail of depth K attached below each deficiency
// point: tail points (u,-1),...,(u,-K) with sigma_i(u,-k) = (u,-k+1) and
// sigma_i(u,-1) = u for every i.
struct TailedSys {
    DynSys extended;
    DynSys base;
    int tail_depth = 0;        // K; 0 when the base was already surjective
    bool unchanged = false;    // base surjective, nothing added
    std::string note;
    // truncated system's own deficiency is {(u,-K)}; an artifact of cutting
    // the infinite tail at depth K
    std::vector<int> truncation_deficiency;
    bool truncation_stable = false;  // analyses agree when re-run at K+1

    int base_size() const { return base.size(); }
    // index of tail point (u,-k) in extended, k in 1..K
    int tail_index(int u_deficiency_rank, int k) const;
};

TailedSys add_tail(const DynSys& sys, int K);

// all n-map systems on m points, in lexicographic map order
std::vector<DynSys> enumerate_systems(int m, int n);

}  // namespace mds
