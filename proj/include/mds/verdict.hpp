// verdict.hpp -- structural conclusions for a finite system: the simplicity
// verdict (minimal <=> simple for n >= 2), O_n detection from separation,
// the n = 1 crossed-product caveat, and the clopen bi-invariant witness
// chain certifying non-simplicity from a proper invariant set.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mds/covering.hpp"
#include "mds/dynsys.hpp"

namespace mds {

enum class Simplicity { Simple, NotSimple, TheoremInapplicableN1 };
enum class OnDetection { IsomorphicToOn, Inconclusive };

std::string to_string(Simplicity s);
std::string to_string(OnDetection d);

struct Verdict {
    bool minimal = false;
    bool surjective = false;
    Simplicity simplicity = Simplicity::NotSimple;
    std::optional<OnDetection> on_detection;  // absent for non-surjective systems
    // evidence
    std::vector<int> invariant_witness;                 // proper invariant set, if any
    std::optional<std::pair<int, int>> separation_witness;
    std::string note;                                   // n = 1 remark, etc.
    std::vector<std::string> reasoning;                 // ordered argument chain

    nlohmann::json to_json() const;
};

Verdict simplicity_verdict(const DynSys& sys);

struct OnResult {
    OnDetection detection = OnDetection::Inconclusive;
    std::optional<std::pair<int, int>> witness;  // non-separated live pair
};

// throws std::invalid_argument on a non-surjective system
OnResult on_detect(const DynSys& sys);

// W_0 = p^{-1}(A), W_{k+1} = union_i sigma~_i(W_k): each member must be a
// nonempty proper clopen set, nested downward, with tau(W_{k+1}) inside W_k
// and sigma~_i(W_k) inside W_{k+1} -- the finite shadow of the proper closed
// bi-invariant intersection.
struct WitnessChain {
    std::vector<CylinderSet> W;  // W_0 .. W_Dmax
    bool valid = false;
    std::string detail;          // first failed certificate condition

    nlohmann::json to_json() const;
};

// throws std::invalid_argument if A is empty, all of X, or not invariant
WitnessChain bi_invariant_witness(ContextPtr ctx, const std::vector<int>& A, int Dmax);

}  // namespace mds
