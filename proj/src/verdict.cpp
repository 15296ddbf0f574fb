#include "mds/verdict.hpp"

#include <algorithm>
#include <stdexcept>

namespace mds {

std::string to_string(Simplicity s) {
    switch (s) {
        case Simplicity::Simple: return "Simple";
        case Simplicity::NotSimple: return "NotSimple";
        case Simplicity::TheoremInapplicableN1: return "TheoremInapplicableN1";
    }
    return "?";
}

std::string to_string(OnDetection d) {
    return d == OnDetection::IsomorphicToOn ? "IsomorphicToOn" : "Inconclusive";
}

nlohmann::json Verdict::to_json() const {
    nlohmann::json w;
    if (!invariant_witness.empty()) w["invariantSet"] = invariant_witness;
    if (separation_witness)
        w["separationPair"] = {separation_witness->first, separation_witness->second};
    if (!note.empty()) w["note"] = note;
    w["reasoning"] = reasoning;
    return {{"minimal", minimal},
            {"surjective", surjective},
            {"simplicity", to_string(simplicity)},
            {"onDetection", on_detection ? to_string(*on_detection) : "NotApplicable"},
            {"witnesses", w},
            {"truncationDepths", nlohmann::json::object()}};
}

Verdict simplicity_verdict(const DynSys& sys) {
    sys.validate();
    Verdict v;
    auto rd = range_deficiency(sys);
    v.surjective = rd.surjective;
    auto mr = is_minimal(sys);
    v.minimal = mr.minimal;

    if (sys.n() == 1) {
        v.simplicity = Simplicity::TheoremInapplicableN1;
        v.note = "single map: the tensor algebra is a semicrossed product by Z and the "
                 "minimality dichotomy does not apply";
        if (sys.size() == 1) v.note += "; the C*-envelope is C(T), which is not simple";
        v.reasoning.push_back("n = 1 falls outside the n >= 2 simplicity theorem");
        return v;
    }

    if (!v.surjective) {
        v.simplicity = Simplicity::NotSimple;
        if (!mr.minimal) v.invariant_witness = mr.witness_set;
        v.reasoning.push_back("a deficiency point lies in no forward orbit but its own, "
                              "so the system is not minimal");
        v.reasoning.push_back("adding a tail keeps the system non-minimal");
        v.reasoning.push_back("the envelope is a full corner of the tailed envelope, and "
                              "Morita equivalence preserves the ideal lattice");
        v.reasoning.push_back("hence the envelope is not simple");
        return v;
    }

    if (v.minimal) {
        v.simplicity = Simplicity::Simple;
        v.reasoning.push_back("every forward orbit is all of X, so the system is minimal "
                              "and the envelope is simple");
    } else {
        v.simplicity = Simplicity::NotSimple;
        v.invariant_witness = mr.witness_set;
        v.reasoning.push_back("the forward orbit of point " +
                              sys.points[mr.witness_point] +
                              " is a proper closed invariant set, so the system is not "
                              "minimal and the envelope is not simple");
    }

    auto od = on_detect(sys);
    v.on_detection = od.detection;
    if (od.witness) v.separation_witness = od.witness;
    if (od.detection == OnDetection::IsomorphicToOn)
        v.reasoning.push_back("the cylinder indicators separate the tails, so the envelope "
                              "is the Cuntz algebra O_" + std::to_string(sys.n()));
    return v;
}

OnResult on_detect(const DynSys& sys) {
    auto rd = range_deficiency(sys);
    if (!rd.surjective)
        throw std::invalid_argument("on_detect: system must be surjective");
    auto graph = build_tail_graph(sys);
    auto sep = separation_test(graph);
    OnResult r;
    r.detection = sep.separates ? OnDetection::IsomorphicToOn : OnDetection::Inconclusive;
    r.witness = sep.witness;
    return r;
}

nlohmann::json WitnessChain::to_json() const {
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& w : W)
        chain.push_back({{"depth", w.depth()}, {"cylinders", w.count()}});
    return {{"chain", chain}, {"valid", valid}, {"detail", detail}};
}

WitnessChain bi_invariant_witness(ContextPtr ctx, const std::vector<int>& A, int Dmax) {
    const DynSys& sys = ctx->sys();
    if (!range_deficiency(sys).surjective)
        throw std::invalid_argument("bi_invariant_witness: system must be surjective");
    std::vector<char> in_a(sys.size(), 0);
    for (int x : A) {
        if (x < 0 || x >= sys.size())
            throw std::invalid_argument("bi_invariant_witness: point index out of range");
        in_a[x] = 1;
    }
    int count = static_cast<int>(std::count(in_a.begin(), in_a.end(), 1));
    if (count == 0 || count == sys.size())
        throw std::invalid_argument("bi_invariant_witness: A must be nonempty and proper");
    for (int i = 0; i < sys.n(); ++i)
        for (int x = 0; x < sys.size(); ++x)
            if (in_a[x] && !in_a[sys.apply(i, x)])
                throw std::invalid_argument("bi_invariant_witness: A is not invariant");

    WitnessChain cert;
    cert.W.push_back(CylinderSet::base_preimage(ctx, A));
    for (int k = 0; k < Dmax; ++k) {
        CylinderSet next = image_sigma(cert.W.back(), 0);
        for (int i = 1; i < sys.n(); ++i)
            next = set_union(next, image_sigma(cert.W.back(), i));
        cert.W.push_back(std::move(next));
    }

    cert.valid = true;
    auto fail = [&](const std::string& msg) {
        cert.valid = false;
        if (cert.detail.empty()) cert.detail = msg;
    };
    for (size_t k = 0; k < cert.W.size(); ++k) {
        if (cert.W[k].is_empty()) fail("W_" + std::to_string(k) + " is empty");
        if (cert.W[k].is_whole()) fail("W_" + std::to_string(k) + " is all of X~");
    }
    for (size_t k = 0; k + 1 < cert.W.size(); ++k) {
        const auto& wk = cert.W[k];
        const auto& wk1 = cert.W[k + 1];
        if (!is_subset(wk1, wk))
            fail("W_" + std::to_string(k + 1) + " is not contained in W_" + std::to_string(k));
        if (!is_subset(image_tau(wk1), wk))
            fail("tau(W_" + std::to_string(k + 1) + ") leaves W_" + std::to_string(k));
        for (int i = 0; i < sys.n(); ++i)
            if (!is_subset(image_sigma(wk, i), wk1))
                fail("sigma~_" + std::to_string(i + 1) + "(W_" + std::to_string(k) +
                     ") leaves W_" + std::to_string(k + 1));
    }
    return cert;
}

}  // namespace mds
