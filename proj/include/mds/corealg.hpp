// corealg.hpp -- exact symbolic model of the dense *-algebra
// span{ t_u f t_v* } over a covering system: canonical forms, product and
// adjoint, gauge action and expectation, the matrix tower with its
// embeddings and norms, the endomorphism alpha with its isometry V, ideal
// data from clopen sets, and the correspondence-unitary check.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mds/covering.hpp"

namespace mds {

struct CoreTerm {
    Word u, v;
    CylinderFunction f;
};

// Canonical picture of one homogeneous degree: all terms raised to a common
// index length |v| = level (so |u| = level + degree) and functions refined to
// a common depth.
struct DegreeBlock {
    int degree = 0;
    int level = 0;
    int depth = 0;
    std::map<std::pair<Word, Word>, CylinderFunction> entries;
};

using CanonicalForm = std::map<int, DegreeBlock>;

class CoreElement {
public:
    CoreElement() = default;

    static CoreElement zero(ContextPtr ctx);
    static CoreElement one(ContextPtr ctx);
    static CoreElement from_function(CylinderFunction f);
    static CoreElement term(Word u, Word v, CylinderFunction f);
    static CoreElement generator(ContextPtr ctx, int i);  // t_{i+1}
    static CoreElement word_isometry(ContextPtr ctx, const Word& w);  // t_w

    const ContextPtr& ctx() const { return ctx_; }
    const std::vector<CoreTerm>& terms() const { return terms_; }

    CanonicalForm canonical() const;
    // raise the degree-d part so that |v| = level >= canonical level
    DegreeBlock canonical_at(int degree, int level) const;
    bool is_zero() const;
    // nonzero homogeneous degrees
    std::vector<int> degrees() const;

    // degree-0, level-0 elements are plain functions
    std::optional<CylinderFunction> as_function() const;

    friend CoreElement operator+(const CoreElement& a, const CoreElement& b);
    friend CoreElement operator-(const CoreElement& a, const CoreElement& b);
    friend CoreElement operator*(const Scalar& c, const CoreElement& a);
    friend bool operator==(const CoreElement& a, const CoreElement& b);
    friend bool operator!=(const CoreElement& a, const CoreElement& b) { return !(a == b); }

private:
    ContextPtr ctx_;
    std::vector<CoreTerm> terms_;
};

CoreElement multiply(const CoreElement& a, const CoreElement& b);
CoreElement adjoint(const CoreElement& a);

// t_u* a t_v; reduces a canonical block back to its stored coefficient
CoreElement coefficient_extract(const CoreElement& a, const Word& u, const Word& v);

// gauge action: scale the degree-d part by z^d
CoreElement gauge_scale(const CoreElement& a, std::complex<double> z);
// z = exp(2 pi i j / M); stays exact whenever every nonzero degree d has
// j*d divisible by M, otherwise demotes to floating values
CoreElement gauge_scale_root(const CoreElement& a, int M, int j);
// expectation Psi: the degree-0 part
CoreElement gauge_expect(const CoreElement& a);
// exact finite average of gauge_scale over all M-th roots of unity; the
// geometric sum (1/M) sum_j z_j^d is 1 or 0 per degree, so the average is
// computed in closed form without leaving the exact scalars
CoreElement gauge_average(const CoreElement& a, int M);

// V = n^{-1/2} sum_i t_i (requires a surjective system: the Cuntz relation
// sum t_i t_i* = 1 holds in the covering picture only then)
CoreElement isometry_v(ContextPtr ctx);
// alpha(b) = V b V*
CoreElement alpha(const CoreElement& b);

struct IdentityReport {
    bool pass = false;
    std::string detail;
};

// t_w f t_w* = chi_w (f o tau^{|w|}), compared in canonical form
IdentityReport lemma_calculation(const Word& w, const CylinderFunction& f);

// ---- the tower B_k ----

struct TowerElement {
    ContextPtr ctx;
    int level = 0;
    std::map<std::pair<Word, Word>, CylinderFunction> entries;  // |u| = |v| = level

    static TowerElement from_core(const CoreElement& a, int level);
    CoreElement to_core() const;
};

// the embedding B_k -> B_{k+1}, t_u f t_v* = sum_i t_ui (f o sigma~_i) t_vi*
TowerElement tower_embed(const TowerElement& b);
// alpha on the tower: E_{u,v} x f -> (1/n) sum_{i,j} E_{iu,jv} x f
TowerElement alpha_tower(const TowerElement& b);
// max over evaluation cylinders of the spectral norm of the scalar matrix
double tower_norm(const TowerElement& b);
// exact value for 1x1 and diagonal matrices; nullopt otherwise
std::optional<Scalar> tower_norm_exact(const TowerElement& b);

// largest singular value of the rectangular coefficient matrix of the
// degree-d part; throws if a has terms of any other degree
double homogeneous_norm(const CoreElement& a, int d);
// [max_d, sum_d] of homogeneous norms: bounds for the norm of a mixed
// element (no exact finite formula exists for the mixed case)
std::pair<double, double> norm_bounds(const CoreElement& a);

// ---- ideals ----

struct IdealData {
    std::vector<CylinderSet> F;  // F_0, F_1, ... up to one full period
    int preperiod = 0;
    int period = 1;
    bool tau_invariant = false;
    bool robust = false;
    bool bi_invariant = false;
    std::string tau_witness;     // failure description, empty if the flag holds
    std::string robust_witness;

    const CylinderSet& at(int k) const;  // F_k for arbitrary k >= 0
};

// F_k = tau^k(F0) with period detection and flag computation
IdealData ideal_from_set(const CylinderSet& F0, int max_iter = 64);

// For bi-invariant F: every canonical coefficient of a vanishes on F.
// For merely robust tau-invariant F only the B-ideal is defined: a must be
// degree-0, and its level-k coefficients must vanish on F_k.
bool ideal_membership(const CoreElement& a, const IdealData& J);

// ---- groupoid correspondence ----

// Verifies, over the full spanning family of depth-D cylinder indicators,
// that U xi = xi o h intertwines the two correspondence structures: inner
// products and both module actions.
IdentityReport correspondence_unitary(ContextPtr ctx, int D);

nlohmann::json core_to_json(const CoreElement& a);

}  // namespace mds
