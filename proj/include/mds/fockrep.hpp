// fockrep.hpp -- finite truncations of orbit and infinite-tail Fock
// representations on the word basis {xi_w : |w| <= L}, with exact sparse
// matrices: covariance / row-isometry / completeness checks, the
// rho-intertwining check, numeric evaluation of core elements, and the
// tail-adding multiplicity decomposition.
//
// Truncation contract: every identity is asserted only on interior basis
// vectors (|w| < L); the boundary level is excluded outright rather than
// approximately included.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mds/corealg.hpp"
#include "mds/covering.hpp"
#include "mds/dynsys.hpp"
#include "mds/scalar.hpp"

namespace mds {

// Sparse matrix with exact scalar entries; zero entries are absent.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Scalar& v);
    void add(int r, int c, const Scalar& v);
    Scalar get(int r, int c) const;
    const std::map<std::pair<int, int>, Scalar>& entries() const { return data_; }

    SparseMatrix adjoint() const;
    // columns restricted to indices < keep_cols (interior compression)
    SparseMatrix left_columns(int keep_cols) const;

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator*(const Scalar& c, const SparseMatrix& a);
    double max_abs() const;

    // documented triplet dump: one "row col value" line per entry, row-major
    std::string triplets() const;
    nlohmann::json to_json() const;

private:
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, Scalar> data_;
};

enum class RepKind { Orbit, Covering, Tail };

// The word basis in length-lexicographic order, shared by all reps.
struct WordBasis {
    int n = 0;
    int depth = 0;          // L
    std::vector<Word> words;

    int dim() const { return static_cast<int>(words.size()); }
    int interior_dim() const;               // number of words with |w| < L
    int index_of(const Word& w) const;      // -1 if absent
};

WordBasis make_word_basis(int n, int L);

struct TruncatedRep {
    RepKind kind = RepKind::Orbit;
    DynSys sys;
    WordBasis basis;
    int base_point = -1;                 // orbit kind: x
    ContextPtr ctx;                      // covering kind
    std::optional<TailSpec> tail;        // covering kind: the point
    int window = 0;                      // tail kind: S
    Word window_labels;                  // tail kind: i_0 .. i_{S-1}
    std::vector<int> window_vertices;    // tail kind: x_0 .. x_S

    int dim() const { return basis.dim(); }
    int interior_dim() const { return basis.interior_dim(); }

    // lambda(s_i): xi_w -> xi_{iw}, dropped past the truncation boundary
    SparseMatrix shift(int i) const;
    // lambda(f) = diag f(sigma_w(x)) for f given per point of X (orbit kind)
    SparseMatrix diag_base(const std::vector<Scalar>& f) const;
    // lambda(f) = diag f(sigma~_w(x~)) for a cylinder function (covering kind)
    SparseMatrix diag_fun(const CylinderFunction& f) const;

    // tail kind: basis index in H_S of the window-s vector xi^s_w, i.e. of
    // xi_{w i_s i_{s+1} ... i_{S-1}}; -1 if it falls outside the truncation
    int embedded_index(int s, const Word& w) const;
};

TruncatedRep build_orbit_rep(const DynSys& sys, int x, int L, int max_dim = 100000);
// orbit representation of a covering point (an eventually periodic tail)
TruncatedRep build_covering_rep(ContextPtr ctx, const TailSpec& point, int L,
                                int max_dim = 100000);
TruncatedRep build_tail_rep(const DynSys& sys, const TailSpec& spec, int S, int L,
                            int max_dim = 100000);
// same, from an explicit finite backward chain x_0 .. x_S with
// sigma_{i_s}(x_{s+1}) = x_s (used when no eventually periodic tail exists
// inside a truncated system)
TruncatedRep build_tail_rep(const DynSys& sys, const std::vector<int>& vertices,
                            const Word& labels, int S, int L, int max_dim = 100000);

struct RepReport {
    std::string check;
    double max_deviation = 0.0;
    int interior_dim = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

// f s_i = s_i (f o sigma_i) entrywise on interior columns, for the full
// family of point indicators
RepReport check_covariance(const TruncatedRep& rep);
// s_i* s_j = delta_ij I on interior columns
RepReport check_row_isometry(const TruncatedRep& rep);
// sum_i L_i L_i* = I on the embedded window subspaces of a tail rep
RepReport check_cuntz_completeness(const TruncatedRep& tail_rep);

// x generates a maximal orbit representation iff x is outside every range
bool maximality_flag(const DynSys& sys, int x);

// lambda_{(i,x)} o rho = lambda_x: the covering-point rep applied to lifted
// functions f o p and to the shifts agrees entrywise with the base orbit rep
// of x = p(spec)
RepReport check_rho_intertwine(ContextPtr ctx, const TailSpec& spec, int x, int L);

// numeric realization of a core element in a covering-point rep
SparseMatrix eval_core(const CoreElement& a, const TruncatedRep& rep);

struct TailMultReport {
    int alpha_expected = 0;   // sum_{s<k} n^s
    int alpha_observed = 0;   // basis vectors annihilated by every embedded image
    int beta_expected = 0;    // n^k
    int blocks_matched = 0;   // suffix blocks entrywise equal to truncated pi_u
    bool pass = false;
    std::string detail;

    nlohmann::json to_json() const;
};

// Decomposition of pi^T_{(u,-k)} restricted along the embedding: alpha
// annihilated vectors plus n^k blocks matching pi_u under the canonical
// suffix bijection xi_{vz} <-> xi_v.
TailMultReport tail_multiplicity(const TailedSys& sysT, int u_deficiency_rank, int k, int L);

}  // namespace mds
