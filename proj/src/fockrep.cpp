#include "mds/fockrep.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mds {

// ---- SparseMatrix ----

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Scalar(1));
    return m;
}

void SparseMatrix::set(int r, int c, const Scalar& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix: index out of range");
    if (v.is_zero())
        data_.erase({r, c});
    else
        data_[{r, c}] = v;
}

void SparseMatrix::add(int r, int c, const Scalar& v) { set(r, c, get(r, c) + v); }

Scalar SparseMatrix::get(int r, int c) const {
    auto it = data_.find({r, c});
    return it == data_.end() ? Scalar(0) : it->second;
}

SparseMatrix SparseMatrix::adjoint() const {
    SparseMatrix m(cols_, rows_);
    for (const auto& [rc, v] : data_) m.set(rc.second, rc.first, v.conj());
    return m;
}

SparseMatrix SparseMatrix::left_columns(int keep_cols) const {
    SparseMatrix m(rows_, keep_cols);
    for (const auto& [rc, v] : data_)
        if (rc.second < keep_cols) m.set(rc.first, rc.second, v);
    return m;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("SparseMatrix: shape mismatch in +");
    SparseMatrix m = a;
    for (const auto& [rc, v] : b.data_) m.add(rc.first, rc.second, v);
    return m;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    return a + (Scalar(-1) * b);
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix: shape mismatch in *");
    // index b's entries by row for the sparse product
    std::map<int, std::vector<std::pair<int, Scalar>>> b_rows;
    for (const auto& [rc, v] : b.data_) b_rows[rc.first].push_back({rc.second, v});
    SparseMatrix m(a.rows_, b.cols_);
    for (const auto& [rc, v] : a.data_) {
        auto it = b_rows.find(rc.second);
        if (it == b_rows.end()) continue;
        for (const auto& [c, w] : it->second) m.add(rc.first, c, v * w);
    }
    return m;
}

SparseMatrix operator*(const Scalar& c, const SparseMatrix& a) {
    SparseMatrix m(a.rows_, a.cols_);
    for (const auto& [rc, v] : a.data_) m.set(rc.first, rc.second, c * v);
    return m;
}

double SparseMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& [rc, v] : data_) best = std::max(best, std::abs(v.to_complex()));
    return best;
}

std::string SparseMatrix::triplets() const {
    std::ostringstream os;
    for (const auto& [rc, v] : data_)
        os << rc.first << " " << rc.second << " " << v.str() << "\n";
    return os.str();
}

nlohmann::json SparseMatrix::to_json() const {
    nlohmann::json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["entries"] = nlohmann::json::array();
    for (const auto& [rc, v] : data_)
        j["entries"].push_back({rc.first, rc.second, v.str()});
    return j;
}

// ---- word basis ----

WordBasis make_word_basis(int n, int L) {
    WordBasis b;
    b.n = n;
    b.depth = L;
    b.words.push_back({});
    std::vector<Word> level{{}};
    for (int l = 1; l <= L; ++l) {
        std::vector<Word> next;
        for (const auto& w : level) {
            for (int i = 0; i < n; ++i) {
                Word v = w;
                v.push_back(i);
                next.push_back(std::move(v));
            }
        }
        // lexicographic within the length level
        std::sort(next.begin(), next.end());
        for (const auto& w : next) b.words.push_back(w);
        level = std::move(next);
    }
    return b;
}

int WordBasis::interior_dim() const {
    int c = 0;
    for (const auto& w : words)
        if (static_cast<int>(w.size()) < depth) ++c;
    return c;
}

int WordBasis::index_of(const Word& w) const {
    for (size_t i = 0; i < words.size(); ++i)
        if (words[i] == w) return static_cast<int>(i);
    return -1;
}

// ---- truncated representations ----

SparseMatrix TruncatedRep::shift(int i) const {
    SparseMatrix m(dim(), dim());
    for (int c = 0; c < dim(); ++c) {
        const Word& w = basis.words[c];
        if (static_cast<int>(w.size()) >= basis.depth) continue;
        Word iw{i};
        iw.insert(iw.end(), w.begin(), w.end());
        m.set(basis.index_of(iw), c, Scalar(1));
    }
    return m;
}

SparseMatrix TruncatedRep::diag_base(const std::vector<Scalar>& f) const {
    if (base_point < 0)
        throw std::invalid_argument("diag_base: representation has no base orbit point");
    if (static_cast<int>(f.size()) != sys.size())
        throw std::invalid_argument("diag_base: function size mismatch");
    SparseMatrix m(dim(), dim());
    for (int c = 0; c < dim(); ++c)
        m.set(c, c, f[sys.apply_word(basis.words[c], base_point)]);
    return m;
}

SparseMatrix TruncatedRep::diag_fun(const CylinderFunction& f) const {
    if (kind != RepKind::Covering || !tail)
        throw std::invalid_argument("diag_fun: not a covering-point representation");
    SparseMatrix m(dim(), dim());
    for (int c = 0; c < dim(); ++c) {
        TailSpec t = *tail;
        const Word& w = basis.words[c];
        for (auto it = w.rbegin(); it != w.rend(); ++it) t = t.prepended(sys, *it);
        m.set(c, c, f.eval(t));
    }
    return m;
}

int TruncatedRep::embedded_index(int s, const Word& w) const {
    if (kind != RepKind::Tail)
        throw std::invalid_argument("embedded_index: not a tail representation");
    if (s < 0 || s > window) throw std::invalid_argument("embedded_index: bad window");
    Word v = w;
    for (int t = s; t < window; ++t) v.push_back(window_labels[t]);
    return basis.index_of(v);
}

namespace {

void guard_dim(int n, int L, int max_dim) {
    long long dim = 1, pw = 1;
    for (int l = 1; l <= L; ++l) {
        pw *= n;
        dim += pw;
        if (dim > max_dim)
            throw std::invalid_argument("representation dimension guard exceeded (" +
                                        std::to_string(dim) + " > " +
                                        std::to_string(max_dim) + ")");
    }
}

}  // namespace

TruncatedRep build_orbit_rep(const DynSys& sys, int x, int L, int max_dim) {
    if (x < 0 || x >= sys.size()) throw std::invalid_argument("build_orbit_rep: bad point");
    if (L < 1) throw std::invalid_argument("build_orbit_rep: L must be >= 1");
    guard_dim(sys.n(), L, max_dim);
    TruncatedRep rep;
    rep.kind = RepKind::Orbit;
    rep.sys = sys;
    rep.basis = make_word_basis(sys.n(), L);
    rep.base_point = x;
    return rep;
}

TruncatedRep build_covering_rep(ContextPtr ctx, const TailSpec& point, int L, int max_dim) {
    point.validate(ctx->sys());
    if (L < 1) throw std::invalid_argument("build_covering_rep: L must be >= 1");
    guard_dim(ctx->sys().n(), L, max_dim);
    TruncatedRep rep;
    rep.kind = RepKind::Covering;
    rep.sys = ctx->sys();
    rep.basis = make_word_basis(rep.sys.n(), L);
    rep.ctx = std::move(ctx);
    rep.tail = point;
    return rep;
}

TruncatedRep build_tail_rep(const DynSys& sys, const TailSpec& spec, int S, int L,
                            int max_dim) {
    spec.validate(sys);
    std::vector<int> vertices;
    Word labels;
    for (int s = 0; s <= S; ++s) vertices.push_back(spec.vertex_at(s));
    for (int s = 0; s < S; ++s) labels.push_back(spec.label_at(s));
    return build_tail_rep(sys, vertices, labels, S, L, max_dim);
}

TruncatedRep build_tail_rep(const DynSys& sys, const std::vector<int>& vertices,
                            const Word& labels, int S, int L, int max_dim) {
    if (S < 0 || static_cast<int>(vertices.size()) < S + 1 ||
        static_cast<int>(labels.size()) < S)
        throw std::invalid_argument("build_tail_rep: bad window chain");
    for (int s = 0; s < S; ++s)
        if (sys.apply(labels[s], vertices[s + 1]) != vertices[s])
            throw std::invalid_argument("build_tail_rep: chain is not a backward path");
    if (L < 1) throw std::invalid_argument("build_tail_rep: L must be >= 1");
    guard_dim(sys.n(), L, max_dim);
    TruncatedRep rep;
    rep.kind = RepKind::Tail;
    rep.sys = sys;
    rep.basis = make_word_basis(sys.n(), L);
    rep.base_point = vertices[S];
    rep.window = S;
    rep.window_labels = Word(labels.begin(), labels.begin() + S);
    rep.window_vertices = std::vector<int>(vertices.begin(), vertices.begin() + S + 1);
    // embedding consistency: the window-s copy of xi_w sees the same orbit
    for (int s = 0; s < S; ++s) {
        for (int c = 0; c < rep.dim(); ++c) {
            const Word& w = rep.basis.words[c];
            int idx = rep.embedded_index(s, w);
            if (idx < 0) continue;
            if (sys.apply_word(rep.basis.words[idx], rep.base_point) !=
                sys.apply_word(w, rep.window_vertices[s]))
                throw std::logic_error("build_tail_rep: window embedding is inconsistent");
        }
    }
    return rep;
}

nlohmann::json RepReport::to_json() const {
    return {{"check", check},
            {"maxDeviation", max_deviation},
            {"interiorDim", interior_dim},
            {"pass", pass}};
}

RepReport check_covariance(const TruncatedRep& rep) {
    RepReport r;
    r.check = "covariance";
    r.interior_dim = rep.interior_dim();
    const int n = rep.sys.n();
    double dev = 0.0;
    if (rep.kind == RepKind::Covering) {
        const auto& cx = rep.ctx->complex(1);
        for (int i = 0; i < n; ++i) {
            SparseMatrix li = rep.shift(i);
            for (int c = 0; c < cx.count(); ++c) {
                CylinderFunction f =
                    CylinderFunction::indicator(CylinderSet::single(rep.ctx, cx.cylinder(c)));
                SparseMatrix lhs = rep.diag_fun(f) * li;
                SparseMatrix rhs = li * rep.diag_fun(act_sigma(f, i));
                dev = std::max(dev, (lhs - rhs).left_columns(r.interior_dim).max_abs());
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            SparseMatrix li = rep.shift(i);
            for (int y = 0; y < rep.sys.size(); ++y) {
                std::vector<Scalar> f(rep.sys.size(), Scalar(0));
                f[y] = Scalar(1);
                std::vector<Scalar> f_sigma(rep.sys.size(), Scalar(0));
                for (int x = 0; x < rep.sys.size(); ++x)
                    f_sigma[x] = f[rep.sys.apply(i, x)];
                SparseMatrix lhs = rep.diag_base(f) * li;
                SparseMatrix rhs = li * rep.diag_base(f_sigma);
                dev = std::max(dev, (lhs - rhs).left_columns(r.interior_dim).max_abs());
            }
        }
    }
    r.max_deviation = dev;
    r.pass = dev == 0.0;
    return r;
}

RepReport check_row_isometry(const TruncatedRep& rep) {
    RepReport r;
    r.check = "rowIsometry";
    r.interior_dim = rep.interior_dim();
    const int n = rep.sys.n();
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
        SparseMatrix li_star = rep.shift(i).adjoint();
        for (int j = 0; j < n; ++j) {
            SparseMatrix prod = li_star * rep.shift(j);
            if (i == j) prod = prod - SparseMatrix::identity(rep.dim());
            dev = std::max(dev, prod.left_columns(r.interior_dim).max_abs());
        }
    }
    r.max_deviation = dev;
    r.pass = dev == 0.0;
    return r;
}

RepReport check_cuntz_completeness(const TruncatedRep& tail_rep) {
    if (tail_rep.kind != RepKind::Tail)
        throw std::invalid_argument("check_cuntz_completeness: needs a tail representation");
    RepReport r;
    r.check = "cuntzCompleteness";
    const int n = tail_rep.sys.n();
    SparseMatrix sum(tail_rep.dim(), tail_rep.dim());
    for (int i = 0; i < n; ++i) {
        SparseMatrix li = tail_rep.shift(i);
        sum = sum + li * li.adjoint();
    }
    SparseMatrix diff = sum - SparseMatrix::identity(tail_rep.dim());
    double dev = 0.0;
    int checked = 0;
    for (int s = 0; s < tail_rep.window; ++s) {
        for (int c = 0; c < tail_rep.dim(); ++c) {
            int idx = tail_rep.embedded_index(s, tail_rep.basis.words[c]);
            if (idx < 0) continue;
            ++checked;
            for (int row = 0; row < tail_rep.dim(); ++row)
                dev = std::max(dev, std::abs(diff.get(row, idx).to_complex()));
        }
    }
    r.interior_dim = checked;
    r.max_deviation = dev;
    r.pass = dev == 0.0 && checked > 0;
    if (!r.pass && checked == 0) r.check += " (no embedded window vectors; need S >= 1)";
    return r;
}

bool maximality_flag(const DynSys& sys, int x) {
    if (x < 0 || x >= sys.size()) throw std::invalid_argument("maximality_flag: bad point");
    auto rd = range_deficiency(sys);
    return std::binary_search(rd.deficiency.begin(), rd.deficiency.end(), x);
}

RepReport check_rho_intertwine(ContextPtr ctx, const TailSpec& spec, int x, int L) {
    if (spec.vertex_at(0) != x)
        throw std::invalid_argument("check_rho_intertwine: p(spec) != x");
    TruncatedRep cov = build_covering_rep(ctx, spec, L);
    TruncatedRep orb = build_orbit_rep(ctx->sys(), x, L);
    RepReport r;
    r.check = "rhoIntertwine";
    r.interior_dim = cov.interior_dim();
    double dev = 0.0;
    for (int y = 0; y < ctx->sys().size(); ++y) {
        std::vector<Scalar> f(ctx->sys().size(), Scalar(0));
        f[y] = Scalar(1);
        SparseMatrix lifted = cov.diag_fun(CylinderFunction::lift_p(ctx, f, 0));
        SparseMatrix base = orb.diag_base(f);
        dev = std::max(dev, (lifted - base).max_abs());
    }
    for (int i = 0; i < ctx->sys().n(); ++i)
        dev = std::max(dev, (cov.shift(i) - orb.shift(i)).max_abs());
    r.max_deviation = dev;
    r.pass = dev == 0.0;
    return r;
}

SparseMatrix eval_core(const CoreElement& a, const TruncatedRep& rep) {
    if (rep.kind != RepKind::Covering)
        throw std::invalid_argument("eval_core: needs a covering-point representation");
    if (a.ctx() && a.ctx().get() != rep.ctx.get())
        throw std::invalid_argument("eval_core: element and representation disagree on context");
    SparseMatrix m(rep.dim(), rep.dim());
    for (const auto& t : a.terms()) {
        for (int c = 0; c < rep.dim(); ++c) {
            const Word& w = rep.basis.words[c];
            if (t.v.size() > w.size() ||
                !std::equal(t.v.begin(), t.v.end(), w.begin()))
                continue;
            Word rest(w.begin() + t.v.size(), w.end());
            Word target = t.u;
            target.insert(target.end(), rest.begin(), rest.end());
            int idx = rep.basis.index_of(target);
            if (idx < 0) continue;
            TailSpec pt = *rep.tail;
            for (auto it = rest.rbegin(); it != rest.rend(); ++it)
                pt = pt.prepended(rep.sys, *it);
            m.add(idx, c, t.f.eval(pt));
        }
    }
    return m;
}

nlohmann::json TailMultReport::to_json() const {
    return {{"alphaExpected", alpha_expected}, {"alphaObserved", alpha_observed},
            {"betaExpected", beta_expected},   {"blocksMatched", blocks_matched},
            {"pass", pass},                    {"detail", detail}};
}

TailMultReport tail_multiplicity(const TailedSys& sysT, int u_deficiency_rank, int k, int L) {
    TailMultReport rep;
    auto rd = range_deficiency(sysT.base);
    if (u_deficiency_rank < 0 ||
        u_deficiency_rank >= static_cast<int>(rd.deficiency.size()))
        throw std::invalid_argument("tail_multiplicity: bad deficiency rank");
    if (k < 0 || k > sysT.tail_depth)
        throw std::invalid_argument("tail_multiplicity: k outside 0..K");
    if (L < k) throw std::invalid_argument("tail_multiplicity: need L >= k");
    const int u = rd.deficiency[u_deficiency_rank];
    const int n = sysT.base.n();
    const int point = (k == 0) ? u : sysT.tail_index(u_deficiency_rank, k);
    const int base_size = sysT.base_size();

    TruncatedRep big = build_orbit_rep(sysT.extended, point, L);

    long long alpha = 0, pw = 1;
    for (int s = 0; s < k; ++s) { alpha += pw; pw *= n; }
    rep.alpha_expected = static_cast<int>(alpha);
    long long beta = 1;
    for (int s = 0; s < k; ++s) beta *= n;
    rep.beta_expected = static_cast<int>(beta);

    // (a) vectors annihilated by every embedded image: orbit still in the tail
    for (int c = 0; c < big.dim(); ++c)
        if (sysT.extended.apply_word(big.basis.words[c], point) >= base_size)
            ++rep.alpha_observed;

    // (b) suffix blocks xi_{vz} <-> xi_v against the truncated pi_u
    TruncatedRep small = (L - k >= 1) ? build_orbit_rep(sysT.base, u, L - k)
                                      : TruncatedRep{};
    if (L - k == 0) {
        small.kind = RepKind::Orbit;
        small.sys = sysT.base;
        small.basis = make_word_basis(n, 0);
        small.base_point = u;
    }
    WordBasis suffixes = make_word_basis(n, k);
    for (const Word& z : suffixes.words) {
        if (static_cast<int>(z.size()) != k) continue;
        // block index: position in big of xi_{vz} for each small word v
        std::vector<int> pos(small.dim());
        bool ok = true;
        for (int c = 0; c < small.dim(); ++c) {
            Word vz = small.basis.words[c];
            vz.insert(vz.end(), z.begin(), z.end());
            pos[c] = big.basis.index_of(vz);
            if (pos[c] < 0) ok = false;
        }
        if (!ok || sysT.extended.apply_word(z, point) != u) {
            rep.detail = "suffix block " + word_str(z) + " failed to land on the base point";
            continue;
        }
        bool match = true;
        for (int i = 0; i < n && match; ++i) {
            SparseMatrix big_shift = big.shift(i), small_shift = small.shift(i);
            for (int c = 0; c < small.dim() && match; ++c)
                for (int r = 0; r < small.dim() && match; ++r)
                    if (big_shift.get(pos[r], pos[c]) != small_shift.get(r, c)) match = false;
        }
        for (int y = 0; y < base_size && match; ++y) {
            std::vector<Scalar> f_ext(sysT.extended.size(), Scalar(0));
            f_ext[y] = Scalar(1);
            std::vector<Scalar> f_base(base_size, Scalar(0));
            f_base[y] = Scalar(1);
            SparseMatrix big_diag = big.diag_base(f_ext), small_diag = small.diag_base(f_base);
            for (int c = 0; c < small.dim() && match; ++c)
                if (big_diag.get(pos[c], pos[c]) != small_diag.get(c, c)) match = false;
        }
        if (match) ++rep.blocks_matched;
        else if (rep.detail.empty())
            rep.detail = "suffix block " + word_str(z) + " does not match pi_u entrywise";
    }
    rep.pass = rep.alpha_observed == rep.alpha_expected &&
               rep.blocks_matched == rep.beta_expected;
    return rep;
}

}  // namespace mds
