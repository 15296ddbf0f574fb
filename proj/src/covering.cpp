#include "mds/covering.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mds {

int TailGraph::live_count() const {
    int c = 0;
    for (char v : live) c += v;
    return c;
}

TailGraph build_tail_graph(const DynSys& sys) {
    sys.validate();
    TailGraph g;
    g.sys = sys;
    g.preimages.assign(sys.size(), {});
    for (int i = 0; i < sys.n(); ++i)
        for (int y = 0; y < sys.size(); ++y) g.preimages[sys.apply(i, y)].push_back({i, y});
    for (auto& pre : g.preimages) std::sort(pre.begin(), pre.end());

    // greatest fixpoint: live iff some live vertex maps onto it
    g.live.assign(sys.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < sys.size(); ++x) {
            if (!g.live[x]) continue;
            bool has = false;
            for (auto [i, y] : g.preimages[x])
                if (g.live[y]) { has = true; break; }
            if (!has) { g.live[x] = 0; changed = true; }
        }
    }
    return g;
}

std::string to_dot(const TailGraph& graph) {
    std::ostringstream os;
    os << "digraph \"" << (graph.sys.name.empty() ? "tailgraph" : graph.sys.name) << "\" {\n";
    for (int x = 0; x < graph.sys.size(); ++x) {
        os << "  \"" << graph.sys.points[x] << "\"";
        if (!graph.live[x]) os << " [style=dashed, label=\"" << graph.sys.points[x] << " (no tail)\"]";
        os << ";\n";
    }
    for (int y = 0; y < graph.sys.size(); ++y)
        for (int i = 0; i < graph.sys.n(); ++i)
            os << "  \"" << graph.sys.points[y] << "\" -> \""
               << graph.sys.points[graph.sys.apply(i, y)] << "\" [label=\"" << i + 1 << "\"];\n";
    os << "}\n";
    return os.str();
}

CylinderComplex::CylinderComplex(const TailGraph& graph, int depth)
    : depth_(depth), n_(graph.sys.n()) {
    live_rank_.assign(graph.sys.size(), -1);
    for (int x = 0; x < graph.sys.size(); ++x) {
        if (graph.live[x]) {
            live_rank_[x] = static_cast<int>(live_list_.size());
            live_list_.push_back(x);
        }
    }
    // enumerate label words lexicographically; each pairs with every live
    // deepest vertex, the shallower vertices being forced by the maps
    Word labels(depth, 0);
    while (true) {
        for (int xd : live_list_) {
            Cylinder c;
            c.labels = labels;
            c.vertices.assign(depth + 1, 0);
            c.vertices[depth] = xd;
            for (int k = depth - 1; k >= 0; --k)
                c.vertices[k] = graph.sys.apply(labels[k], c.vertices[k + 1]);
            cyls_.push_back(std::move(c));
        }
        int k = depth - 1;
        while (k >= 0 && ++labels[k] == n_) labels[k--] = 0;
        if (k < 0) break;
    }
}

int CylinderComplex::index_of(const Word& labels, int deepest_vertex) const {
    if (static_cast<int>(labels.size()) != depth_)
        throw std::invalid_argument("CylinderComplex: label word of wrong depth");
    if (deepest_vertex < 0 || deepest_vertex >= static_cast<int>(live_rank_.size()) ||
        live_rank_[deepest_vertex] < 0)
        throw std::invalid_argument("CylinderComplex: deepest vertex is not live");
    long long rank = 0;
    for (int l : labels) {
        if (l < 0 || l >= n_) throw std::invalid_argument("CylinderComplex: bad label");
        rank = rank * n_ + l;
    }
    return static_cast<int>(rank * live_list_.size() + live_rank_[deepest_vertex]);
}

int CylinderComplex::parent(int idx) const {
    if (depth_ == 0) throw std::logic_error("CylinderComplex: depth-0 cylinder has no parent");
    const Cylinder& c = cyls_[idx];
    long long rank = 0;
    for (int k = 0; k + 1 < depth_; ++k) rank = rank * n_ + c.labels[k];
    return static_cast<int>(rank * live_list_.size() + live_rank_[c.vertices[depth_ - 1]]);
}

int CylinderComplex::shift(int idx) const {
    if (depth_ == 0) throw std::logic_error("CylinderComplex: cannot shift a depth-0 cylinder");
    const Cylinder& c = cyls_[idx];
    long long rank = 0;
    for (int k = 1; k < depth_; ++k) rank = rank * n_ + c.labels[k];
    return static_cast<int>(rank * live_list_.size() + live_rank_[c.vertices[depth_]]);
}

CoveringContext::CoveringContext(const DynSys& sys, int max_depth) : graph_(build_tail_graph(sys)) {
    if (graph_.live_count() == 0)
        throw std::invalid_argument("covering: no vertex supports an infinite backward path");
    long long total = 0;
    for (int d = 0; d <= max_depth; ++d) {
        long long words = 1;
        for (int k = 0; k < d; ++k) words *= sys.n();
        total += words * graph_.live_count();
        if (d > 0 && total > 4'000'000) break;
        complexes_.emplace_back(graph_, d);
    }
}

const CylinderComplex& CoveringContext::complex(int depth) const {
    if (depth < 0 || depth > max_depth())
        throw std::out_of_range("covering: depth " + std::to_string(depth) +
                                " beyond the materialized maximum " + std::to_string(max_depth()));
    return complexes_[depth];
}

ContextPtr make_context(const DynSys& sys, int max_depth) {
    return std::make_shared<const CoveringContext>(sys, max_depth);
}

// ---- TailSpec ----

void TailSpec::validate(const DynSys& sys) const {
    auto bad = [](const std::string& what) { return std::invalid_argument("TailSpec: " + what); };
    if (cycle_labels.empty()) throw bad("empty cycle");
    if (prefix_vertices.size() != prefix_labels.size() + 1) throw bad("prefix size mismatch");
    if (cycle_vertices.size() != cycle_labels.size() + 1) throw bad("cycle size mismatch");
    if (cycle_vertices.front() != cycle_vertices.back()) throw bad("cycle is not closed");
    if (prefix_vertices.back() != cycle_vertices.front()) throw bad("prefix end does not meet cycle start");
    auto check_edge = [&](int label, int deeper, int shallower) {
        if (label < 0 || label >= sys.n()) throw bad("label out of range");
        if (deeper < 0 || deeper >= sys.size() || shallower < 0 || shallower >= sys.size())
            throw bad("vertex out of range");
        if (sys.apply(label, deeper) != shallower) throw bad("consistency equation fails");
    };
    for (size_t k = 0; k < prefix_labels.size(); ++k)
        check_edge(prefix_labels[k], prefix_vertices[k + 1], prefix_vertices[k]);
    for (size_t k = 0; k < cycle_labels.size(); ++k)
        check_edge(cycle_labels[k], cycle_vertices[k + 1], cycle_vertices[k]);
}

int TailSpec::label_at(int k) const {
    int p = static_cast<int>(prefix_labels.size());
    if (k < p) return prefix_labels[k];
    return cycle_labels[(k - p) % cycle_labels.size()];
}

int TailSpec::vertex_at(int k) const {
    int p = static_cast<int>(prefix_labels.size());
    if (k <= p) return prefix_vertices[k];
    return cycle_vertices[(k - p) % cycle_labels.size()];
}

TailSpec TailSpec::shifted() const {
    TailSpec t = *this;
    if (!t.prefix_labels.empty()) {
        t.prefix_labels.erase(t.prefix_labels.begin());
        t.prefix_vertices.erase(t.prefix_vertices.begin());
        return t;
    }
    // rotate the cycle one step
    int q = static_cast<int>(cycle_labels.size());
    for (int j = 0; j < q; ++j) {
        t.cycle_labels[j] = cycle_labels[(j + 1) % q];
        t.cycle_vertices[j] = cycle_vertices[(j + 1) % q == 0 ? q : (j + 1)];
    }
    t.cycle_vertices[0] = cycle_vertices[1];
    t.cycle_vertices[q] = t.cycle_vertices[0];
    t.prefix_vertices = {t.cycle_vertices[0]};
    return t;
}

TailSpec TailSpec::prepended(const DynSys& sys, int i) const {
    TailSpec t = *this;
    if (t.prefix_labels.empty()) t.prefix_vertices = {cycle_vertices.front()};
    t.prefix_labels.insert(t.prefix_labels.begin(), i);
    t.prefix_vertices.insert(t.prefix_vertices.begin(), sys.apply(i, t.prefix_vertices.front()));
    return t;
}

TailSpec TailSpec::fixed_point(const DynSys& sys, int x, const Word& w) {
    TailSpec t;
    int q = static_cast<int>(w.size());
    if (q == 0) throw std::invalid_argument("TailSpec: empty cycle word");
    t.cycle_labels = w;
    t.cycle_vertices.assign(q + 1, 0);
    t.cycle_vertices[q] = x;
    for (int k = q - 1; k >= 0; --k)
        t.cycle_vertices[k] = sys.apply(w[k], t.cycle_vertices[k + 1]);
    if (t.cycle_vertices[0] != x)
        throw std::invalid_argument("TailSpec: word does not close a cycle at the given point");
    t.prefix_vertices = {x};
    t.validate(sys);
    return t;
}

// ---- CylinderFunction ----

CylinderFunction::CylinderFunction(ContextPtr ctx, int depth, std::vector<Scalar> values)
    : ctx_(std::move(ctx)), depth_(depth), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != ctx_->complex(depth_).count())
        throw std::invalid_argument("CylinderFunction: value vector has wrong size");
}

CylinderFunction CylinderFunction::constant(ContextPtr ctx, const Scalar& c, int depth) {
    std::vector<Scalar> v(ctx->complex(depth).count(), c);
    return CylinderFunction(std::move(ctx), depth, std::move(v));
}

CylinderFunction CylinderFunction::zero(ContextPtr ctx, int depth) {
    return constant(std::move(ctx), Scalar(0), depth);
}

CylinderFunction CylinderFunction::one(ContextPtr ctx, int depth) {
    return constant(std::move(ctx), Scalar(1), depth);
}

CylinderFunction CylinderFunction::chi(ContextPtr ctx, const Word& w) {
    const auto& cx = ctx->complex(static_cast<int>(w.size()));
    std::vector<Scalar> v(cx.count(), Scalar(0));
    for (int idx = 0; idx < cx.count(); ++idx)
        if (cx.cylinder(idx).labels == w) v[idx] = Scalar(1);
    return CylinderFunction(std::move(ctx), static_cast<int>(w.size()), std::move(v));
}

CylinderFunction CylinderFunction::lift_p(ContextPtr ctx, const std::vector<Scalar>& g, int k) {
    if (static_cast<int>(g.size()) != ctx->sys().size())
        throw std::invalid_argument("lift_p: base function has wrong size");
    const auto& cx = ctx->complex(k);
    std::vector<Scalar> v(cx.count());
    for (int idx = 0; idx < cx.count(); ++idx) v[idx] = g[cx.cylinder(idx).vertices[k]];
    return CylinderFunction(std::move(ctx), k, std::move(v));
}

CylinderFunction CylinderFunction::indicator(const CylinderSet& s) {
    const auto& cx = s.ctx()->complex(s.depth());
    std::vector<Scalar> v(cx.count(), Scalar(0));
    for (int idx = 0; idx < cx.count(); ++idx)
        if (s.member(idx)) v[idx] = Scalar(1);
    return CylinderFunction(s.ctx(), s.depth(), std::move(v));
}

bool CylinderFunction::is_zero() const {
    for (const auto& v : values_)
        if (!v.is_zero()) return false;
    return true;
}

bool CylinderFunction::all_exact() const {
    for (const auto& v : values_)
        if (!v.is_exact()) return false;
    return true;
}

CylinderFunction CylinderFunction::refined(int depth) const {
    if (depth == depth_) return *this;
    if (depth < depth_)
        throw std::invalid_argument("CylinderFunction: cannot coarsen from depth " +
                                    std::to_string(depth_) + " to " + std::to_string(depth));
    const auto& fine = ctx_->complex(depth);
    const auto& coarse = ctx_->complex(depth_);
    std::vector<Scalar> v(fine.count());
    for (int idx = 0; idx < fine.count(); ++idx) {
        const Cylinder& c = fine.cylinder(idx);
        Word pre(c.labels.begin(), c.labels.begin() + depth_);
        v[idx] = values_[coarse.index_of(pre, c.vertices[depth_])];
    }
    return CylinderFunction(ctx_, depth, std::move(v));
}

Scalar CylinderFunction::eval(const TailSpec& tail) const {
    Word labels(depth_);
    for (int k = 0; k < depth_; ++k) labels[k] = tail.label_at(k);
    return values_[ctx_->complex(depth_).index_of(labels, tail.vertex_at(depth_))];
}

CylinderFunction CylinderFunction::conj() const {
    auto v = values_;
    for (auto& s : v) s = s.conj();
    return CylinderFunction(ctx_, depth_, std::move(v));
}

static void require_same_ctx(const ContextPtr& a, const ContextPtr& b) {
    if (a.get() != b.get())
        throw std::invalid_argument("operands belong to different covering systems");
}

template <typename Op>
static CylinderFunction zip(const CylinderFunction& a, const CylinderFunction& b, Op op) {
    require_same_ctx(a.ctx(), b.ctx());
    int d = std::max(a.depth(), b.depth());
    CylinderFunction fa = a.refined(d), fb = b.refined(d);
    std::vector<Scalar> v(a.ctx()->complex(d).count());
    for (size_t i = 0; i < v.size(); ++i) v[i] = op(fa.value(static_cast<int>(i)), fb.value(static_cast<int>(i)));
    return CylinderFunction(a.ctx(), d, std::move(v));
}

CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b) {
    return zip(a, b, [](const Scalar& x, const Scalar& y) { return x + y; });
}
CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b) {
    return zip(a, b, [](const Scalar& x, const Scalar& y) { return x - y; });
}
CylinderFunction operator*(const CylinderFunction& a, const CylinderFunction& b) {
    return zip(a, b, [](const Scalar& x, const Scalar& y) { return x * y; });
}
CylinderFunction operator*(const Scalar& c, const CylinderFunction& f) {
    std::vector<Scalar> v;
    v.reserve(f.values_.size());
    for (const auto& s : f.values_) v.push_back(c * s);
    return CylinderFunction(f.ctx_, f.depth_, std::move(v));
}

bool operator==(const CylinderFunction& a, const CylinderFunction& b) {
    require_same_ctx(a.ctx(), b.ctx());
    int d = std::max(a.depth(), b.depth());
    CylinderFunction fa = a.refined(d), fb = b.refined(d);
    for (size_t i = 0; i < fa.values_.size(); ++i)
        if (fa.values_[i] != fb.values_[i]) return false;
    return true;
}

CylinderFunction act_tau(const CylinderFunction& f) {
    int d = f.depth() + 1;
    const auto& fine = f.ctx()->complex(d);
    std::vector<Scalar> v(fine.count());
    for (int idx = 0; idx < fine.count(); ++idx) v[idx] = f.value(fine.shift(idx));
    return CylinderFunction(f.ctx(), d, std::move(v));
}

CylinderFunction act_sigma(const CylinderFunction& f, int i) {
    const DynSys& sys = f.ctx()->sys();
    if (i < 0 || i >= sys.n()) throw std::invalid_argument("act_sigma: bad map index");
    int d = f.depth();
    const auto& cx = f.ctx()->complex(d);
    std::vector<Scalar> v(cx.count());
    for (int idx = 0; idx < cx.count(); ++idx) {
        const Cylinder& c = cx.cylinder(idx);
        // sigma~_i prepends label i; the image cylinder truncated back to
        // depth d uses labels (i, i_0 .. i_{d-2}) and deepest vertex x_{d-1}
        Word labels(d);
        int deepest;
        if (d == 0) {
            deepest = sys.apply(i, c.vertices[0]);
        } else {
            labels[0] = i;
            for (int k = 1; k < d; ++k) labels[k] = c.labels[k - 1];
            deepest = c.vertices[d - 1];
        }
        v[idx] = f.value(cx.index_of(labels, deepest));
    }
    return CylinderFunction(f.ctx(), d, std::move(v));
}

// ---- CylinderSet ----

CylinderSet::CylinderSet(ContextPtr ctx, int depth, std::vector<char> member)
    : ctx_(std::move(ctx)), depth_(depth), member_(std::move(member)) {
    if (static_cast<int>(member_.size()) != ctx_->complex(depth_).count())
        throw std::invalid_argument("CylinderSet: member vector has wrong size");
}

CylinderSet CylinderSet::empty(ContextPtr ctx, int depth) {
    std::vector<char> m(ctx->complex(depth).count(), 0);
    return CylinderSet(std::move(ctx), depth, std::move(m));
}

CylinderSet CylinderSet::whole(ContextPtr ctx, int depth) {
    std::vector<char> m(ctx->complex(depth).count(), 1);
    return CylinderSet(std::move(ctx), depth, std::move(m));
}

CylinderSet CylinderSet::label_prefix(ContextPtr ctx, const Word& w) {
    const auto& cx = ctx->complex(static_cast<int>(w.size()));
    std::vector<char> m(cx.count(), 0);
    for (int idx = 0; idx < cx.count(); ++idx)
        if (cx.cylinder(idx).labels == w) m[idx] = 1;
    return CylinderSet(std::move(ctx), static_cast<int>(w.size()), std::move(m));
}

CylinderSet CylinderSet::base_preimage(ContextPtr ctx, const std::vector<int>& A) {
    std::vector<char> in(ctx->sys().size(), 0);
    for (int x : A) {
        if (x < 0 || x >= ctx->sys().size())
            throw std::invalid_argument("base_preimage: unknown point index");
        in[x] = 1;
    }
    const auto& cx = ctx->complex(0);
    std::vector<char> m(cx.count(), 0);
    for (int idx = 0; idx < cx.count(); ++idx)
        if (in[cx.cylinder(idx).vertices[0]]) m[idx] = 1;
    return CylinderSet(std::move(ctx), 0, std::move(m));
}

CylinderSet CylinderSet::single(ContextPtr ctx, const Cylinder& c) {
    const auto& cx = ctx->complex(c.depth());
    std::vector<char> m(cx.count(), 0);
    m[cx.index_of(c.labels, c.vertices[c.depth()])] = 1;
    return CylinderSet(std::move(ctx), c.depth(), std::move(m));
}

int CylinderSet::count() const {
    int c = 0;
    for (char v : member_) c += v;
    return c;
}

bool CylinderSet::is_whole() const { return count() == static_cast<int>(member_.size()); }

std::vector<Cylinder> CylinderSet::cylinders() const {
    std::vector<Cylinder> out;
    const auto& cx = ctx_->complex(depth_);
    for (int idx = 0; idx < cx.count(); ++idx)
        if (member_[idx]) out.push_back(cx.cylinder(idx));
    return out;
}

CylinderSet CylinderSet::refined(int depth) const {
    if (depth == depth_) return *this;
    if (depth < depth_) throw std::invalid_argument("CylinderSet: cannot coarsen");
    const auto& fine = ctx_->complex(depth);
    const auto& coarse = ctx_->complex(depth_);
    std::vector<char> m(fine.count(), 0);
    for (int idx = 0; idx < fine.count(); ++idx) {
        const Cylinder& c = fine.cylinder(idx);
        Word pre(c.labels.begin(), c.labels.begin() + depth_);
        m[idx] = member_[coarse.index_of(pre, c.vertices[depth_])];
    }
    return CylinderSet(ctx_, depth, std::move(m));
}

bool CylinderSet::contains(const TailSpec& tail) const {
    Word labels(depth_);
    for (int k = 0; k < depth_; ++k) labels[k] = tail.label_at(k);
    return member_[ctx_->complex(depth_).index_of(labels, tail.vertex_at(depth_))];
}

template <typename Op>
static CylinderSet zip_set(const CylinderSet& a, const CylinderSet& b, Op op) {
    if (a.ctx().get() != b.ctx().get())
        throw std::invalid_argument("set operands belong to different covering systems");
    int d = std::max(a.depth(), b.depth());
    CylinderSet sa = a.refined(d), sb = b.refined(d);
    std::vector<char> m(a.ctx()->complex(d).count());
    for (size_t i = 0; i < m.size(); ++i)
        m[i] = op(sa.member(static_cast<int>(i)), sb.member(static_cast<int>(i)));
    CylinderSet out(a.ctx(), d, std::move(m));
    return out;
}

CylinderSet set_union(const CylinderSet& a, const CylinderSet& b) {
    auto out = zip_set(a, b, [](bool x, bool y) { return x || y; });
    out.refinement_depth_used_ = out.depth();
    return out;
}
CylinderSet set_intersection(const CylinderSet& a, const CylinderSet& b) {
    auto out = zip_set(a, b, [](bool x, bool y) { return x && y; });
    out.refinement_depth_used_ = out.depth();
    return out;
}
CylinderSet set_difference(const CylinderSet& a, const CylinderSet& b) {
    auto out = zip_set(a, b, [](bool x, bool y) { return x && !y; });
    out.refinement_depth_used_ = out.depth();
    return out;
}

CylinderSet CylinderSet::complement() const {
    auto m = member_;
    for (auto& v : m) v = !v;
    return CylinderSet(ctx_, depth_, std::move(m));
}

bool is_subset(const CylinderSet& a, const CylinderSet& b) {
    return set_difference(a, b).is_empty();
}

bool operator==(const CylinderSet& a, const CylinderSet& b) {
    return is_subset(a, b) && is_subset(b, a);
}

CylinderSet image_sigma(const CylinderSet& a, int i) {
    const DynSys& sys = a.ctx()->sys();
    if (i < 0 || i >= sys.n()) throw std::invalid_argument("image_sigma: bad map index");
    int d = a.depth();
    const auto& cx = a.ctx()->complex(d);
    const auto& fine = a.ctx()->complex(d + 1);
    std::vector<char> m(fine.count(), 0);
    for (int idx = 0; idx < cx.count(); ++idx) {
        if (!a.member(idx)) continue;
        const Cylinder& c = cx.cylinder(idx);
        Word labels;
        labels.reserve(d + 1);
        labels.push_back(i);
        labels.insert(labels.end(), c.labels.begin(), c.labels.end());
        m[fine.index_of(labels, c.vertices[d])] = 1;
    }
    return CylinderSet(a.ctx(), d + 1, std::move(m));
}

CylinderSet image_tau(const CylinderSet& a) {
    CylinderSet s = a.depth() == 0 ? a.refined(1) : a;
    const auto& cx = s.ctx()->complex(s.depth());
    std::vector<char> m(s.ctx()->complex(s.depth() - 1).count(), 0);
    for (int idx = 0; idx < cx.count(); ++idx)
        if (s.member(idx)) m[cx.shift(idx)] = 1;
    return CylinderSet(s.ctx(), s.depth() - 1, std::move(m));
}

CylinderSet preimage_sigma(const CylinderSet& a, int i) {
    return image_tau(set_intersection(a, CylinderSet::label_prefix(a.ctx(), {i})));
}

// ---- separation ----

SeparationResult separation_test(const TailGraph& graph) {
    const DynSys& sys = graph.sys;
    const int m = sys.size();
    // off-diagonal pairs of live vertices; greatest fixpoint of "has an
    // incoming edge from a surviving pair under a common label"
    std::vector<char> alive(m * m, 0);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (x != y && graph.live[x] && graph.live[y]) alive[x * m + y] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < m; ++x) {
            for (int y = 0; y < m; ++y) {
                if (!alive[x * m + y]) continue;
                bool has = false;
                for (int i = 0; i < sys.n() && !has; ++i)
                    for (int xp = 0; xp < m && !has; ++xp) {
                        if (sys.apply(i, xp) != x) continue;
                        for (int yp = 0; yp < m; ++yp)
                            if (yp != xp && alive[xp * m + yp] && sys.apply(i, yp) == y) {
                                has = true;
                                break;
                            }
                    }
                if (!has) { alive[x * m + y] = 0; changed = true; }
            }
        }
    }
    SeparationResult res;
    for (int x = 0; x < m && !res.witness; ++x)
        for (int y = x + 1; y < m; ++y)
            if (alive[x * m + y]) { res.witness = {x, y}; break; }
    res.separates = !res.witness.has_value();
    return res;
}

// ---- tau determinism ----

TauDeterminismReport tau_determinism(const TailGraph& graph, int D) {
    TauDeterminismReport rep;
    rep.max_depth = D;
    CoveringContext ctx(graph.sys, D);
    for (int d = 0; d <= D; ++d) rep.cylinder_counts.push_back(ctx.complex(d).count());
    for (int d = 1; d <= D; ++d) {
        const auto& fine = ctx.complex(d);
        const auto& coarse = ctx.complex(d - 1);
        std::vector<int> hit(coarse.count(), 0);
        std::vector<long long> per_label(graph.sys.n(), 0);
        for (int idx = 0; idx < fine.count(); ++idx) {
            const Cylinder& c = fine.cylinder(idx);
            int sh = fine.shift(idx);
            hit[sh] += 1;
            per_label[c.labels[0]] += 1;
            // unique tau-history: prepending the first label to the shifted
            // cylinder must give back exactly this cylinder
            const Cylinder& s = coarse.cylinder(sh);
            Word labels;
            labels.push_back(c.labels[0]);
            labels.insert(labels.end(), s.labels.begin(), s.labels.end());
            if (fine.index_of(labels, s.vertices[d - 1]) != idx) {
                rep.detail = "depth " + std::to_string(d) + ": tau-history not unique at cylinder " +
                             std::to_string(idx);
                return rep;
            }
        }
        long long label_total = 0;
        for (long long c : per_label) label_total += c;
        if (label_total != fine.count()) {
            rep.detail = "depth " + std::to_string(d) + ": the sets X~_i do not partition X~";
            return rep;
        }
        for (int idx = 0; idx < coarse.count(); ++idx) {
            if (hit[idx] == 0) {
                rep.detail = "depth " + std::to_string(d) + ": tau not surjective onto depth " +
                             std::to_string(d - 1);
                return rep;
            }
        }
    }
    rep.pass = true;
    return rep;
}

nlohmann::json complex_to_json(const CoveringContext& ctx, int depth) {
    nlohmann::json j;
    j["depth"] = depth;
    j["cylinders"] = nlohmann::json::array();
    const auto& cx = ctx.complex(depth);
    for (int idx = 0; idx < cx.count(); ++idx) {
        const Cylinder& c = cx.cylinder(idx);
        nlohmann::json jc;
        Word display;
        for (int l : c.labels) display.push_back(l + 1);
        jc["labels"] = display;
        std::vector<std::string> names;
        for (int v : c.vertices) names.push_back(ctx.sys().points[v]);
        jc["vertices"] = names;
        j["cylinders"].push_back(jc);
    }
    return j;
}

std::string word_str(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) s += std::to_string(l + 1);
    return s;
}

}  // namespace mds
