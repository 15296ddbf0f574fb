#include "mds/corealg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mds {

namespace {

constexpr double kPi = 3.14159265358979323846;

// f o sigma~_w, letters applied left to right
CylinderFunction compose_sigma_word(const CylinderFunction& f, const Word& w) {
    CylinderFunction g = f;
    for (int l : w) g = act_sigma(g, l);
    return g;
}

CylinderFunction act_tau_k(const CylinderFunction& f, int k) {
    CylinderFunction g = f;
    for (int j = 0; j < k; ++j) g = act_tau(g);
    return g;
}

bool is_prefix(const Word& p, const Word& w) {
    if (p.size() > w.size()) return false;
    return std::equal(p.begin(), p.end(), w.begin());
}

std::vector<Word> words_of_length(int n, int len) {
    std::vector<Word> out;
    Word w(len, 0);
    while (true) {
        out.push_back(w);
        int k = len - 1;
        while (k >= 0 && ++w[k] == n) w[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

}  // namespace

CoreElement CoreElement::zero(ContextPtr ctx) {
    CoreElement a;
    a.ctx_ = std::move(ctx);
    return a;
}

CoreElement CoreElement::one(ContextPtr ctx) {
    return from_function(CylinderFunction::one(ctx));
}

CoreElement CoreElement::from_function(CylinderFunction f) {
    CoreElement a;
    a.ctx_ = f.ctx();
    a.terms_.push_back({{}, {}, std::move(f)});
    return a;
}

CoreElement CoreElement::term(Word u, Word v, CylinderFunction f) {
    const int n = f.ctx()->sys().n();
    for (int l : u)
        if (l < 0 || l >= n) throw std::invalid_argument("CoreElement: malformed word");
    for (int l : v)
        if (l < 0 || l >= n) throw std::invalid_argument("CoreElement: malformed word");
    CoreElement a;
    a.ctx_ = f.ctx();
    a.terms_.push_back({std::move(u), std::move(v), std::move(f)});
    return a;
}

CoreElement CoreElement::generator(ContextPtr ctx, int i) {
    return term({i}, {}, CylinderFunction::one(ctx));
}

CoreElement CoreElement::word_isometry(ContextPtr ctx, const Word& w) {
    return term(w, {}, CylinderFunction::one(ctx));
}

CanonicalForm CoreElement::canonical() const {
    CanonicalForm out;
    if (!ctx_) return out;
    std::map<int, std::vector<const CoreTerm*>> by_degree;
    for (const auto& t : terms_)
        by_degree[static_cast<int>(t.u.size()) - static_cast<int>(t.v.size())].push_back(&t);
    for (auto& [d, ts] : by_degree) {
        int level = 0;
        for (const auto* t : ts) level = std::max(level, static_cast<int>(t->v.size()));
        DegreeBlock block = canonical_at(d, level);
        if (!block.entries.empty()) out[d] = std::move(block);
    }
    return out;
}

DegreeBlock CoreElement::canonical_at(int degree, int level) const {
    DegreeBlock block;
    block.degree = degree;
    block.level = level;
    const int n = ctx_->sys().n();
    std::map<std::pair<Word, Word>, CylinderFunction> acc;
    for (const auto& t : terms_) {
        if (static_cast<int>(t.u.size()) - static_cast<int>(t.v.size()) != degree) continue;
        if (static_cast<int>(t.v.size()) > level)
            throw std::invalid_argument("canonical_at: level below a term's index length");
        // raise t_u f t_v* = sum_i t_ui (f o sigma~_i) t_vi* until |v| = level
        std::vector<CoreTerm> frontier{t};
        while (static_cast<int>(frontier.front().v.size()) < level) {
            std::vector<CoreTerm> next;
            for (const auto& s : frontier) {
                for (int i = 0; i < n; ++i) {
                    CoreTerm r = s;
                    r.u.push_back(i);
                    r.v.push_back(i);
                    r.f = act_sigma(s.f, i);
                    next.push_back(std::move(r));
                }
            }
            frontier = std::move(next);
        }
        for (auto& s : frontier) {
            auto key = std::make_pair(s.u, s.v);
            auto it = acc.find(key);
            if (it == acc.end())
                acc.emplace(key, std::move(s.f));
            else
                it->second = it->second + s.f;
        }
    }
    int depth = 0;
    for (const auto& [key, f] : acc) depth = std::max(depth, f.depth());
    for (auto& [key, f] : acc) {
        if (f.is_zero()) continue;
        block.entries.emplace(key, f.refined(depth));
    }
    block.depth = depth;
    return block;
}

bool CoreElement::is_zero() const { return canonical().empty(); }

std::vector<int> CoreElement::degrees() const {
    std::vector<int> out;
    for (const auto& [d, block] : canonical()) out.push_back(d);
    return out;
}

std::optional<CylinderFunction> CoreElement::as_function() const {
    auto form = canonical();
    if (form.empty()) return CylinderFunction::zero(ctx_);
    if (form.size() != 1 || form.begin()->first != 0) return std::nullopt;
    const DegreeBlock& b = form.begin()->second;
    if (b.level != 0) return std::nullopt;
    return b.entries.begin()->second;
}

CoreElement operator+(const CoreElement& a, const CoreElement& b) {
    if (!a.ctx_) return b;
    if (!b.ctx_) return a;
    if (a.ctx_.get() != b.ctx_.get())
        throw std::invalid_argument("CoreElement: mismatched covering systems");
    CoreElement c = a;
    c.terms_.insert(c.terms_.end(), b.terms_.begin(), b.terms_.end());
    return c;
}

CoreElement operator-(const CoreElement& a, const CoreElement& b) {
    return a + (Scalar(-1) * b);
}

CoreElement operator*(const Scalar& c, const CoreElement& a) {
    CoreElement out = a;
    for (auto& t : out.terms_) t.f = c * t.f;
    return out;
}

bool operator==(const CoreElement& a, const CoreElement& b) { return (a - b).is_zero(); }

CoreElement multiply(const CoreElement& a, const CoreElement& b) {
    if (!a.ctx() || !b.ctx()) return a.ctx() ? CoreElement::zero(a.ctx()) : b;
    if (a.ctx().get() != b.ctx().get())
        throw std::invalid_argument("multiply: mismatched covering systems");
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& s : a.terms()) {
        for (const auto& t : b.terms()) {
            // (t_u f t_v*)(t_w g t_z*)
            const Word &u = s.u, &v = s.v, &w = t.u, &z = t.v;
            if (is_prefix(v, w)) {
                Word wp(w.begin() + v.size(), w.end());
                Word nu = u;
                nu.insert(nu.end(), wp.begin(), wp.end());
                out = out + CoreElement::term(std::move(nu), z, compose_sigma_word(s.f, wp) * t.f);
            } else if (is_prefix(w, v)) {
                Word vp(v.begin() + w.size(), v.end());
                Word nz = z;
                nz.insert(nz.end(), vp.begin(), vp.end());
                out = out + CoreElement::term(u, std::move(nz), s.f * compose_sigma_word(t.f, vp));
            }
            // otherwise t_v* t_w = 0
        }
    }
    return out;
}

CoreElement adjoint(const CoreElement& a) {
    if (!a.ctx()) return a;
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& t : a.terms()) out = out + CoreElement::term(t.v, t.u, t.f.conj());
    return out;
}

CoreElement coefficient_extract(const CoreElement& a, const Word& u, const Word& v) {
    auto tu_star = adjoint(CoreElement::word_isometry(a.ctx(), u));
    auto tv = CoreElement::word_isometry(a.ctx(), v);
    return multiply(multiply(tu_star, a), tv);
}

CoreElement gauge_scale(const CoreElement& a, std::complex<double> z) {
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& t : a.terms()) {
        int d = static_cast<int>(t.u.size()) - static_cast<int>(t.v.size());
        std::complex<double> factor = std::pow(z, d);
        out = out + CoreElement::term(t.u, t.v, Scalar::complex(factor) * t.f);
    }
    return out;
}

CoreElement gauge_scale_root(const CoreElement& a, int M, int j) {
    if (M < 1) throw std::invalid_argument("gauge_scale_root: M must be >= 1");
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& t : a.terms()) {
        int d = static_cast<int>(t.u.size()) - static_cast<int>(t.v.size());
        long long e = (static_cast<long long>(j) * d) % M;
        if (e < 0) e += M;
        if (e == 0) {
            out = out + CoreElement::term(t.u, t.v, t.f);
        } else if (2 * e == M) {  // half turn stays exact
            out = out + CoreElement::term(t.u, t.v, Scalar(-1) * t.f);
        } else {
            std::complex<double> factor = std::polar(1.0, 2.0 * kPi * double(e) / double(M));
            out = out + CoreElement::term(t.u, t.v, Scalar::complex(factor) * t.f);
        }
    }
    return out;
}

CoreElement gauge_expect(const CoreElement& a) {
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& t : a.terms())
        if (t.u.size() == t.v.size()) out = out + CoreElement::term(t.u, t.v, t.f);
    return out;
}

CoreElement gauge_average(const CoreElement& a, int M) {
    if (M < 1) throw std::invalid_argument("gauge_average: M must be >= 1");
    // (1/M) sum_j z_j^d is 1 when M divides d and 0 otherwise
    CoreElement out = CoreElement::zero(a.ctx());
    for (const auto& t : a.terms()) {
        int d = static_cast<int>(t.u.size()) - static_cast<int>(t.v.size());
        if (d % M == 0) out = out + CoreElement::term(t.u, t.v, t.f);
    }
    return out;
}

CoreElement isometry_v(ContextPtr ctx) {
    auto rd = range_deficiency(ctx->sys());
    if (!rd.surjective)
        throw std::invalid_argument(
            "isometry_v: the system is not surjective, so sum t_i t_i* = 1 fails "
            "in the covering picture and V is not a proper isometry there");
    const int n = ctx->sys().n();
    CoreElement out = CoreElement::zero(ctx);
    Scalar inv_sqrt_n(Rational(0), Rational(1, n), n);  // 1/sqrt(n) = sqrt(n)/n
    for (int i = 0; i < n; ++i)
        out = out + CoreElement::term({i}, {}, CylinderFunction::constant(ctx, inv_sqrt_n));
    return out;
}

CoreElement alpha(const CoreElement& b) {
    CoreElement v = isometry_v(b.ctx());
    return multiply(multiply(v, b), adjoint(v));
}

IdentityReport lemma_calculation(const Word& w, const CylinderFunction& f) {
    auto ctx = f.ctx();
    auto tw = CoreElement::word_isometry(ctx, w);
    auto lhs = multiply(multiply(tw, CoreElement::from_function(f)), adjoint(tw));
    auto rhs = CoreElement::from_function(CylinderFunction::chi(ctx, w) *
                                          act_tau_k(f, static_cast<int>(w.size())));
    IdentityReport rep;
    rep.pass = (lhs == rhs);
    if (!rep.pass) rep.detail = "t_w f t_w* != chi_w (f o tau^k) for w = " + word_str(w);
    return rep;
}

// ---- tower ----

TowerElement TowerElement::from_core(const CoreElement& a, int level) {
    for (int d : a.degrees())
        if (d != 0)
            throw std::invalid_argument("TowerElement: element has a nonzero degree-" +
                                        std::to_string(d) + " part");
    TowerElement b;
    b.ctx = a.ctx();
    b.level = level;
    b.entries = a.canonical_at(0, level).entries;
    return b;
}

CoreElement TowerElement::to_core() const {
    CoreElement out = CoreElement::zero(ctx);
    for (const auto& [key, f] : entries) out = out + CoreElement::term(key.first, key.second, f);
    return out;
}

TowerElement tower_embed(const TowerElement& b) {
    TowerElement out;
    out.ctx = b.ctx;
    out.level = b.level + 1;
    const int n = b.ctx->sys().n();
    for (const auto& [key, f] : b.entries) {
        for (int i = 0; i < n; ++i) {
            Word u = key.first, v = key.second;
            u.push_back(i);
            v.push_back(i);
            out.entries.emplace(std::make_pair(std::move(u), std::move(v)), act_sigma(f, i));
        }
    }
    return out;
}

TowerElement alpha_tower(const TowerElement& b) {
    TowerElement out;
    out.ctx = b.ctx;
    out.level = b.level + 1;
    const int n = b.ctx->sys().n();
    Scalar inv_n(Rational(1, n));
    for (const auto& [key, f] : b.entries) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Word u{i}, v{j};
                u.insert(u.end(), key.first.begin(), key.first.end());
                v.insert(v.end(), key.second.begin(), key.second.end());
                auto k = std::make_pair(std::move(u), std::move(v));
                auto it = out.entries.find(k);
                if (it == out.entries.end())
                    out.entries.emplace(k, inv_n * f);
                else
                    it->second = it->second + inv_n * f;
            }
        }
    }
    return out;
}

namespace {

double block_spectral_norm(const ContextPtr& ctx, int level_rows, int level_cols,
                           const std::map<std::pair<Word, Word>, CylinderFunction>& entries) {
    const int n = ctx->sys().n();
    auto rows = words_of_length(n, level_rows);
    auto cols = words_of_length(n, level_cols);
    std::map<Word, int> row_idx, col_idx;
    for (size_t i = 0; i < rows.size(); ++i) row_idx[rows[i]] = static_cast<int>(i);
    for (size_t i = 0; i < cols.size(); ++i) col_idx[cols[i]] = static_cast<int>(i);
    int depth = 0;
    for (const auto& [key, f] : entries) depth = std::max(depth, f.depth());
    std::vector<std::pair<std::pair<int, int>, CylinderFunction>> refined;
    for (const auto& [key, f] : entries)
        refined.push_back({{row_idx.at(key.first), col_idx.at(key.second)}, f.refined(depth)});
    double best = 0.0;
    const int cyl_count = ctx->complex(depth).count();
    Eigen::MatrixXcd m(rows.size(), cols.size());
    for (int c = 0; c < cyl_count; ++c) {
        m.setZero();
        for (const auto& [pos, f] : refined) m(pos.first, pos.second) = f.value(c).to_complex();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        best = std::max(best, svd.singularValues()(0));
    }
    return best;
}

}  // namespace

double tower_norm(const TowerElement& b) {
    if (b.entries.empty()) return 0.0;
    return block_spectral_norm(b.ctx, b.level, b.level, b.entries);
}

std::optional<Scalar> tower_norm_exact(const TowerElement& b) {
    for (const auto& [key, f] : b.entries)
        if (key.first != key.second && !f.is_zero()) return std::nullopt;
    Scalar best(0);
    for (const auto& [key, f] : b.entries) {
        if (key.first != key.second) continue;
        const auto& cx = b.ctx->complex(f.depth());
        for (int c = 0; c < cx.count(); ++c)
            if (Scalar::abs_less(best, f.value(c))) best = f.value(c).abs();
    }
    return best;
}

double homogeneous_norm(const CoreElement& a, int d) {
    auto form = a.canonical();
    for (const auto& [deg, block] : form)
        if (deg != d)
            throw std::invalid_argument("homogeneous_norm: element has a degree-" +
                                        std::to_string(deg) + " part");
    auto it = form.find(d);
    if (it == form.end()) return 0.0;
    const DegreeBlock& b = it->second;
    return block_spectral_norm(a.ctx(), b.level + b.degree, b.level, b.entries);
}

std::pair<double, double> norm_bounds(const CoreElement& a) {
    double lo = 0.0, hi = 0.0;
    for (const auto& [d, block] : a.canonical()) {
        double h = block_spectral_norm(a.ctx(), block.level + block.degree, block.level,
                                       block.entries);
        lo = std::max(lo, h);
        hi += h;
    }
    return {lo, hi};
}

// ---- ideals ----

const CylinderSet& IdealData::at(int k) const {
    if (k < static_cast<int>(F.size())) return F[k];
    return F[preperiod + (k - preperiod) % period];
}

IdealData ideal_from_set(const CylinderSet& F0, int max_iter) {
    IdealData J;
    J.F.push_back(F0);
    for (int k = 0; k < max_iter; ++k) {
        CylinderSet next = image_tau(J.F.back());
        bool repeated = false;
        for (size_t j = 0; j < J.F.size(); ++j) {
            if (J.F[j] == next) {
                J.preperiod = static_cast<int>(j);
                J.period = static_cast<int>(J.F.size()) - J.preperiod;
                repeated = true;
                break;
            }
        }
        if (repeated) break;
        J.F.push_back(std::move(next));
        if (k + 1 == max_iter)
            throw std::runtime_error("ideal_from_set: no period found within iteration bound");
    }

    auto ctx = F0.ctx();
    const int n = ctx->sys().n();
    {
        CylinderSet tau_image = image_tau(F0);
        CylinderSet escape = set_difference(tau_image, F0);
        J.tau_invariant = escape.is_empty();
        if (!J.tau_invariant) {
            const auto c = escape.cylinders().front();
            J.tau_witness = "tau(F) leaves F at cylinder (labels " + word_str(c.labels) + ")";
        }
    }
    {
        J.robust = true;
        int span = J.preperiod + J.period;
        for (int k = 0; k < span && J.robust; ++k) {
            CylinderSet un = image_sigma(J.at(k + 1), 0);
            for (int i = 1; i < n; ++i) un = set_union(un, image_sigma(J.at(k + 1), i));
            CylinderSet escape = set_difference(un, J.at(k));
            if (!escape.is_empty()) {
                J.robust = false;
                J.robust_witness = "union_i sigma~_i(F_" + std::to_string(k + 1) +
                                   ") is not contained in F_" + std::to_string(k);
            }
        }
    }
    {
        bool all_equal = true;
        for (size_t k = 1; k < J.F.size(); ++k)
            if (J.F[k] != J.F[0]) { all_equal = false; break; }
        bool sigma_closed = true;
        for (int i = 0; i < n && sigma_closed; ++i)
            sigma_closed = is_subset(image_sigma(F0, i), F0.refined(F0.depth() + 1));
        J.bi_invariant = J.tau_invariant && all_equal && sigma_closed;
    }
    return J;
}

bool ideal_membership(const CoreElement& a, const IdealData& J) {
    auto form = a.canonical();
    if (!J.bi_invariant) {
        for (const auto& [d, block] : form)
            if (d != 0)
                throw std::invalid_argument(
                    "ideal_membership: the set is not bi-invariant, so only the ideal of the "
                    "core B is defined; a mixed-degree element cannot be tested against it");
    }
    for (const auto& [d, block] : form) {
        const CylinderSet& F = J.bi_invariant ? J.F[0] : J.at(block.level);
        for (const auto& [key, f] : block.entries) {
            if (!(CylinderFunction::indicator(F) * f).is_zero()) return false;
        }
    }
    return true;
}

// ---- groupoid correspondence ----

IdentityReport correspondence_unitary(ContextPtr ctx, int D) {
    IdentityReport rep;
    auto rd = range_deficiency(ctx->sys());
    if (!rd.surjective) {
        rep.detail = "correspondence check requires a surjective system";
        return rep;
    }
    const int n = ctx->sys().n();
    const auto& cx = ctx->complex(D);
    std::vector<CylinderFunction> family;
    for (int c = 0; c < cx.count(); ++c)
        family.push_back(
            CylinderFunction::indicator(CylinderSet::single(ctx, cx.cylinder(c))));

    auto apply_u = [&](const CylinderFunction& xi) {
        std::vector<CylinderFunction> out;
        for (int i = 0; i < n; ++i) out.push_back(act_sigma(xi, i));
        return out;
    };
    auto inner_e = [&](const CylinderFunction& xi, const CylinderFunction& eta) {
        CylinderFunction acc = CylinderFunction::zero(ctx);
        for (int i = 0; i < n; ++i)
            acc = acc + act_sigma(xi, i).conj() * act_sigma(eta, i);
        return acc;
    };
    auto inner_f = [&](const std::vector<CylinderFunction>& zeta,
                       const std::vector<CylinderFunction>& eta) {
        CylinderFunction acc = CylinderFunction::zero(ctx);
        for (int i = 0; i < n; ++i) acc = acc + zeta[i].conj() * eta[i];
        return acc;
    };

    for (const auto& xi : family) {
        for (const auto& eta : family) {
            if (inner_f(apply_u(xi), apply_u(eta)) != inner_e(xi, eta)) {
                rep.detail = "inner products disagree";
                return rep;
            }
        }
    }
    for (const auto& xi : family) {
        auto u_xi = apply_u(xi);
        for (const auto& f : family) {
            // left action: U(f . xi) vs f . U(xi), where (f . zeta)_i = (f o sigma~_i) zeta_i
            auto lhs = apply_u(f * xi);
            for (int i = 0; i < n; ++i) {
                if (lhs[i] != act_sigma(f, i) * u_xi[i]) {
                    rep.detail = "left module action does not intertwine";
                    return rep;
                }
            }
            // right action: U(xi . f) vs U(xi) . f, where xi . f = xi (f o tau)
            auto rhs = apply_u(xi * act_tau(f));
            for (int i = 0; i < n; ++i) {
                if (rhs[i] != u_xi[i] * f) {
                    rep.detail = "right module action does not intertwine";
                    return rep;
                }
            }
        }
    }
    rep.pass = true;
    return rep;
}

nlohmann::json core_to_json(const CoreElement& a) {
    nlohmann::json j;
    j["degrees"] = nlohmann::json::object();
    for (const auto& [d, block] : a.canonical()) {
        nlohmann::json jb;
        jb["K"] = block.level;
        jb["D"] = block.depth;
        jb["entries"] = nlohmann::json::array();
        for (const auto& [key, f] : block.entries) {
            nlohmann::json je;
            je["u"] = word_str(key.first);
            je["v"] = word_str(key.second);
            std::vector<std::string> vals;
            for (int c = 0; c < a.ctx()->complex(f.depth()).count(); ++c)
                vals.push_back(f.value(c).str());
            je["values"] = vals;
            jb["entries"].push_back(je);
        }
        j["degrees"][std::to_string(d)] = jb;
    }
    return j;
}

}  // namespace mds
