#include "mds/dynsys.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace mds {

void DynSys::validate() const {
    if (points.empty()) throw std::invalid_argument("system '" + name + "': empty point set");
    if (maps.empty()) throw std::invalid_argument("system '" + name + "': no maps");
    const int m = size();
    for (int i = 0; i < n(); ++i) {
        if (static_cast<int>(maps[i].size()) != m)
            throw std::invalid_argument("system '" + name + "': map " + std::to_string(i) +
                                        " has wrong length");
        for (int x = 0; x < m; ++x) {
            if (maps[i][x] < 0 || maps[i][x] >= m)
                throw std::invalid_argument("system '" + name + "': map entry out of range at (i=" +
                                            std::to_string(i) + ", x=" + std::to_string(x) + ")");
        }
    }
    std::set<std::string> seen(points.begin(), points.end());
    if (static_cast<int>(seen.size()) != m)
        throw std::invalid_argument("system '" + name + "': duplicate point names");
}

DynSys DynSys::from_json(const nlohmann::json& j) {
    DynSys sys;
    if (j.contains("name")) sys.name = j.at("name").get<std::string>();
    if (!j.contains("points") || !j.at("points").is_array())
        throw std::invalid_argument("input: missing or malformed 'points' array");
    if (!j.contains("maps") || !j.at("maps").is_array())
        throw std::invalid_argument("input: missing or malformed 'maps' array");
    sys.points = j.at("points").get<std::vector<std::string>>();
    sys.maps = j.at("maps").get<std::vector<std::vector<int>>>();
    sys.validate();
    return sys;
}

nlohmann::json DynSys::to_json() const {
    nlohmann::json j;
    if (!name.empty()) j["name"] = name;
    j["points"] = points;
    j["maps"] = maps;
    return j;
}

static void check_point(const DynSys& sys, int x) {
    if (x < 0 || x >= sys.size())
        throw std::invalid_argument("unknown point index " + std::to_string(x));
}

RangeDeficiency range_deficiency(const DynSys& sys) {
    std::vector<char> hit(sys.size(), 0);
    for (int i = 0; i < sys.n(); ++i)
        for (int x = 0; x < sys.size(); ++x) hit[sys.apply(i, x)] = 1;
    RangeDeficiency out;
    for (int x = 0; x < sys.size(); ++x)
        (hit[x] ? out.range_union : out.deficiency).push_back(x);
    out.surjective = out.deficiency.empty();
    return out;
}

std::vector<int> forward_orbit(const DynSys& sys, int x) {
    check_point(sys, x);
    std::vector<char> in(sys.size(), 0);
    std::queue<int> q;
    in[x] = 1;
    q.push(x);
    while (!q.empty()) {
        int y = q.front();
        q.pop();
        for (int i = 0; i < sys.n(); ++i) {
            int z = sys.apply(i, y);
            if (!in[z]) { in[z] = 1; q.push(z); }
        }
    }
    std::vector<int> out;
    for (int y = 0; y < sys.size(); ++y)
        if (in[y]) out.push_back(y);
    return out;
}

static bool subset_invariant(const DynSys& sys, unsigned mask) {
    for (int x = 0; x < sys.size(); ++x) {
        if (!(mask >> x & 1)) continue;
        for (int i = 0; i < sys.n(); ++i)
            if (!(mask >> sys.apply(i, x) & 1)) return false;
    }
    return true;
}

static std::vector<int> mask_to_set(unsigned mask, int m) {
    std::vector<int> s;
    for (int x = 0; x < m; ++x)
        if (mask >> x & 1) s.push_back(x);
    return s;
}

std::vector<std::vector<int>> invariant_sets(const DynSys& sys, int guard) {
    if (sys.size() > guard)
        throw std::invalid_argument("invariant_sets: |X| = " + std::to_string(sys.size()) +
                                    " exceeds the exhaustive-scan guard of " +
                                    std::to_string(guard) + " points; refusing the 2^|X| scan");
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << sys.size()); ++mask)
        if (subset_invariant(sys, mask)) out.push_back(mask_to_set(mask, sys.size()));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::vector<int> full_orbit(const DynSys& sys, int x) {
    check_point(sys, x);
    // weak component in the undirected graph with edges {y, sigma_i(y)}
    std::vector<char> in(sys.size(), 0);
    std::queue<int> q;
    in[x] = 1;
    q.push(x);
    while (!q.empty()) {
        int y = q.front();
        q.pop();
        for (int i = 0; i < sys.n(); ++i) {
            int z = sys.apply(i, y);
            if (!in[z]) { in[z] = 1; q.push(z); }
            for (int w = 0; w < sys.size(); ++w)
                if (sys.apply(i, w) == y && !in[w]) { in[w] = 1; q.push(w); }
        }
    }
    std::vector<int> out;
    for (int y = 0; y < sys.size(); ++y)
        if (in[y]) out.push_back(y);
    return out;
}

std::vector<std::vector<int>> bi_invariant_sets(const DynSys& sys) {
    // weak components, then all unions of components
    std::vector<int> comp(sys.size(), -1);
    std::vector<std::vector<int>> comps;
    for (int x = 0; x < sys.size(); ++x) {
        if (comp[x] >= 0) continue;
        auto members = full_orbit(sys, x);
        for (int y : members) comp[y] = static_cast<int>(comps.size());
        comps.push_back(members);
    }
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << comps.size()); ++mask) {
        std::vector<int> s;
        for (size_t c = 0; c < comps.size(); ++c)
            if (mask >> c & 1) s.insert(s.end(), comps[c].begin(), comps[c].end());
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

MinimalityResult is_minimal(const DynSys& sys) {
    MinimalityResult res;
    for (int x = 0; x < sys.size(); ++x) {
        auto orbit = forward_orbit(sys, x);
        if (static_cast<int>(orbit.size()) != sys.size()) {
            res.minimal = false;
            res.witness_point = x;
            res.witness_set = std::move(orbit);
            return res;
        }
    }
    res.minimal = true;
    return res;
}

TailedSys add_tail(const DynSys& sys, int K) {
    if (K < 1) throw std::invalid_argument("add_tail: K must be >= 1");
    auto rd = range_deficiency(sys);
    TailedSys out;
    out.base = sys;
    if (rd.surjective) {
        out.extended = sys;
        out.unchanged = true;
        out.note = "system is surjective; tail-adding applies only to non-surjective systems";
        return out;
    }
    out.tail_depth = K;
    DynSys ext = sys;
    ext.name = sys.name.empty() ? "tailed" : sys.name + "^T";
    // tail points in blocks: for each u in U, (u,-1),...,(u,-K)
    for (int u : rd.deficiency) {
        for (int k = 1; k <= K; ++k)
            ext.points.push_back("(" + sys.points[u] + ",-" + std::to_string(k) + ")");
    }
    const int m = sys.size();
    const int nu = static_cast<int>(rd.deficiency.size());
    for (int i = 0; i < sys.n(); ++i) {
        ext.maps[i].resize(ext.points.size());
        for (int r = 0; r < nu; ++r) {
            for (int k = 1; k <= K; ++k) {
                int idx = m + r * K + (k - 1);
                ext.maps[i][idx] = (k == 1) ? rd.deficiency[r] : m + r * K + (k - 2);
            }
        }
    }
    ext.validate();
    out.extended = std::move(ext);
    for (int r = 0; r < nu; ++r)
        out.truncation_deficiency.push_back(m + r * K + (K - 1));

    // stability probe: the K+1 truncation must give the same base-level verdicts
    {
        TailedSys deeper;
        deeper.base = sys;  // avoid recursion: inline comparison on key outputs
        auto rd1 = range_deficiency(out.extended);
        DynSys ext2 = sys;
        for (int u : rd.deficiency)
            for (int k = 1; k <= K + 1; ++k)
                ext2.points.push_back("(" + sys.points[u] + ",-" + std::to_string(k) + ")");
        for (int i = 0; i < sys.n(); ++i) {
            ext2.maps[i].resize(ext2.points.size());
            for (int r = 0; r < nu; ++r)
                for (int k = 1; k <= K + 1; ++k) {
                    int idx = m + r * (K + 1) + (k - 1);
                    ext2.maps[i][idx] = (k == 1) ? rd.deficiency[r] : m + r * (K + 1) + (k - 2);
                }
        }
        auto rd2 = range_deficiency(ext2);
        out.truncation_stable =
            rd1.deficiency.size() == rd2.deficiency.size() &&
            is_minimal(out.extended).minimal == is_minimal(ext2).minimal;
    }
    return out;
}

int TailedSys::tail_index(int u_rank, int k) const {
    if (unchanged || k < 1 || k > tail_depth)
        throw std::invalid_argument("tail_index: no tail point (rank " + std::to_string(u_rank) +
                                    ", -" + std::to_string(k) + ")");
    return base.size() + u_rank * tail_depth + (k - 1);
}

std::vector<DynSys> enumerate_systems(int m, int n) {
    std::vector<DynSys> out;
    long long total_maps = 1;
    for (int x = 0; x < m; ++x) total_maps *= m;
    std::vector<long long> choice(n, 0);
    while (true) {
        DynSys sys;
        for (int x = 0; x < m; ++x) sys.points.push_back(std::to_string(x));
        sys.maps.assign(n, std::vector<int>(m));
        for (int i = 0; i < n; ++i) {
            long long c = choice[i];
            for (int x = 0; x < m; ++x) { sys.maps[i][x] = c % m; c /= m; }
        }
        out.push_back(std::move(sys));
        int i = 0;
        while (i < n && ++choice[i] == total_maps) { choice[i] = 0; ++i; }
        if (i == n) break;
    }
    return out;
}

}  // namespace mds
