#include "resfin/zsystems.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "resfin/error.hpp"
#include "resfin/sft.hpp"

namespace resfin {

bool EpsGraph::has_edge(int x, int y) const {
    return std::binary_search(out[x].begin(), out[x].end(), y);
}

EpsGraph build_eps_graph(const FiniteSampleSystem& sample, const Rational& epsilon) {
    validate_system(SystemDescriptor(sample));
    EpsGraph g;
    g.nodes = sample.n;
    g.epsilon = epsilon;
    g.out.assign(sample.n, {});
    for (int x = 0; x < sample.n; ++x)
        for (int y = 0; y < sample.n; ++y)
            if (image_distance(sample, x, y) < epsilon) g.out[x].push_back(y);
    return g;
}

namespace {

// Tarjan SCC; returns component id per node, ids in reverse topological order.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& out, int& count) {
    int n = int(out.size());
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on(n, 0);
    int next = 0;
    count = 0;
    // iterative Tarjan: frames of (node, child position)
    for (int s = 0; s < n; ++s) {
        if (idx[s] != -1) continue;
        std::vector<std::pair<int, size_t>> frames{{s, 0}};
        while (!frames.empty()) {
            auto& [u, ci] = frames.back();
            if (ci == 0) {
                idx[u] = low[u] = next++;
                stack.push_back(u);
                on[u] = 1;
            }
            bool descended = false;
            while (ci < out[u].size()) {
                int v = out[u][ci++];
                if (idx[v] == -1) {
                    frames.push_back({v, 0});
                    descended = true;
                    break;
                }
                if (on[v]) low[u] = std::min(low[u], idx[v]);
            }
            if (descended) continue;
            if (low[u] == idx[u]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp[w] = count;
                    if (w == u) break;
                }
                ++count;
            }
            int done = u;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        }
    }
    return comp;
}

}  // namespace

std::vector<int> chain_recurrent_set(const EpsGraph& g) {
    int count = 0;
    auto comp = scc_ids(g.out, count);
    std::vector<char> has_internal_edge(count, 0);
    for (int x = 0; x < g.nodes; ++x)
        for (int y : g.out[x])
            if (comp[x] == comp[y]) has_internal_edge[comp[x]] = 1;
    std::vector<int> rec;
    for (int x = 0; x < g.nodes; ++x)
        if (has_internal_edge[comp[x]]) rec.push_back(x);
    return rec;
}

namespace {

// Lexicographically least among the shortest cycles through x (node sequence
// x, ..., x); empty when none exists.
std::vector<int> least_cycle_through(const EpsGraph& g, int x) {
    // distances to x along edges
    std::vector<long> dist(g.nodes, -1);
    std::deque<int> bfs;
    dist[x] = 0;
    bfs.push_back(x);
    std::vector<std::vector<int>> in(g.nodes);
    for (int u = 0; u < g.nodes; ++u)
        for (int v : g.out[u]) in[v].push_back(u);
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop_front();
        for (int v : in[u])
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                bfs.push_back(v);
            }
    }
    long best = -1;
    for (int v : g.out[x])
        if (dist[v] >= 0 && (best < 0 || dist[v] + 1 < best)) best = dist[v] + 1;
    if (best < 0) return {};
    std::vector<int> cyc{x};
    int cur = x;
    long rem = best;
    while (rem > 0) {
        for (int v : g.out[cur])
            if ((rem == 1 && v == x) || (rem > 1 && dist[v] == rem - 1 && v != x)) {
                cyc.push_back(v);
                cur = v;
                break;
            }
        --rem;
    }
    return cyc;
}

}  // namespace

Witness model_from_chains(const FiniteSampleSystem& sample, const Rational& epsilon,
                          const DensityGridCaps& caps) {
    EpsGraph g = build_eps_graph(sample, epsilon);
    auto rec = chain_recurrent_set(g);
    if (rec.empty()) throw Error(errk::NoChain, "chain recurrent set is empty");
    std::vector<int> dense;
    for (int x : rec) {
        bool covered = false;
        for (int d : dense)
            if (sample.dist[x][d] < epsilon) {
                covered = true;
                break;
            }
        if (!covered) dense.push_back(x);
    }
    std::vector<std::vector<int>> table(1);
    ZetaMap zeta;
    for (int x : dense) {
        auto cyc = least_cycle_through(g, x);
        // cyc = x, ..., x: drop the final repeat, permute cyclically
        int base = int(zeta.size());
        int len = int(cyc.size()) - 1;
        for (int i = 0; i < len; ++i) {
            zeta.push_back(SamplePoint{cyc[i]});
            table[0].push_back(base + (i + 1) % len);
        }
    }
    FiniteAction action = validate_action_description(int(zeta.size()), table);
    return check_witness(SystemDescriptor(sample), action, zeta, {0}, epsilon, caps);
}

// --------------------------------------------------------------------------
// Compressibility
// --------------------------------------------------------------------------

namespace {

// Decides T(U) subset-of U and strictness for a union of window atoms,
// exactly, by refining one step. Kind-specific.
struct CompressTester {
    virtual ~CompressTester() = default;
    virtual bool compressible(const std::vector<char>& in_u) = 0;
};

struct FiniteTester : CompressTester {
    const FiniteSampleSystem& s;
    explicit FiniteTester(const FiniteSampleSystem& s_) : s(s_) {
        if (!s.on_sample()) throw Error(errk::NonEvaluable, "map leaves the sample");
    }
    bool compressible(const std::vector<char>& in_u) override {
        std::vector<char> image(s.n, 0);
        for (int i = 0; i < s.n; ++i)
            if (in_u[i]) {
                int j = s.map_index[i];
                if (!in_u[j]) return false;  // T(U) not inside U
                image[j] = 1;
            }
        for (int i = 0; i < s.n; ++i)
            if (in_u[i] && !image[i]) return true;  // strictly smaller
        return false;
    }
};

// z-shift: atoms are cylinders on [0,w); T = left shift. T(U) constrains
// positions [-1, w-1), so both sets are unions of admissible length-(w+1)
// words on [-1, w): u is in U iff u[1..] is, in T(U) iff u[..w) is.
struct ZTester : CompressTester {
    const SubshiftWindows& sw;
    const std::vector<Atom>& atoms;
    int w;
    std::map<std::vector<int>, int> atom_of;
    std::vector<std::vector<int>> refined;

    ZTester(const SubshiftWindows& sw_, const std::vector<Atom>& atoms_, int w_, long cap)
        : sw(sw_), atoms(atoms_), w(w_) {
        for (int i = 0; i < int(atoms.size()); ++i) atom_of[atoms[i].zwin] = i;
        refined = sw.windows(w + 1, cap);
    }
    bool compressible(const std::vector<char>& in_u) override {
        bool strict = false;
        for (auto& u : refined) {
            auto head = std::vector<int>(u.begin(), u.end() - 1);
            auto tail = std::vector<int>(u.begin() + 1, u.end());
            bool in_tu = in_u[atom_of.at(head)];
            bool in_uu = in_u[atom_of.at(tail)];
            if (in_tu && !in_uu) return false;
            if (in_uu && !in_tu) strict = true;
        }
        return strict;
    }
};

// compactified-z: refined window W+1. A refined singleton m is in T(U) iff
// position m-1 lies in U; a refined class tail is in T(U) iff the class's
// window-W tail atom is in U (translation fixes classes and shifts tails).
struct CompactTester : CompressTester {
    const CompactifiedZSystem& c;
    const std::vector<Atom>& atoms;
    int w;
    std::map<std::pair<int, long>, int> singleton_id;
    std::map<int, int> tail_id;

    CompactTester(const CompactifiedZSystem& c_, const std::vector<Atom>& atoms_, int w_)
        : c(c_), atoms(atoms_), w(w_) {
        for (int i = 0; i < int(atoms.size()); ++i) {
            if (atoms[i].cz_tail)
                tail_id[atoms[i].cz_cls] = i;
            else
                singleton_id[{atoms[i].cz_copy, atoms[i].cz_pos}] = i;
        }
    }
    // membership of a position in U at window w
    bool pos_in(const std::vector<char>& in_u, int cp, long n) const {
        if (std::abs(n) <= w) return in_u[singleton_id.at({cp, n})];
        return in_u[tail_id.at(c.class_of(cp, n > 0 ? +1 : -1))];
    }
    bool compressible(const std::vector<char>& in_u) override {
        bool strict = false;
        for (int cp = 0; cp < c.copies; ++cp)
            for (long m = -(w + 1); m <= w + 1; ++m) {
                bool in_uu = pos_in(in_u, cp, m);
                bool in_tu = pos_in(in_u, cp, m - 1);
                if (in_tu && !in_uu) return false;
                if (in_uu && !in_tu) strict = true;
            }
        // Refined class tails never split: each piece of a refined tail has
        // its T-preimage inside the window-w tail of the same class, so its
        // membership in both U and T(U) equals the window-w tail's.
        return strict;
    }
};

}  // namespace

std::optional<ClopenSet> find_compressible_clopen(const SystemDescriptor& sys, int window,
                                                  const DensityGridCaps& caps) {
    validate_system(sys);
    long atom_cap = caps.max_patterns;
    if (const char* env = std::getenv("RESFIN_CAP_ATOMS")) atom_cap = std::min(atom_cap, std::atol(env));
    auto atoms = atoms_at(sys, window, caps);
    if (long(atoms.size()) > 24) throw Error(errk::ResolutionOverflow, "atom union space too large");
    if ((1L << atoms.size()) > atom_cap) throw Error(errk::ResolutionOverflow, "atom union space too large");

    std::unique_ptr<SubshiftWindows> sw;
    std::unique_ptr<CompressTester> tester;
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        tester = std::make_unique<FiniteTester>(*s);
    } else if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        sw = std::make_unique<SubshiftWindows>(*z, caps.max_patterns);
        tester = std::make_unique<ZTester>(*sw, atoms, window, caps.max_patterns);
    } else if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        tester = std::make_unique<CompactTester>(*c, atoms, window);
    } else {
        throw Error(errk::NonEvaluable, "compressibility needs a Z-action on atoms");
    }

    // Depth-first over id sets in sorted-sequence order (prefix before any
    // extension); the first hit is the lexicographically least union.
    int K = int(atoms.size());
    std::vector<char> in_u(K, 0);
    std::vector<int> chosen;
    std::function<bool(int)> dfs = [&](int next) -> bool {
        if (!chosen.empty() && tester->compressible(in_u)) return true;
        for (int id = next; id < K; ++id) {
            in_u[id] = 1;
            chosen.push_back(id);
            if (dfs(id + 1)) return true;
            chosen.pop_back();
            in_u[id] = 0;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    return ClopenSet{window, chosen};
}

RecurrenceVerdict recurrence_scan(const SystemDescriptor& sys, const Point& x,
                                  const Rational& epsilon, long N, long horizon) {
    if (N > horizon || N < 0) throw Error(errk::Mismatch, "need 0 <= N <= horizon");
    validate_point(sys, x);
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys))
        if (!s->bijective()) throw Error(errk::NonInvertible, "sample map is not invertible");
    std::vector<Point> fwd{x}, bwd{x};
    for (long k = 1; k <= horizon; ++k) {
        fwd.push_back(apply_generator(sys, 0, +1, fwd.back()));
        bwd.push_back(apply_generator(sys, 0, -1, bwd.back()));
    }
    for (long n = N; n <= horizon; ++n)
        for (long m = N; m <= horizon; ++m)
            if (distance(sys, fwd[n], bwd[m]) < epsilon) return {true, n, m};
    return {false, 0, 0};
}

}  // namespace resfin
