#include "resfin/sft.hpp"

#include <algorithm>
#include <deque>

#include "resfin/error.hpp"

namespace resfin {

namespace {

long ipow_capped(long base, long exp, long cap) {
    long v = 1;
    for (long i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

}  // namespace

SubshiftWindows::SubshiftWindows(const ZShiftSystem& s, long cap) : sys(s) {
    if (sys.forbidden.empty()) {
        blk = 0;
        return;
    }
    size_t m = 2;
    for (auto& w : sys.forbidden) m = std::max(m, w.size());
    blk = int(m) - 1;
    if (ipow_capped(sys.alphabet, blk, cap) > cap)
        throw Error(errk::ResolutionOverflow, "transfer graph too large");
    std::vector<int> w(blk, 0);
    enumerate_words(w, 0, [&](const std::vector<int>& v) {
        if (!contains_forbidden(v)) {
            node_id[v] = int(node_word.size());
            node_word.push_back(v);
        }
    });
    int n = int(node_word.size());
    edge.assign(n, std::vector<char>(n, 0));
    for (int u = 0; u < n; ++u)
        for (int a = 0; a < sys.alphabet; ++a) {
            std::vector<int> full = node_word[u];
            full.push_back(a);
            if (contains_forbidden(full)) continue;
            std::vector<int> vt(full.begin() + 1, full.end());
            auto it = node_id.find(vt);
            if (it != node_id.end()) edge[u][it->second] = 1;
        }
    std::vector<char> on_cycle(n, 0);
    for (int s0 = 0; s0 < n; ++s0) {
        std::vector<char> vis(n, 0);
        std::vector<int> stack{s0};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (edge[u][v]) {
                    if (v == s0) on_cycle[s0] = 1;
                    if (!vis[v]) {
                        vis[v] = 1;
                        stack.push_back(v);
                    }
                }
        }
    }
    auto closure = [&](std::vector<char> src, bool forward) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    if (edge[u][v]) {
                        int from = forward ? u : v, to = forward ? v : u;
                        if (src[from] && !src[to]) {
                            src[to] = 1;
                            changed = true;
                        }
                    }
        }
        return src;
    };
    auto from_cycle = closure(on_cycle, true);
    auto to_cycle = closure(on_cycle, false);
    good.assign(n, 0);
    for (int u = 0; u < n; ++u) good[u] = from_cycle[u] && to_cycle[u];
}

bool SubshiftWindows::contains_forbidden(const std::vector<int>& w) const {
    for (auto& f : sys.forbidden)
        for (size_t i = 0; i + f.size() <= w.size(); ++i)
            if (std::equal(f.begin(), f.end(), w.begin() + i)) return true;
    return false;
}

bool SubshiftWindows::admissible(const std::vector<int>& w) const {
    if (blk == 0) return true;
    if (contains_forbidden(w)) return false;
    if (int(w.size()) >= blk) {
        auto first = std::vector<int>(w.begin(), w.begin() + blk);
        auto last = std::vector<int>(w.end() - blk, w.end());
        auto fi = node_id.find(first), li = node_id.find(last);
        if (fi == node_id.end() || li == node_id.end()) return false;
        return good[fi->second] && good[li->second];
    }
    for (int u = 0; u < int(node_word.size()); ++u) {
        if (!good[u]) continue;
        auto& b = node_word[u];
        for (size_t i = 0; i + w.size() <= b.size(); ++i)
            if (std::equal(w.begin(), w.end(), b.begin() + i)) return true;
    }
    return false;
}

std::vector<std::vector<int>> SubshiftWindows::windows(long len, long cap) const {
    if (ipow_capped(sys.alphabet, len, cap) > cap)
        throw Error(errk::ResolutionOverflow, "window grid too large");
    std::vector<std::vector<int>> out;
    std::vector<int> w(len, 0);
    enumerate_words(w, 0, [&](const std::vector<int>& v) {
        if (admissible(v)) out.push_back(v);
    });
    return out;
}

namespace {

// Shortest (then lexicographically least) walk from `from` into the node set
// `targets`, following edges forward or backward. Returns the node sequence
// including both ends.
std::vector<int> least_walk(const std::vector<std::vector<char>>& edge, int from,
                            const std::vector<char>& targets, bool forward) {
    int n = int(edge.size());
    std::vector<int> parent(n, -2);
    std::deque<int> bfs{from};
    parent[from] = -1;
    int hit = targets[from] ? from : -1;
    while (!bfs.empty() && hit < 0) {
        int u = bfs.front();
        bfs.pop_front();
        for (int v = 0; v < n && hit < 0; ++v) {
            bool adj = forward ? edge[u][v] : edge[v][u];
            if (adj && parent[v] == -2) {
                parent[v] = u;
                if (targets[v]) hit = v;
                bfs.push_back(v);
            }
        }
    }
    if (hit < 0) return {};
    std::vector<int> walk;
    for (int u = hit; u != -1; u = parent[u]) walk.push_back(u);
    std::reverse(walk.begin(), walk.end());
    return walk;  // from ... hit (in BFS direction)
}

// Shortest lexicographically least cycle through node s (node sequence
// s, ..., s of length >= 2).
std::vector<int> least_cycle(const std::vector<std::vector<char>>& edge, int s) {
    int n = int(edge.size());
    std::vector<char> only_s(n, 0);
    only_s[s] = 1;
    std::vector<int> best;
    for (int v = 0; v < n; ++v) {
        if (!edge[s][v]) continue;
        if (v == s) return {s, s};
        auto w = least_walk(edge, v, only_s, true);
        if (w.empty()) continue;
        std::vector<int> cyc{s};
        cyc.insert(cyc.end(), w.begin(), w.end());
        if (best.empty() || cyc.size() < best.size() || (cyc.size() == best.size() && cyc < best))
            best = cyc;
    }
    return best;
}

}  // namespace

EvSeqPoint SubshiftWindows::representative(const std::vector<int>& w) const {
    if (blk == 0) {
        // full shift: repeat the window (or letter 0 when empty)
        std::vector<int> per = w.empty() ? std::vector<int>{0} : w;
        return EvSeqPoint{per, w, per, 0};
    }
    if (!admissible(w)) throw Error(errk::InvalidPoint, "window not admissible");
    // Extend w to length >= blk by trying admissible right-extensions; the
    // least admissible extension exists because w is admissible.
    std::vector<int> core = w;
    while (int(core.size()) < blk) {
        bool ok = false;
        for (int a = 0; a < sys.alphabet && !ok; ++a) {
            core.push_back(a);
            if (admissible(core))
                ok = true;
            else
                core.pop_back();
        }
        if (!ok) throw Error(errk::InvalidPoint, "window admits no extension");
    }
    auto first = std::vector<int>(core.begin(), core.begin() + blk);
    auto last = std::vector<int>(core.end() - blk, core.end());
    int fu = node_id.at(first), lu = node_id.at(last);
    // Walk from a cycle back into `first`, and from `last` forward to a cycle.
    int n = int(node_word.size());
    std::vector<char> on_cycle(n, 0);
    for (int s0 = 0; s0 < n; ++s0) on_cycle[s0] = !least_cycle(edge, s0).empty();
    auto back = least_walk(edge, fu, on_cycle, false);   // fu ... c (backward)
    auto fwd = least_walk(edge, lu, on_cycle, true);     // lu ... c'
    if (back.empty() || fwd.empty()) throw Error(errk::InvalidPoint, "window not bi-extendable");
    auto lcyc = least_cycle(edge, back.back());
    auto rcyc = least_cycle(edge, fwd.back());
    // Each walk step contributes one letter (the last letter of the node it
    // enters); the stream's trailing blk letters always equal the current
    // node, so the assembled pieces never repeat block contents.
    auto step_letter = [&](int v) { return node_word[v].back(); };
    std::vector<int> left_per, mid, right_per;
    for (size_t i = 1; i < lcyc.size(); ++i) left_per.push_back(step_letter(lcyc[i]));
    // back = [fu, ..., c] along reversed edges; forward order is c -> ... -> fu
    long pre_steps = long(back.size()) - 1;
    for (size_t i = back.size() - 1; i-- > 0;) mid.push_back(step_letter(back[i]));
    for (size_t i = blk; i < core.size(); ++i) mid.push_back(core[i]);
    for (size_t i = 1; i < fwd.size(); ++i) mid.push_back(step_letter(fwd[i]));
    for (size_t i = 1; i < rcyc.size(); ++i) right_per.push_back(step_letter(rcyc[i]));
    // core[0] sits at stream position (start + pre_steps - blk); place it at 0
    long start = long(blk) - pre_steps;
    return EvSeqPoint{left_per, mid, right_per, start};
}

}  // namespace resfin
