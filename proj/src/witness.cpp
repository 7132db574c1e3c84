#include "resfin/witness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "resfin/error.hpp"
#include "resfin/symbolic.hpp"

namespace resfin {

// --------------------------------------------------------------------------
// Actions
// --------------------------------------------------------------------------

FiniteAction validate_action_description(int size, const std::vector<std::vector<int>>& tables) {
    if (size < 1) throw Error(errk::Mismatch, "action size must be positive");
    FiniteAction a;
    a.size = size;
    for (size_t g = 0; g < tables.size(); ++g) {
        const auto& t = tables[g];
        if (int(t.size()) != size) throw Error(errk::NonBijective, std::to_string(g));
        std::vector<int> inv(size, -1);
        for (int i = 0; i < size; ++i) {
            int v = t[i];
            if (v < 0 || v >= size || inv[v] != -1) throw Error(errk::NonBijective, std::to_string(g));
            inv[v] = i;
        }
        a.generators.push_back(t);
        a.inverses.push_back(std::move(inv));
    }
    return a;
}

long generated_group_order(const FiniteAction& a, long cap) {
    std::set<std::vector<int>> seen;
    std::vector<int> id(a.size);
    for (int i = 0; i < a.size; ++i) id[i] = i;
    std::vector<std::vector<int>> frontier{id};
    seen.insert(id);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (auto& p : frontier)
            for (auto& g : a.generators) {
                std::vector<int> q(a.size);
                for (int i = 0; i < a.size; ++i) q[i] = g[p[i]];
                if (seen.insert(q).second) next.push_back(std::move(q));
                if (long(seen.size()) > cap) throw Error(errk::SizeOverflow, "group closure cap");
            }
        frontier = std::move(next);
    }
    return long(seen.size());
}

// --------------------------------------------------------------------------
// Admissible windows of a z-shift
// --------------------------------------------------------------------------

namespace {

long ipow_checked(long base, long exp, long cap) {
    long v = 1;
    for (long i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

// Transfer-graph machinery: a window is admissible iff it contains no
// forbidden word and extends to a bi-infinite configuration.
struct ZWindows {
    const ZShiftSystem& sys;
    int blk;  // block length m-1; 0 when there are no forbidden words
    std::map<std::vector<int>, int> node_id;
    std::vector<std::vector<int>> node_word;
    std::vector<std::vector<char>> edge;  // adjacency
    std::vector<char> good;               // node lies on a bi-infinite path

    explicit ZWindows(const ZShiftSystem& s, long cap) : sys(s) {
        if (sys.forbidden.empty()) {
            blk = 0;
            return;
        }
        size_t m = 2;
        for (auto& w : sys.forbidden) m = std::max(m, w.size());
        blk = int(m) - 1;
        if (ipow_checked(sys.alphabet, blk, cap) > cap)
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
        // Bi-infinite paths pass only through nodes that reach a cycle and
        // are reached by one.
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

    template <typename F>
    void enumerate_words(std::vector<int>& w, size_t i, F&& emit) const {
        if (i == w.size()) {
            emit(w);
            return;
        }
        for (int a = 0; a < sys.alphabet; ++a) {
            w[i] = a;
            enumerate_words(w, i + 1, emit);
        }
    }

    bool contains_forbidden(const std::vector<int>& w) const {
        for (auto& f : sys.forbidden)
            for (size_t i = 0; i + f.size() <= w.size(); ++i)
                if (std::equal(f.begin(), f.end(), w.begin() + i)) return true;
        return false;
    }

    bool admissible(const std::vector<int>& w) const {
        if (blk == 0) return true;
        if (contains_forbidden(w)) return false;
        if (int(w.size()) >= blk) {
            auto first = std::vector<int>(w.begin(), w.begin() + blk);
            auto last = std::vector<int>(w.end() - blk, w.end());
            auto fi = node_id.find(first), li = node_id.find(last);
            if (fi == node_id.end() || li == node_id.end()) return false;
            return good[fi->second] && good[li->second];
        }
        // Short window: occurs iff it sits inside some bi-infinite block.
        for (int u = 0; u < int(node_word.size()); ++u) {
            if (!good[u]) continue;
            auto& b = node_word[u];
            for (size_t i = 0; i + w.size() <= b.size(); ++i)
                if (std::equal(w.begin(), w.end(), b.begin() + i)) return true;
        }
        return false;
    }

    std::vector<std::vector<int>> windows(long len, long cap) const {
        if (ipow_checked(sys.alphabet, len, cap) > cap)
            throw Error(errk::ResolutionOverflow, "window grid too large");
        std::vector<std::vector<int>> out;
        std::vector<int> w(len, 0);
        enumerate_words(w, 0, [&](const std::vector<int>& v) {
            if (admissible(v)) out.push_back(v);
        });
        return out;
    }
};

// --------------------------------------------------------------------------
// Density grids
// --------------------------------------------------------------------------

Rational wdist_z(const std::vector<int>& pat, int r, const EvSeqPoint& z) {
    for (int d = 0; d <= r; ++d)
        for (long t : {long(d), long(-d)}) {
            if (pat[t + r] != z.at(t)) return pow2neg(d);
            if (d == 0) break;
        }
    return Rational(0);
}

Rational density_z(const ZShiftSystem& sys, const ZetaMap& zeta, int r, const DensityGridCaps& caps) {
    ZWindows zw(sys, caps.max_patterns);
    auto pats = zw.windows(2 * long(r) + 1, caps.max_patterns);
    Rational worst(0);
    for (auto& p : pats) {
        Rational best(2);
        for (auto& zp : zeta) best = std::min(best, wdist_z(p, r, std::get<EvSeqPoint>(zp)));
        worst = std::max(worst, best);
    }
    return worst;
}

Rational density_fr(const FrShiftSystem& sys, const ZetaMap& zeta, int r, const DensityGridCaps& caps) {
    auto words = ball(sys.rank, r);
    if (ipow_checked(sys.alphabet, long(words.size()), caps.max_patterns) > caps.max_patterns)
        throw Error(errk::ResolutionOverflow, "ball pattern grid too large");
    // window of each zeta image, aligned with the ball order
    std::vector<std::vector<int>> zwin;
    for (auto& zp : zeta) {
        const auto& q = std::get<QuotientPoint>(zp);
        std::vector<int> w;
        for (auto& g : words) w.push_back(q.at(g));
        zwin.push_back(std::move(w));
    }
    std::vector<int> pat(words.size(), 0);
    Rational worst(0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == pat.size()) {
            Rational best(2);
            for (auto& w : zwin) {
                int diff = -1;
                for (size_t k = 0; k < pat.size(); ++k)
                    if (pat[k] != w[k]) {
                        diff = int(words[k].letters.size());
                        break;  // ball is sorted by length: first mismatch is closest
                    }
                best = std::min(best, diff < 0 ? Rational(0) : pow2neg(diff));
            }
            worst = std::max(worst, best);
            return;
        }
        for (int a = 0; a < sys.alphabet; ++a) {
            pat[i] = a;
            rec(i + 1);
        }
    };
    rec(0);
    return worst;
}

Rational density_boundary(const FrBoundarySystem& sys, const ZetaMap& zeta, int r,
                          const DensityGridCaps& caps) {
    auto words = sphere(sys.rank, r);
    if (long(words.size()) > caps.max_patterns)
        throw Error(errk::ResolutionOverflow, "boundary cylinder grid too large");
    Rational worst(0);
    for (auto& v : words) {
        Rational best(2);
        for (auto& zp : zeta) {
            const auto& b = std::get<BoundaryPoint>(zp);
            int cp = r;
            for (int i = 0; i < r; ++i)
                if (v.letters[i] != b.at(i)) {
                    cp = i;
                    break;
                }
            best = std::min(best, cp >= r ? Rational(0) : pow2neg(cp));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

Rational density_polytope(const PolytopeSystem& sys, const ZetaMap& zeta, const DensityGridCaps& caps) {
    int V = int(sys.vertices.size()), m = caps.polytope_quantization;
    std::vector<std::vector<Rational>> grid = sys.vertices;
    std::vector<int> comp(V, 0);
    std::function<void(int, int)> rec = [&](int i, int rem) {
        if (long(grid.size()) > caps.max_patterns)
            throw Error(errk::ResolutionOverflow, "polytope grid too large");
        if (i == V - 1) {
            comp[i] = rem;
            std::vector<Rational> pt(sys.dim(), Rational(0));
            for (int k = 0; k < V; ++k)
                for (int j = 0; j < sys.dim(); ++j) pt[j] += Rational(Int(comp[k]), Int(m)) * sys.vertices[k][j];
            grid.push_back(std::move(pt));
            return;
        }
        for (int c = 0; c <= rem; ++c) {
            comp[i] = c;
            rec(i + 1, rem - c);
        }
    };
    rec(0, m);
    Rational worst(0);
    for (auto& g : grid) {
        Rational best(-1);
        for (auto& zp : zeta) {
            const auto& x = std::get<PolytopePoint>(zp).coords;
            Rational d(0);
            for (size_t j = 0; j < x.size(); ++j) d = std::max(d, rat_abs(Rational(g[j] - x[j])));
            if (best < 0 || d < best) best = d;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

// Tail positions on a compactified copy: the distance-to-zeta function is a
// minimum of lines of slope +-1 in u = n/(1+|n|), hence concave; its integer
// maximum sits next to a crossing of two lines. We collect candidate
// positions from all crossings and evaluate the true metric there.
Rational density_compactz(const CompactifiedZSystem& sys, const ZetaMap& zeta) {
    long M = 2;
    for (auto& zp : zeta) {
        const auto& c = std::get<CompactZPoint>(zp);
        if (!c.at_class) M = std::max(M, std::abs(c.pos) + 1);
    }
    auto min_dist = [&](const CompactZPoint& x) {
        Rational best(-1);
        for (auto& zp : zeta) {
            Rational d = distance(sys, x, zp);
            if (best < 0 || d < best) best = d;
        }
        return best;
    };
    Rational worst(0);
    for (int cls = 0; cls < int(sys.classes.size()); ++cls)
        worst = std::max(worst, min_dist(CompactZPoint{true, cls, 0, 0}));
    std::set<std::pair<int, long>> cand;
    for (int cp = 0; cp < sys.copies; ++cp)
        for (long n = -(M + 1); n <= M + 1; ++n) cand.insert({cp, n});
    // crossing candidates for the tails
    auto D = compactz_class_distances(sys);
    for (int cp = 0; cp < sys.copies; ++cp) {
        int lo = sys.class_of(cp, -1), hi = sys.class_of(cp, +1);
        std::vector<Rational> up, down;  // constants of lines p+u and q-u
        for (auto& zp : zeta) {
            const auto& z = std::get<CompactZPoint>(zp);
            auto cz = compactz_costs_to_classes(sys, z);
            for (size_t i = 0; i < cz.size(); ++i) {
                up.push_back(Rational(1 + D[lo][i] + cz[i]));
                down.push_back(Rational(1 + D[hi][i] + cz[i]));
            }
            if (!z.at_class && z.copy == cp) {
                Rational ph(Int(z.pos), Int(1 + std::abs(z.pos)));
                up.push_back(Rational(-ph));   // u - phi(m), right tail
                down.push_back(Rational(ph));  // phi(m) - u reads as -(u) + phi(m), left tail
            }
        }
        for (auto& p : up)
            for (auto& q : down) {
                Rational u = Rational((q - p) / 2);
                // invert u = n/(1+|n|) on both sides of the crossing
                for (int side : {+1, -1}) {
                    Rational uu = side > 0 ? u : Rational(-u);
                    if (uu <= 0 || uu >= 1) continue;
                    Rational nr = Rational(uu / (1 - uu));
                    Int fl = numerator(nr) / denominator(nr);
                    for (const Int& k : {Int(fl), Int(fl + 1)}) {
                        if (k <= M || k > (Int(1) << 40)) continue;
                        cand.insert({cp, side * k.convert_to<long>()});
                    }
                }
            }
    }
    for (auto& [cp, n] : cand) worst = std::max(worst, min_dist(CompactZPoint{false, 0, cp, n}));
    return worst;
}

}  // namespace

Rational density_defect_at(const SystemDescriptor& sys, const ZetaMap& zeta, int radius,
                           const DensityGridCaps& caps) {
    if (zeta.empty()) throw Error(errk::Mismatch, "empty model image");
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        Rational worst(0);
        for (int i = 0; i < s->n; ++i) {
            Rational best(-1);
            for (auto& zp : zeta) {
                Rational d = s->dist[i][std::get<SamplePoint>(zp).index];
                if (best < 0 || d < best) best = d;
            }
            worst = std::max(worst, best);
        }
        return worst;
    }
    if (auto* z = std::get_if<ZShiftSystem>(&sys)) return density_z(*z, zeta, radius, caps);
    if (auto* f = std::get_if<FrShiftSystem>(&sys)) return density_fr(*f, zeta, radius, caps);
    if (auto* b = std::get_if<FrBoundarySystem>(&sys)) return density_boundary(*b, zeta, radius, caps);
    if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) return density_compactz(*c, zeta);
    if (auto* p = std::get_if<PolytopeSystem>(&sys)) return density_polytope(*p, zeta, caps);
    if (auto* alg = std::get_if<AlgebraicZSystem>(&sys)) {
        Rational worst(0);
        for (auto& g : algebraic_density_grid(alg->f, radius, caps)) {
            Rational best(-1);
            Point gp{g};
            for (auto& zp : zeta) {
                Rational d = distance(sys, gp, zp);
                if (best < 0 || d < best) best = d;
                if (best == 0) break;
            }
            worst = std::max(worst, best);
        }
        return worst;
    }
    throw Error(errk::NonEvaluable, "density: unsupported kind");
}

Rational equivariance_defect_of(const SystemDescriptor& sys, const FiniteAction& action,
                                const ZetaMap& zeta, const std::vector<int>& scope) {
    Rational worst(0);
    auto* fsample = std::get_if<FiniteSampleSystem>(&sys);
    for (int s : scope)
        for (int z = 0; z < action.size; ++z) {
            const Point& target = zeta[action.apply(s, +1, z)];
            if (fsample && !fsample->on_sample()) {
                int xi = std::get<SamplePoint>(zeta[z]).index;
                int yi = std::get<SamplePoint>(target).index;
                worst = std::max(worst, image_distance(*fsample, xi, yi));
            } else {
                Point moved = apply_generator(sys, s, +1, zeta[z]);
                worst = std::max(worst, distance(sys, moved, target));
            }
        }
    return worst;
}

Witness check_witness(const SystemDescriptor& sys, const FiniteAction& action, const ZetaMap& zeta,
                      const std::vector<int>& scope, const Rational& epsilon,
                      const DensityGridCaps& caps) {
    validate_system(sys);
    if (int(zeta.size()) != action.size) throw Error(errk::Mismatch, "zeta size vs action size");
    for (auto& p : zeta) validate_point(sys, p);
    for (int s : scope)
        if (s < 0 || s >= action.rank()) throw Error(errk::Mismatch, "scope generator out of range");
    if (action.rank() > generator_count(sys))
        throw Error(errk::Mismatch, "action rank exceeds system rank");
    Witness w;
    w.system = sys;
    w.action = action;
    w.zeta = zeta;
    w.epsilon = epsilon;
    w.generator_scope = scope;
    int r = resolution_radius(epsilon);
    w.density_defect = density_defect_at(sys, zeta, r, caps);
    w.equivariance_defect = equivariance_defect_of(sys, action, zeta, scope);
    return w;
}

Witness merge_local_witnesses(const std::vector<Witness>& parts) {
    if (parts.empty()) throw Error(errk::Mismatch, "nothing to merge");
    const Witness& head = parts.front();
    for (auto& p : parts) {
        if (!same_system(p.system, head.system) || p.generator_scope != head.generator_scope ||
            p.epsilon != head.epsilon)
            throw Error(errk::Mismatch, "witnesses disagree on system, scope, or epsilon");
    }
    FiniteAction merged;
    merged.size = 0;
    int rank = head.action.rank();
    merged.generators.assign(rank, {});
    merged.inverses.assign(rank, {});
    ZetaMap zeta;
    Rational equiv(0);
    for (auto& p : parts) {
        if (p.action.rank() != rank) throw Error(errk::Mismatch, "rank mismatch");
        for (int g = 0; g < rank; ++g)
            for (int i = 0; i < p.action.size; ++i) {
                merged.generators[g].push_back(p.action.generators[g][i] + merged.size);
                merged.inverses[g].push_back(p.action.inverses[g][i] + merged.size);
            }
        merged.size += p.action.size;
        zeta.insert(zeta.end(), p.zeta.begin(), p.zeta.end());
        equiv = std::max(equiv, p.equivariance_defect);
    }
    Witness out;
    out.system = head.system;
    out.action = merged;
    out.zeta = zeta;
    out.epsilon = head.epsilon;
    out.generator_scope = head.generator_scope;
    out.equivariance_defect = equiv;
    out.density_defect = density_defect_at(head.system, zeta, resolution_radius(head.epsilon));
    return out;
}

// --------------------------------------------------------------------------
// Test families
// --------------------------------------------------------------------------

std::vector<TestFunction> standard_test_family(const SystemDescriptor& sys, int radius,
                                               const DensityGridCaps& caps) {
    std::vector<TestFunction> fam;
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        for (int i = 0; i < s->n; ++i) {
            TestFunction f;
            f.kind = TestFunction::Kind::PointIndicator;
            f.index = i;
            fam.push_back(f);
        }
    } else if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        ZWindows zw(*z, caps.max_patterns);
        for (auto& w : zw.windows(2 * long(radius) + 1, caps.max_patterns)) {
            TestFunction f;
            f.kind = TestFunction::Kind::CylinderZ;
            f.pattern = w;
            f.radius = radius;
            fam.push_back(f);
        }
    } else if (auto* fr = std::get_if<FrShiftSystem>(&sys)) {
        auto words = ball(fr->rank, radius);
        if (ipow_checked(fr->alphabet, long(words.size()), caps.max_patterns) > caps.max_patterns)
            throw Error(errk::ResolutionOverflow, "cylinder family too large");
        std::vector<int> pat(words.size(), 0);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == pat.size()) {
                TestFunction f;
                f.kind = TestFunction::Kind::CylinderFr;
                f.pattern = pat;
                f.radius = radius;
                fam.push_back(f);
                return;
            }
            for (int a = 0; a < fr->alphabet; ++a) {
                pat[i] = a;
                rec(i + 1);
            }
        };
        rec(0);
    } else if (auto* bd = std::get_if<FrBoundarySystem>(&sys)) {
        for (auto& v : sphere(bd->rank, radius)) {
            TestFunction f;
            f.kind = TestFunction::Kind::CylinderBoundary;
            f.prefix = v;
            f.radius = radius;
            fam.push_back(f);
        }
    } else if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        // distance functions to the classes and to each copy's origin: exact
        // and 1-Lipschitz (class indicators would not be Lipschitz).
        for (int cls = 0; cls < int(c->classes.size()); ++cls) {
            TestFunction f;
            f.kind = TestFunction::Kind::ClassIndicator;
            f.index = cls;
            fam.push_back(f);
        }
        for (int cp = 0; cp < c->copies; ++cp) {
            TestFunction f;
            f.kind = TestFunction::Kind::PositionIndicator;
            f.index = cp;
            f.position = 0;
            fam.push_back(f);
        }
    } else if (auto* p = std::get_if<PolytopeSystem>(&sys)) {
        for (int j = 0; j < p->dim(); ++j) {
            TestFunction f;
            f.kind = TestFunction::Kind::Coordinate;
            f.index = j;
            fam.push_back(f);
        }
    } else {
        throw Error(errk::NonEvaluable, "no standard test family for this kind");
    }
    return fam;
}

Rational eval_function(const SystemDescriptor& sys, const TestFunction& f, const Point& p) {
    switch (f.kind) {
        case TestFunction::Kind::PointIndicator:
            return Rational(std::get<SamplePoint>(p).index == f.index ? 1 : 0);
        case TestFunction::Kind::CylinderZ: {
            const auto& e = std::get<EvSeqPoint>(p);
            for (int t = -f.radius; t <= f.radius; ++t)
                if (e.at(t) != f.pattern[t + f.radius]) return Rational(0);
            return Rational(1);
        }
        case TestFunction::Kind::CylinderFr: {
            const auto& q = std::get<QuotientPoint>(p);
            auto words = ball(int(q.action.size()), f.radius);
            for (size_t k = 0; k < words.size(); ++k)
                if (q.at(words[k]) != f.pattern[k]) return Rational(0);
            return Rational(1);
        }
        case TestFunction::Kind::CylinderBoundary: {
            const auto& b = std::get<BoundaryPoint>(p);
            for (size_t i = 0; i < f.prefix.letters.size(); ++i)
                if (b.at(int(i)) != f.prefix.letters[i]) return Rational(0);
            return Rational(1);
        }
        case TestFunction::Kind::ClassIndicator:
            return distance(sys, p, Point(CompactZPoint{true, f.index, 0, 0}));
        case TestFunction::Kind::PositionIndicator:
            return distance(sys, p, Point(CompactZPoint{false, 0, f.index, f.position}));
        case TestFunction::Kind::Coordinate:
            return std::get<PolytopePoint>(p).coords[f.index];
    }
    throw Error(errk::NonEvaluable, "unknown test function");
}

Rational sup_norm(const SystemDescriptor& sys, const TestFunction& f) {
    switch (f.kind) {
        case TestFunction::Kind::PointIndicator:
            return Rational(1);
        case TestFunction::Kind::CylinderZ: {
            ZWindows zw(std::get<ZShiftSystem>(sys), DensityGridCaps{}.max_patterns);
            return Rational(zw.admissible(f.pattern) ? 1 : 0);
        }
        case TestFunction::Kind::CylinderFr:
        case TestFunction::Kind::CylinderBoundary:
            return Rational(1);  // full shifts and boundaries: every cylinder is nonempty
        case TestFunction::Kind::ClassIndicator: {
            ZetaMap one{Point(CompactZPoint{true, f.index, 0, 0})};
            return density_compactz(std::get<CompactifiedZSystem>(sys), one);
        }
        case TestFunction::Kind::PositionIndicator: {
            ZetaMap one{Point(CompactZPoint{false, 0, f.index, f.position})};
            return density_compactz(std::get<CompactifiedZSystem>(sys), one);
        }
        case TestFunction::Kind::Coordinate: {
            auto& p = std::get<PolytopeSystem>(sys);
            Rational m(0);
            for (auto& v : p.vertices) m = std::max(m, rat_abs(v[f.index]));
            return m;
        }
    }
    throw Error(errk::NonEvaluable, "unknown test function");
}

Rational lipschitz_constant(const SystemDescriptor& sys, const TestFunction& f) {
    switch (f.kind) {
        case TestFunction::Kind::PointIndicator: {
            auto& s = std::get<FiniteSampleSystem>(sys);
            Rational gap(-1);
            for (int i = 0; i < s.n; ++i)
                for (int j = i + 1; j < s.n; ++j)
                    if (gap < 0 || s.dist[i][j] < gap) gap = s.dist[i][j];
            return gap <= 0 ? Rational(1) : Rational(1 / gap);
        }
        case TestFunction::Kind::CylinderZ:
        case TestFunction::Kind::CylinderFr:
            return Rational(Int(1) << f.radius);
        case TestFunction::Kind::CylinderBoundary:
            return f.radius == 0 ? Rational(1) : Rational(Int(1) << (f.radius - 1));
        case TestFunction::Kind::ClassIndicator:
        case TestFunction::Kind::PositionIndicator:
            return Rational(1);  // distance functions
        case TestFunction::Kind::Coordinate:
            return Rational(1);
    }
    throw Error(errk::NonEvaluable, "unknown test function");
}

// --------------------------------------------------------------------------
// Measures and ucp defects
// --------------------------------------------------------------------------

namespace {

// f evaluated at the forward image of point p (handles off-sample images).
Rational eval_at_image(const SystemDescriptor& sys, const TestFunction& f, int gen, const Point& p) {
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        if (!s->on_sample()) {
            if (f.kind != TestFunction::Kind::PointIndicator)
                throw Error(errk::NonEvaluable, "cannot evaluate at off-sample image");
            int x = std::get<SamplePoint>(p).index;
            return Rational(image_distance(*s, x, f.index) == 0 ? 1 : 0);
        }
    }
    return eval_function(sys, f, apply_generator(sys, gen, +1, p));
}

}  // namespace

EmpiricalMeasureResult empirical_measure(const Witness& w, int radius) {
    EmpiricalMeasureResult out;
    Rational unit(Int(1), Int(w.action.size));
    for (auto& p : w.zeta) {
        bool found = false;
        for (size_t i = 0; i < out.measure.support.size() && !found; ++i)
            if (distance(w.system, out.measure.support[i], p) == 0) {
                out.measure.weights[i] += unit;
                found = true;
            }
        if (!found) {
            out.measure.support.push_back(p);
            out.measure.weights.push_back(unit);
        }
    }
    auto fam = standard_test_family(w.system, radius);
    Rational defect(0), lip(0);
    for (auto& f : fam) {
        lip = std::max(lip, lipschitz_constant(w.system, f));
        for (int s : w.generator_scope) {
            Rational pushed(0), plain(0);
            for (int z = 0; z < w.action.size; ++z) {
                pushed += eval_at_image(w.system, f, s, w.zeta[z]);
                plain += eval_function(w.system, f, w.zeta[z]);
            }
            defect = std::max(defect, rat_abs(Rational((pushed - plain) * unit)));
        }
    }
    out.invariance_defect = defect;
    out.lipschitz_bound = lip;
    return out;
}

UcpDefects ucp_defects(const Witness& w, const std::vector<TestFunction>& family,
                       const std::vector<int>& scope) {
    UcpDefects out{Rational(0), Rational(0), Rational(0)};
    int n = w.action.size;
    std::vector<std::vector<Rational>> vals(family.size(), std::vector<Rational>(n));
    for (size_t i = 0; i < family.size(); ++i)
        for (int z = 0; z < n; ++z) vals[i][z] = eval_function(w.system, family[i], w.zeta[z]);
    // phi(fg) vs phi(f)phi(g), entrywise on E. phi evaluates pointwise, so
    // phi(fg)(z) = f(zeta z) g(zeta z); the defect vanishes identically.
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = 0; j < family.size(); ++j)
            for (int z = 0; z < n; ++z) {
                Rational lhs = Rational(eval_function(w.system, family[i], w.zeta[z]) *
                                        eval_function(w.system, family[j], w.zeta[z]));
                Rational rhs = Rational(vals[i][z] * vals[j][z]);
                out.mult_defect = std::max(out.mult_defect, rat_abs(Rational(lhs - rhs)));
            }
    for (size_t i = 0; i < family.size(); ++i) {
        Rational img(0);
        for (int z = 0; z < n; ++z) img = std::max(img, rat_abs(vals[i][z]));
        out.norm_defect = std::max(out.norm_defect, Rational(sup_norm(w.system, family[i]) - img));
    }
    for (auto& f : family)
        for (int s : scope)
            for (int z = 0; z < n; ++z) {
                Rational a = eval_at_image(w.system, f, s, w.zeta[z]);
                Rational b = eval_function(w.system, f, w.zeta[w.action.apply(s, +1, z)]);
                out.equivariance_defect = std::max(out.equivariance_defect, rat_abs(Rational(a - b)));
            }
    return out;
}

}  // namespace resfin
