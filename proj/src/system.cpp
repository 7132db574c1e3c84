#include "resfin/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "resfin/error.hpp"
#include "resfin/lp.hpp"

namespace resfin {

// --------------------------------------------------------------------------
// Points
// --------------------------------------------------------------------------

int EvSeqPoint::at(long t) const {
    long rel = t - start;
    if (rel >= 0 && rel < long(core.size())) return core[rel];
    if (rel < 0) {
        if (left.empty()) throw Error(errk::InvalidPoint, "empty left period");
        long l = long(left.size());
        long idx = ((rel % l) + l) % l;
        return left[idx];
    }
    if (right.empty()) throw Error(errk::InvalidPoint, "empty right period");
    long r = rel - long(core.size());
    return right[r % long(right.size())];
}

int QuotientPoint::apply_letter(int letter, int q) const {
    int i = std::abs(letter) - 1;
    if (i < 0 || i >= int(action.size())) throw Error(errk::InvalidPoint, "letter out of rank");
    const auto& perm = action[i];
    if (letter > 0) return perm[q];
    for (int p = 0; p < int(perm.size()); ++p)
        if (perm[p] == q) return p;
    throw Error(errk::NonBijective, "generator table is not a permutation");
}

int QuotientPoint::at(const Word& g) const {
    int q = base;
    for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it) q = apply_letter(*it, q);
    return labels[q];
}

int BoundaryPoint::at(int i) const {
    if (i < int(prefix.letters.size())) return prefix.letters[i];
    int j = i - int(prefix.letters.size());
    return period.letters[j % period.letters.size()];
}

// --------------------------------------------------------------------------
// Descriptors
// --------------------------------------------------------------------------

bool FiniteSampleSystem::bijective() const {
    if (map_index.empty()) return false;
    std::vector<char> hit(n, 0);
    for (int v : map_index) {
        if (v < 0 || v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    return true;
}

int CompactifiedZSystem::class_of(int copy, int sign) const {
    for (int c = 0; c < int(classes.size()); ++c)
        for (auto& [cp, sg] : classes[c])
            if (cp == copy && sg == sign) return c;
    throw Error(errk::InvalidPoint, "endpoint not classified");
}

std::vector<Rational> PolytopeSystem::apply(const std::vector<Rational>& x) const {
    int d = dim();
    std::vector<Rational> y(d, Rational(0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) y[i] += A[i][j] * x[j];
        y[i] += b[i];
    }
    return y;
}

namespace {

// Solves M z = rhs exactly; Error(NonInvertible) when singular.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
    int d = int(M.size());
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw Error(errk::NonInvertible, "singular affine map");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        Rational p = M[col][col];
        for (int j = 0; j < d; ++j) M[col][j] /= p;
        rhs[col] /= p;
        for (int r = 0; r < d; ++r) {
            if (r == col || M[r][col] == 0) continue;
            Rational f = M[r][col];
            for (int j = 0; j < d; ++j) M[r][j] -= f * M[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs;
}

}  // namespace

std::vector<Rational> PolytopeSystem::apply_inverse(const std::vector<Rational>& x) const {
    std::vector<Rational> rhs(dim());
    for (int i = 0; i < dim(); ++i) rhs[i] = x[i] - b[i];
    return solve_linear(A, rhs);
}

bool PolytopeSystem::contains(const std::vector<Rational>& x) const {
    int v = int(vertices.size()), d = dim();
    LpProblem lp(v);
    for (int i = 0; i < d; ++i) {
        std::vector<std::pair<int, Rational>> row;
        for (int k = 0; k < v; ++k) row.push_back({k, vertices[k][i]});
        lp.add_constraint(row, 0, x[i]);
    }
    std::vector<std::pair<int, Rational>> ones;
    for (int k = 0; k < v; ++k) ones.push_back({k, Rational(1)});
    lp.add_constraint(ones, 0, Rational(1));
    return lp.feasible_point().feasible;
}

std::string kind_name(const SystemDescriptor& sys) {
    static const char* names[] = {"finite-sample", "z-shift", "fr-shift", "fr-boundary",
                                  "compactified-z", "polytope", "algebraic-z"};
    return names[sys.index()];
}

int generator_count(const SystemDescriptor& sys) {
    if (auto* s = std::get_if<FrShiftSystem>(&sys)) return s->rank;
    if (auto* s = std::get_if<FrBoundarySystem>(&sys)) return s->rank;
    return 1;
}

void validate_system(const SystemDescriptor& sys) {
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        if (s->n <= 0) throw Error(errk::InvalidPoint, "empty sample");
        if (int(s->dist.size()) != s->n) throw Error(errk::Mismatch, "distance table size");
        for (int i = 0; i < s->n; ++i) {
            if (int(s->dist[i].size()) != s->n) throw Error(errk::Mismatch, "distance table row size");
            if (s->dist[i][i] != 0) throw Error(errk::Mismatch, "nonzero self-distance");
            for (int j = 0; j < s->n; ++j) {
                if (s->dist[i][j] < 0 || s->dist[i][j] != s->dist[j][i])
                    throw Error(errk::Mismatch, "distance table not symmetric nonnegative");
                if (i != j && s->dist[i][j] == 0) throw Error(errk::Mismatch, "duplicate sample points");
                for (int k = 0; k < s->n; ++k)
                    if (s->dist[i][j] > s->dist[i][k] + s->dist[k][j])
                        throw Error(errk::Mismatch, "triangle inequality violated");
            }
        }
        if (!s->map_index.empty() && int(s->map_index.size()) != s->n)
            throw Error(errk::Mismatch, "map table size");
        for (int v : s->map_index)
            if (v < 0 || v >= s->n) throw Error(errk::Mismatch, "map table entry out of range");
        if (!s->image_dist.empty()) {
            if (int(s->image_dist.size()) != s->n) throw Error(errk::Mismatch, "image distance size");
            for (auto& row : s->image_dist)
                if (int(row.size()) != s->n) throw Error(errk::Mismatch, "image distance row size");
        }
        if (s->map_index.empty() && s->image_dist.empty())
            throw Error(errk::Mismatch, "sample needs a map table or image distances");
    } else if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        if (z->alphabet < 1) throw Error(errk::Mismatch, "alphabet must be positive");
        for (auto& w : z->forbidden) {
            if (w.empty()) throw Error(errk::Mismatch, "empty forbidden word");
            for (int c : w)
                if (c < 0 || c >= z->alphabet) throw Error(errk::Mismatch, "forbidden word letter range");
        }
    } else if (auto* f = std::get_if<FrShiftSystem>(&sys)) {
        if (f->rank < 2) throw Error(errk::Mismatch, "fr-shift needs rank >= 2");
        if (f->alphabet < 1) throw Error(errk::Mismatch, "alphabet must be positive");
    } else if (auto* bd = std::get_if<FrBoundarySystem>(&sys)) {
        if (bd->rank < 2) throw Error(errk::Mismatch, "fr-boundary needs rank >= 2");
    } else if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        if (c->copies < 1) throw Error(errk::Mismatch, "need at least one copy");
        std::set<std::pair<int, int>> seen;
        for (auto& cls : c->classes) {
            if (cls.empty()) throw Error(errk::Mismatch, "empty endpoint class");
            for (auto& [cp, sg] : cls) {
                if (cp < 0 || cp >= c->copies || (sg != 1 && sg != -1))
                    throw Error(errk::Mismatch, "bad endpoint reference");
                if (!seen.insert({cp, sg}).second) throw Error(errk::Mismatch, "endpoint in two classes");
            }
        }
        if (int(seen.size()) != 2 * c->copies) throw Error(errk::Mismatch, "unclassified endpoint");
    } else if (auto* p = std::get_if<PolytopeSystem>(&sys)) {
        if (p->vertices.empty()) throw Error(errk::Mismatch, "polytope needs vertices");
        int d = p->dim();
        for (auto& v : p->vertices)
            if (int(v.size()) != d) throw Error(errk::Mismatch, "vertex dimension");
        if (int(p->A.size()) != d || int(p->b.size()) != d)
            throw Error(errk::Mismatch, "affine map dimension");
        for (auto& row : p->A)
            if (int(row.size()) != d) throw Error(errk::Mismatch, "affine map row dimension");
        for (auto& v : p->vertices)
            if (!p->contains(p->apply(v)))
                throw Error(errk::Mismatch, "affine map does not preserve the hull");
    } else if (auto* alg = std::get_if<AlgebraicZSystem>(&sys)) {
        std::set<long> exps;
        for (auto& [e, c] : alg->f.terms) {
            if (c == 0) throw Error(errk::Mismatch, "zero coefficient in support");
            if (!exps.insert(e).second) throw Error(errk::Mismatch, "duplicate exponent");
        }
    }
}

// --------------------------------------------------------------------------
// Point validation
// --------------------------------------------------------------------------

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

// Exact extent beyond which two eventually periodic sequences that agree must
// agree forever (core extents plus one common period on each side).
long evseq_compare_bound(const EvSeqPoint& x, const EvSeqPoint& y) {
    long ext = 1;
    for (const EvSeqPoint* p : {&x, &y}) {
        ext = std::max(ext, std::abs(p->start) + long(p->core.size()) + 1);
    }
    long lp = lcm_long(std::max<long>(1, long(x.left.size())), std::max<long>(1, long(y.left.size())));
    long rp = lcm_long(std::max<long>(1, long(x.right.size())), std::max<long>(1, long(y.right.size())));
    return ext + std::max(lp, rp);
}

void check_forbidden(const ZShiftSystem& z, const EvSeqPoint& p) {
    if (z.forbidden.empty()) return;
    long maxf = 0;
    for (auto& w : z.forbidden) maxf = std::max(maxf, long(w.size()));
    long ext = std::abs(p.start) + long(p.core.size()) + 1;
    long lp = std::max<long>(1, long(p.left.size())), rp = std::max<long>(1, long(p.right.size()));
    long lo = -(ext + lp + maxf), hi = ext + rp + maxf;
    for (auto& w : z.forbidden)
        for (long t = lo; t + long(w.size()) <= hi; ++t) {
            bool match = true;
            for (size_t k = 0; k < w.size() && match; ++k) match = p.at(t + long(k)) == w[k];
            if (match) throw Error(errk::InvalidPoint, "forbidden word occurs in configuration");
        }
}

void validate_boundary_point(const FrBoundarySystem& sys, const BoundaryPoint& p) {
    if (p.period.empty()) throw Error(errk::InvalidPoint, "boundary point needs a period");
    for (int l : p.period.letters)
        if (std::abs(l) > sys.rank) throw Error(errk::InvalidPoint, "letter out of rank");
    for (int l : p.prefix.letters)
        if (std::abs(l) > sys.rank) throw Error(errk::InvalidPoint, "letter out of rank");
    if (p.period.letters.back() == -p.period.letters.front())
        throw Error(errk::InvalidPoint, "period not cyclically reduced");
    if (!p.prefix.empty() && p.prefix.letters.back() == -p.period.letters.front())
        throw Error(errk::InvalidPoint, "prefix.period junction not reduced");
}

}  // namespace

void validate_point(const SystemDescriptor& sys, const Point& p) {
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        auto* sp = std::get_if<SamplePoint>(&p);
        if (!sp) throw Error(errk::InvalidPoint, "expected sample index");
        if (sp->index < 0 || sp->index >= s->n) throw Error(errk::InvalidPoint, "sample index range");
    } else if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        auto* e = std::get_if<EvSeqPoint>(&p);
        if (!e) throw Error(errk::InvalidPoint, "expected eventually periodic sequence");
        if (e->left.empty() || e->right.empty())
            throw Error(errk::InvalidPoint, "missing period block");
        for (auto blk : {&e->left, &e->core, &e->right})
            for (int c : *blk)
                if (c < 0 || c >= z->alphabet) throw Error(errk::InvalidPoint, "letter out of alphabet");
        check_forbidden(*z, *e);
    } else if (auto* f = std::get_if<FrShiftSystem>(&sys)) {
        auto* q = std::get_if<QuotientPoint>(&p);
        if (!q) throw Error(errk::InvalidPoint, "expected quotient configuration");
        int n = q->size();
        if (n == 0 || int(q->action.size()) != f->rank)
            throw Error(errk::InvalidPoint, "quotient data shape");
        for (auto& perm : q->action) {
            if (int(perm.size()) != n) throw Error(errk::InvalidPoint, "permutation size");
            std::vector<char> hit(n, 0);
            for (int v : perm) {
                if (v < 0 || v >= n || hit[v]) throw Error(errk::NonBijective, "quotient generator table");
                hit[v] = 1;
            }
        }
        for (int c : q->labels)
            if (c < 0 || c >= f->alphabet) throw Error(errk::InvalidPoint, "letter out of alphabet");
        if (q->base < 0 || q->base >= n) throw Error(errk::InvalidPoint, "base point range");
    } else if (auto* bd = std::get_if<FrBoundarySystem>(&sys)) {
        auto* b = std::get_if<BoundaryPoint>(&p);
        if (!b) throw Error(errk::InvalidPoint, "expected boundary word");
        validate_boundary_point(*bd, *b);
    } else if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        auto* cp = std::get_if<CompactZPoint>(&p);
        if (!cp) throw Error(errk::InvalidPoint, "expected compactified-z point");
        if (cp->at_class) {
            if (cp->cls < 0 || cp->cls >= int(c->classes.size()))
                throw Error(errk::InvalidPoint, "class id range");
        } else if (cp->copy < 0 || cp->copy >= c->copies) {
            throw Error(errk::InvalidPoint, "copy id range");
        }
    } else if (auto* poly = std::get_if<PolytopeSystem>(&sys)) {
        auto* pt = std::get_if<PolytopePoint>(&p);
        if (!pt) throw Error(errk::InvalidPoint, "expected coordinate point");
        if (int(pt->coords.size()) != poly->dim()) throw Error(errk::InvalidPoint, "point dimension");
        if (!poly->contains(pt->coords)) throw Error(errk::InvalidPoint, "point outside hull");
    } else if (auto* alg = std::get_if<AlgebraicZSystem>(&sys)) {
        auto* tp = std::get_if<TorusPeriodicPoint>(&p);
        if (!tp) throw Error(errk::InvalidPoint, "expected periodic torus point");
        long n = long(tp->values.size());
        if (n == 0) throw Error(errk::InvalidPoint, "period must be positive");
        for (auto& v : tp->values)
            if (v < 0 || v >= 1) throw Error(errk::InvalidPoint, "torus value outside [0,1)");
        // The periodic extension must satisfy sum_k c_k x_{i+k} = 0 mod 1 at
        // every i; by periodicity it is enough to check one period.
        for (long i = 0; i < n; ++i) {
            Rational acc(0);
            for (auto& [e, c] : alg->f.terms)
                acc += Rational(c) * tp->values[size_t(((i + e) % n + n) % n)];
            if (denominator(acc) != 1)
                throw Error(errk::InvalidPoint, "defining relation fails mod 1");
        }
    }
}

// --------------------------------------------------------------------------
// Distances
// --------------------------------------------------------------------------

namespace {

Rational phi(long n) {  // n -> n/(1+|n|)
    return Rational(Int(n), Int(1 + std::abs(n)));
}

}  // namespace

// Path metric data for a compactified system: pairwise class distances.
std::vector<std::vector<Rational>> compactz_class_distances(const CompactifiedZSystem& c) {
    int k = int(c.classes.size());
    Rational inf(1000000);
    std::vector<std::vector<Rational>> d(k, std::vector<Rational>(k, inf));
    for (int i = 0; i < k; ++i) d[i][i] = 0;
    for (int cp = 0; cp < c.copies; ++cp) {
        int a = c.class_of(cp, -1), b = c.class_of(cp, +1);
        d[a][b] = std::min(d[a][b], Rational(2));
        d[b][a] = d[a][b];
    }
    for (int m = 0; m < k; ++m)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
    return d;
}

std::vector<Rational> compactz_costs_to_classes(const CompactifiedZSystem& c, const CompactZPoint& p) {
    auto D = compactz_class_distances(c);
    std::vector<Rational> cost(c.classes.size(), Rational(1000000));
    if (p.at_class) {
        for (size_t i = 0; i < c.classes.size(); ++i) cost[i] = D[p.cls][i];
    } else {
        int lo = c.class_of(p.copy, -1), hi = c.class_of(p.copy, +1);
        Rational toLo = Rational(phi(p.pos) + 1), toHi = Rational(1 - phi(p.pos));
        for (size_t i = 0; i < c.classes.size(); ++i)
            cost[i] = std::min(Rational(toLo + D[lo][i]), Rational(toHi + D[hi][i]));
    }
    return cost;
}

namespace {

Rational compactz_distance(const CompactifiedZSystem& c, const CompactZPoint& x, const CompactZPoint& y) {
    auto D = compactz_class_distances(c);
    Rational best(1000000);
    if (!x.at_class && !y.at_class && x.copy == y.copy)
        best = rat_abs(Rational(phi(x.pos) - phi(y.pos)));
    if (x.at_class && y.at_class) best = std::min(best, D[x.cls][y.cls]);
    auto cx = compactz_costs_to_classes(c, x), cy = compactz_costs_to_classes(c, y);
    if (y.at_class) {
        best = std::min(best, cx[y.cls]);
    } else if (x.at_class) {
        best = std::min(best, cy[x.cls]);
    } else {
        for (size_t i = 0; i < c.classes.size(); ++i)
            best = std::min(best, Rational(cx[i] + cy[i]));
    }
    return best;
}

// First disagreement depth of two quotient configurations over reduced words,
// or -1 when equal. BFS over reachable state pairs; exact.
int quotient_diff_depth(const QuotientPoint& x, const QuotientPoint& y) {
    struct State {
        int qx, qy, last;  // last letter used (0 at root), to keep words reduced
    };
    int rank = int(x.action.size());
    std::set<std::tuple<int, int, int>> seen;
    std::vector<State> layer{{x.base, y.base, 0}};
    seen.insert({x.base, y.base, 0});
    for (int depth = 0; !layer.empty(); ++depth) {
        for (auto& st : layer)
            if (x.labels[st.qx] != y.labels[st.qy]) return depth;
        std::vector<State> next;
        for (auto& st : layer)
            for (int i = 1; i <= rank; ++i)
                for (int sgn : {+1, -1}) {
                    int l = sgn * i;
                    if (st.last == -l) continue;
                    // prepending l: (l.w).base = l.(w.base), reduced iff l != -first(w)
                    State ns{x.apply_letter(l, st.qx), y.apply_letter(l, st.qy), l};
                    if (seen.insert({ns.qx, ns.qy, ns.last}).second) next.push_back(ns);
                }
        layer = std::move(next);
    }
    return -1;
}

int boundary_common_prefix(const BoundaryPoint& x, const BoundaryPoint& y) {
    long bound = long(x.prefix.letters.size()) + long(y.prefix.letters.size()) +
                 lcm_long(long(x.period.letters.size()), long(y.period.letters.size())) + 1;
    for (long i = 0; i < bound; ++i)
        if (x.at(int(i)) != y.at(int(i))) return int(i);
    return -1;  // equal
}

}  // namespace

Rational distance(const SystemDescriptor& sys, const Point& a, const Point& b) {
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        return s->dist[std::get<SamplePoint>(a).index][std::get<SamplePoint>(b).index];
    }
    if (std::holds_alternative<ZShiftSystem>(sys)) {
        const auto &x = std::get<EvSeqPoint>(a), &y = std::get<EvSeqPoint>(b);
        long bound = evseq_compare_bound(x, y);
        for (long d = 0; d <= bound; ++d) {
            if (x.at(d) != y.at(d) || (d > 0 && x.at(-d) != y.at(-d))) return pow2neg(int(d));
        }
        return Rational(0);
    }
    if (std::holds_alternative<FrShiftSystem>(sys)) {
        int depth = quotient_diff_depth(std::get<QuotientPoint>(a), std::get<QuotientPoint>(b));
        return depth < 0 ? Rational(0) : pow2neg(depth);
    }
    if (std::holds_alternative<FrBoundarySystem>(sys)) {
        int n = boundary_common_prefix(std::get<BoundaryPoint>(a), std::get<BoundaryPoint>(b));
        return n < 0 ? Rational(0) : pow2neg(n);
    }
    if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        return compactz_distance(*c, std::get<CompactZPoint>(a), std::get<CompactZPoint>(b));
    }
    if (std::holds_alternative<PolytopeSystem>(sys)) {
        const auto &x = std::get<PolytopePoint>(a), &y = std::get<PolytopePoint>(b);
        Rational m(0);
        for (size_t i = 0; i < x.coords.size(); ++i)
            m = std::max(m, rat_abs(x.coords[i] - y.coords[i]));
        return m;
    }
    if (std::holds_alternative<AlgebraicZSystem>(sys)) {
        const auto &x = std::get<TorusPeriodicPoint>(a), &y = std::get<TorusPeriodicPoint>(b);
        long p = long(x.values.size()), q = long(y.values.size());
        long L = lcm_long(p, q);
        Rational best(0);
        // Both coordinates repeat with period L and the weight 2^-|j| decays,
        // so the sup is attained for |j| < L; a term at |j| is at most
        // 2^-(j+1) (circle distances are at most 1/2), which bounds the tail.
        for (long j = 0; j < L; ++j) {
            if (best > 0 && pow2neg(int(j) + 1) <= best) break;
            Rational w = pow2neg(int(j));
            for (long jj : {j, -j}) {
                Rational cd = circle_dist(x.values[size_t(((jj % p) + p) % p)],
                                          y.values[size_t(((jj % q) + q) % q)]);
                best = std::max(best, Rational(w * cd));
                if (j == 0) break;
            }
        }
        return best;
    }
    throw Error(errk::NonEvaluable, "distance: unsupported kind");
}

Rational image_distance(const FiniteSampleSystem& s, int x, int y) {
    if (!s.image_dist.empty()) return s.image_dist[x][y];
    return s.dist[s.map_index[x]][y];
}

// --------------------------------------------------------------------------
// Generator action
// --------------------------------------------------------------------------

namespace {

BoundaryPoint left_multiply(int rank, const Word& g, const BoundaryPoint& p) {
    (void)rank;
    // Cancel g against the stream prefix.period^inf, then prepend what's left.
    std::vector<int> head = p.prefix.letters;
    std::vector<int> per = p.period.letters;
    std::vector<int> gl = g.letters;
    size_t rot = 0;  // how many letters of the period have been consumed
    while (!gl.empty()) {
        int next = head.empty() ? per[rot % per.size()] : head.front();
        if (gl.back() != -next) break;
        gl.pop_back();
        if (head.empty())
            ++rot;
        else
            head.erase(head.begin());
    }
    std::vector<int> rotated(per.begin() + (rot % per.size()), per.end());
    rotated.insert(rotated.end(), per.begin(), per.begin() + (rot % per.size()));
    std::vector<int> prefix = gl;
    prefix.insert(prefix.end(), head.begin(), head.end());
    // Absorb a leading run of the rotated period into the prefix so the
    // prefix|period junction is reduced (it already is: no cancellation left).
    return BoundaryPoint{Word{std::move(prefix)}, Word{std::move(rotated)}};
}

}  // namespace

Point apply_generator(const SystemDescriptor& sys, int gen, int sign, const Point& p) {
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        (void)gen;
        const auto& sp = std::get<SamplePoint>(p);
        if (sign > 0) {
            if (!s->on_sample()) throw Error(errk::NonInvertible, "image leaves the sample");
            return SamplePoint{s->map_index[sp.index]};
        }
        if (!s->bijective()) throw Error(errk::NonInvertible, "map table is not a bijection");
        for (int i = 0; i < s->n; ++i)
            if (s->map_index[i] == sp.index) return SamplePoint{i};
        throw Error(errk::NonInvertible, "no preimage");
    }
    if (std::holds_alternative<ZShiftSystem>(sys)) {
        EvSeqPoint e = std::get<EvSeqPoint>(p);
        e.start += sign;  // translation acts by re-indexing
        return e;
    }
    if (std::holds_alternative<FrShiftSystem>(sys)) {
        QuotientPoint q = std::get<QuotientPoint>(p);
        // (s.x)_g = x_{s^-1 g}: relabel by the inverse letter at the base.
        std::vector<int> nl(q.labels.size());
        for (int v = 0; v < int(nl.size()); ++v)
            nl[v] = q.labels[q.apply_letter(-(sign > 0 ? gen + 1 : -(gen + 1)), v)];
        QuotientPoint out = q;
        out.labels = std::move(nl);
        return out;
    }
    if (auto* bd = std::get_if<FrBoundarySystem>(&sys)) {
        Word g{{sign > 0 ? gen + 1 : -(gen + 1)}};
        return left_multiply(bd->rank, g, std::get<BoundaryPoint>(p));
    }
    if (std::holds_alternative<CompactifiedZSystem>(sys)) {
        CompactZPoint c = std::get<CompactZPoint>(p);
        if (!c.at_class) c.pos += sign;
        return c;
    }
    if (auto* poly = std::get_if<PolytopeSystem>(&sys)) {
        const auto& pt = std::get<PolytopePoint>(p);
        return PolytopePoint{sign > 0 ? poly->apply(pt.coords) : poly->apply_inverse(pt.coords)};
    }
    if (std::holds_alternative<AlgebraicZSystem>(sys)) {
        const auto& tp = std::get<TorusPeriodicPoint>(p);
        long n = long(tp.values.size());
        TorusPeriodicPoint out;
        out.values.resize(size_t(n));
        for (long i = 0; i < n; ++i)  // (Tx)_i = x_{i+1}
            out.values[size_t(i)] = tp.values[size_t(((i + sign) % n + n) % n)];
        return out;
    }
    throw Error(errk::NonEvaluable, "apply_generator: unsupported kind");
}

Point apply_word(const SystemDescriptor& sys, const Word& w, const Point& p) {
    Point cur = p;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        cur = apply_generator(sys, std::abs(*it) - 1, *it > 0 ? 1 : -1, cur);
    return cur;
}

bool same_system(const SystemDescriptor& a, const SystemDescriptor& b) { return a == b; }

int resolution_radius(const Rational& epsilon) {
    if (epsilon <= 0) throw Error(errk::Mismatch, "epsilon must be positive");
    int r = 0;
    while (pow2neg(r) > epsilon) {
        ++r;
        if (r > 64) throw Error(errk::ResolutionOverflow, "epsilon resolution exceeds 2^-64");
    }
    return r;
}

}  // namespace resfin
