#include "resfin/paradox.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "resfin/error.hpp"
#include "resfin/hash.hpp"
#include "resfin/sft.hpp"
#include "resfin/symbolic.hpp"

namespace resfin {

namespace {

constexpr int kMaxRefinedAtoms = 1 << 16;
constexpr long kMaxVars = 1 << 20;
constexpr long kSearchBudget = 1 << 24;
constexpr int kLpPruneBudget = 256;

// Net power for a word over a single generator (the only group element data a
// Z-system action can see).
long net_shift(const Word& w) {
    long j = 0;
    for (int l : w.letters) {
        if (l != 1 && l != -1) throw Error(errk::Mismatch, "translator uses a missing generator");
        j += l;
    }
    return j;
}

void stamp(ActionContext& ctx, const std::string& kind_tag) {
    std::ostringstream os;
    os << kind_tag << '|' << ctx.bound_description << '|' << ctx.base_count << '|'
       << ctx.refined_count;
    for (const auto& w : ctx.translators) os << '|' << word_str(w);
    for (const auto& s : ctx.base_labels) os << '|' << s;
    ctx.context_hash = fnv1a64(os.str());
}

std::vector<Word> reduced_translators(const std::vector<Word>& ts) {
    if (ts.empty()) throw Error(errk::Mismatch, "context needs at least one translator");
    std::vector<Word> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(reduce(t.letters));
    return out;
}

ActionContext context_finite_sample(const FiniteSampleSystem& s, const std::vector<Word>& ts) {
    if (!s.on_sample())
        throw Error(errk::NonEvaluable, "context needs an on-sample map");
    bool need_inverse = false;
    for (const auto& t : ts)
        for (int l : t.letters)
            if (l < 0) need_inverse = true;
    if (need_inverse && !s.bijective())
        throw Error(errk::NonInvertible, "translator with inverse letters over a non-bijective map");
    std::vector<int> inv(size_t(s.n), -1);
    if (s.bijective())
        for (int i = 0; i < s.n; ++i) inv[size_t(s.map_index[size_t(i)])] = i;

    ActionContext ctx;
    ctx.base_count = ctx.refined_count = s.n;
    ctx.translators = ts;
    ctx.refinement.resize(size_t(s.n));
    for (int i = 0; i < s.n; ++i) {
        ctx.refinement[size_t(i)] = {i};
        ctx.base_labels.push_back("p" + std::to_string(i));
    }
    ctx.refined_labels = ctx.base_labels;
    ctx.image.resize(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        ctx.image[ti].resize(size_t(s.n));
        for (int i = 0; i < s.n; ++i) {
            int x = i;
            const auto& ls = ts[ti].letters;
            for (size_t p = ls.size(); p-- > 0;) {
                if (std::abs(ls[p]) != 1)
                    throw Error(errk::Mismatch, "translator uses a missing generator");
                x = ls[p] > 0 ? s.map_index[size_t(x)] : inv[size_t(x)];
            }
            ctx.image[ti][size_t(i)] = {x};
        }
    }
    ctx.bound_description = "finite sample, n=" + std::to_string(s.n);
    stamp(ctx, "finite-sample");
    return ctx;
}

ActionContext context_zshift(const ZShiftSystem& z, int window, const std::vector<Word>& ts,
                             const DensityGridCaps& caps) {
    long t = 0;
    for (const auto& w : ts) t = std::max(t, std::labs(net_shift(w)));
    int W = window + 2 * int(t);
    SubshiftWindows sw(z, caps.max_patterns);
    auto base = sw.windows(window, caps.max_patterns);
    auto refined = sw.windows(W, caps.max_patterns);
    if (long(refined.size()) > kMaxRefinedAtoms)
        throw Error(errk::ContextOverflow, "refined atom count " + std::to_string(refined.size()));

    // Base cylinders are anchored at [t, t+window) inside the refined window
    // [0, W); shifting by |j| <= t keeps the anchored block inside [0, W).
    auto match_at = [&](const std::vector<int>& v, const std::vector<int>& u, long off) {
        for (size_t i = 0; i < u.size(); ++i)
            if (v[size_t(off) + i] != u[i]) return false;
        return true;
    };
    ActionContext ctx;
    ctx.base_count = int(base.size());
    ctx.refined_count = int(refined.size());
    ctx.translators = ts;
    ctx.refinement.resize(base.size());
    for (size_t b = 0; b < base.size(); ++b) {
        std::string lbl;
        for (int c : base[b]) lbl += std::to_string(c);
        ctx.base_labels.push_back(lbl);
        for (size_t r = 0; r < refined.size(); ++r)
            if (match_at(refined[r], base[b], t)) ctx.refinement[b].push_back(int(r));
    }
    for (const auto& v : refined) {
        std::string lbl;
        for (int c : v) lbl += std::to_string(c);
        ctx.refined_labels.push_back(lbl);
    }
    ctx.image.resize(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        long j = net_shift(ts[ti]);
        ctx.image[ti].resize(base.size());
        for (size_t b = 0; b < base.size(); ++b)
            for (size_t r = 0; r < refined.size(); ++r)
                if (match_at(refined[r], base[b], t + j)) ctx.image[ti][b].push_back(int(r));
    }
    ctx.bound_description = "z-shift window " + std::to_string(window) + " shift bound " + std::to_string(t);
    stamp(ctx, "z-shift");
    return ctx;
}

ActionContext context_boundary(const FrBoundarySystem& fb, int window, const std::vector<Word>& ts,
                               const DensityGridCaps& caps) {
    if (window < 1) throw Error(errk::Mismatch, "boundary context needs window >= 1");
    size_t t = 0;
    for (const auto& w : ts) {
        for (int l : w.letters)
            if (std::abs(l) > fb.rank) throw Error(errk::Mismatch, "translator uses a missing generator");
        t = std::max(t, w.letters.size());
    }
    int W = window + int(t);
    auto base = sphere(fb.rank, window);
    auto refined = sphere(fb.rank, W);
    if (long(refined.size()) > kMaxRefinedAtoms || long(refined.size()) > caps.max_patterns)
        throw Error(errk::ContextOverflow, "refined atom count " + std::to_string(refined.size()));

    auto starts_with = [](const Word& v, const Word& u) {
        if (u.letters.size() > v.letters.size()) return false;
        return std::equal(u.letters.begin(), u.letters.end(), v.letters.begin());
    };
    ActionContext ctx;
    ctx.base_count = int(base.size());
    ctx.refined_count = int(refined.size());
    ctx.translators = ts;
    ctx.refinement.resize(base.size());
    for (size_t b = 0; b < base.size(); ++b) {
        ctx.base_labels.push_back(word_str(base[b]));
        for (size_t r = 0; r < refined.size(); ++r)
            if (starts_with(refined[r], base[b])) ctx.refinement[b].push_back(int(r));
    }
    for (const auto& v : refined) ctx.refined_labels.push_back(word_str(v));
    ctx.image.resize(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        ctx.image[ti].resize(base.size());
        for (size_t b = 0; b < base.size(); ++b) {
            auto pieces = boundary_translate_cylinders(fb.rank, ts[ti], base[b]);
            for (size_t r = 0; r < refined.size(); ++r)
                for (const auto& p : pieces)
                    if (starts_with(refined[r], p)) {
                        ctx.image[ti][b].push_back(int(r));
                        break;
                    }
        }
    }
    ctx.bound_description =
        "boundary window " + std::to_string(window) + " translator bound " + std::to_string(t);
    stamp(ctx, "fr-boundary");
    return ctx;
}

ActionContext context_compact(const CompactifiedZSystem& cz, const SystemDescriptor& sys, int window,
                              const std::vector<Word>& ts, const DensityGridCaps& caps) {
    long t = 0;
    for (const auto& w : ts) t = std::max(t, std::labs(net_shift(w)));
    int W = window + int(t);
    auto base = atoms_at(sys, window, caps);
    auto refined = atoms_at(sys, W, caps);
    if (long(refined.size()) > kMaxRefinedAtoms)
        throw Error(errk::ContextOverflow, "refined atom count " + std::to_string(refined.size()));

    ActionContext ctx;
    ctx.base_count = int(base.size());
    ctx.refined_count = int(refined.size());
    ctx.translators = ts;
    ctx.refinement.resize(base.size());
    // A refined atom lies in exactly one translated base atom, so membership
    // of one representative point decides containment.
    std::vector<Point> reps;
    for (const auto& r : refined) reps.push_back(atom_representative(sys, W, r));
    for (size_t b = 0; b < base.size(); ++b) {
        ctx.base_labels.push_back(atom_label(sys, base[b]));
        for (size_t r = 0; r < refined.size(); ++r)
            if (atom_contains(sys, window, base[b], reps[r])) ctx.refinement[b].push_back(int(r));
    }
    for (const auto& r : refined) ctx.refined_labels.push_back(atom_label(sys, r));
    ctx.image.resize(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        long j = net_shift(ts[ti]);
        ctx.image[ti].resize(base.size());
        for (size_t r = 0; r < refined.size(); ++r) {
            Point p = reps[r];
            auto& cp = std::get<CompactZPoint>(p);
            if (!cp.at_class) cp.pos -= j;
            for (size_t b = 0; b < base.size(); ++b)
                if (atom_contains(sys, window, base[b], p)) {
                    ctx.image[ti][b].push_back(int(r));
                    break;
                }
        }
    }
    (void)cz;
    ctx.bound_description =
        "compactified window " + std::to_string(window) + " shift bound " + std::to_string(t);
    stamp(ctx, "compactified-z");
    return ctx;
}

struct SearchVar {
    int atom = 0;   // position within the target list
    int trans = 0;  // translator id
    const std::vector<int>* img = nullptr;
};

// Shared exact search state for decide_paradoxical.
struct ParadoxSearch {
    const ActionContext& ctx;
    std::vector<int> target;
    int k, l;
    std::vector<SearchVar> vars;
    std::vector<int> group_end;  // per target atom: one past its last var
    std::vector<int> lhs;        // per target atom
    std::vector<int> rhs;        // per refined atom
    std::vector<char> in_target_ref;
    std::vector<int> values;
    long budget = kSearchBudget;
    int lp_budget = kLpPruneBudget;
    bool found = false;

    ParadoxSearch(const ActionContext& c, std::vector<int> tgt, int kk, int ll)
        : ctx(c), target(std::move(tgt)), k(kk), l(ll) {}

    bool lp_feasible(size_t from) const {
        // Relaxed remainder: continuous multiplicities for vars[from..), with
        // already-consumed left-hand and right-hand budgets subtracted.
        LpProblem lp(int(vars.size() - from));
        std::vector<std::vector<std::pair<int, Rational>>> lhs_rows(target.size());
        std::map<int, std::vector<std::pair<int, Rational>>> rhs_rows;
        for (size_t v = from; v < vars.size(); ++v) {
            lhs_rows[size_t(vars[v].atom)].push_back({int(v - from), Rational(1)});
            for (int r : *vars[v].img) rhs_rows[r].push_back({int(v - from), Rational(1)});
        }
        for (size_t a = 0; a < target.size(); ++a) {
            int need = k - lhs[a];
            if (need <= 0) continue;
            if (lhs_rows[a].empty()) return false;
            lp.add_constraint(lhs_rows[a], +1, Rational(need));
        }
        for (auto& [r, row] : rhs_rows) {
            int room = l - rhs[size_t(r)];
            if (room < 0) return false;
            lp.add_constraint(row, -1, Rational(room));
        }
        return lp.feasible_point().feasible;
    }

    bool dfs(size_t i) {
        if (--budget <= 0) throw Error(errk::ContextOverflow, "certificate search budget exceeded");
        if (i == vars.size()) {
            for (size_t a = 0; a < target.size(); ++a)
                if (lhs[a] < k) return false;
            return true;
        }
        int a = vars[i].atom;
        // Entering a new atom group: previous group must already meet k, and
        // an exact relaxation of the remainder must stay feasible.
        if (int(i) == (a == 0 ? 0 : group_end[size_t(a) - 1])) {
            if (a > 0 && lhs[size_t(a) - 1] < k) return false;
            if (lp_budget > 0) {
                --lp_budget;
                if (!lp_feasible(i)) return false;
            }
        }
        int remaining = group_end[size_t(a)] - int(i);
        if (lhs[size_t(a)] + l * remaining < k) return false;
        for (int m = 0; m <= l; ++m) {
            bool ok = true;
            if (m > 0) {
                for (int r : *vars[i].img)
                    if (rhs[size_t(r)] + m > l) {
                        ok = false;
                        break;
                    }
            }
            if (!ok) break;  // larger m only worsens the violated row
            if (m > 0)
                for (int r : *vars[i].img) rhs[size_t(r)] += m;
            lhs[size_t(a)] += m;
            values[i] = m;
            if (dfs(i + 1)) return true;
            lhs[size_t(a)] -= m;
            if (m > 0)
                for (int r : *vars[i].img) rhs[size_t(r)] -= m;
        }
        values[i] = 0;
        return false;
    }
};

std::vector<int> sorted_ids(const std::vector<int>& ids, int bound, const char* what) {
    std::vector<int> out = ids;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (int a : out)
        if (a < 0 || a >= bound) throw Error(errk::StaleContext, std::string(what) + " atom id out of range");
    return out;
}

}  // namespace

ActionContext make_context(const SystemDescriptor& sys, int window, const std::vector<Word>& translators,
                           const DensityGridCaps& caps) {
    validate_system(sys);
    auto ts = reduced_translators(translators);
    if (auto* fs = std::get_if<FiniteSampleSystem>(&sys)) return context_finite_sample(*fs, ts);
    if (auto* z = std::get_if<ZShiftSystem>(&sys)) return context_zshift(*z, window, ts, caps);
    if (auto* fb = std::get_if<FrBoundarySystem>(&sys)) return context_boundary(*fb, window, ts, caps);
    if (auto* cz = std::get_if<CompactifiedZSystem>(&sys)) return context_compact(*cz, sys, window, ts, caps);
    throw Error(errk::NonEvaluable, "no clopen context for kind " + kind_name(sys));
}

ActionContext make_context_finite(const FiniteAction& action, const std::vector<Word>& translators) {
    auto ts = reduced_translators(translators);
    ActionContext ctx;
    ctx.base_count = ctx.refined_count = action.size;
    ctx.translators = ts;
    ctx.refinement.resize(size_t(action.size));
    for (int i = 0; i < action.size; ++i) {
        ctx.refinement[size_t(i)] = {i};
        ctx.base_labels.push_back("p" + std::to_string(i));
    }
    ctx.refined_labels = ctx.base_labels;
    ctx.image.resize(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        ctx.image[ti].resize(size_t(action.size));
        for (int i = 0; i < action.size; ++i) {
            int x = i;
            const auto& ls = ts[ti].letters;
            for (size_t p = ls.size(); p-- > 0;) {
                int g = std::abs(ls[p]) - 1;
                if (g >= action.rank()) throw Error(errk::Mismatch, "translator uses a missing generator");
                x = action.apply(g, ls[p] > 0 ? +1 : -1, x);
            }
            ctx.image[ti][size_t(i)] = {x};
        }
    }
    ctx.bound_description = "finite action, n=" + std::to_string(action.size) + ", rank " +
                            std::to_string(action.rank());
    stamp(ctx, "finite-action");
    return ctx;
}

std::optional<ParadoxCertificate> decide_paradoxical(const ActionContext& ctx,
                                                     const std::vector<int>& target, int k, int l) {
    if (!(k > l && l > 0)) throw Error(errk::HypothesisError, "need k > l > 0");
    auto tgt = sorted_ids(target, ctx.base_count, "target");
    if (tgt.empty()) throw Error(errk::HypothesisError, "empty target");

    ParadoxSearch s(ctx, tgt, k, l);
    s.in_target_ref.assign(size_t(ctx.refined_count), 0);
    for (int a : tgt)
        for (int r : ctx.refinement[size_t(a)]) s.in_target_ref[size_t(r)] = 1;

    // Pieces outside the target never help; pieces whose image leaves the
    // target are forced to multiplicity zero by the right-hand inequality.
    for (size_t ai = 0; ai < tgt.size(); ++ai) {
        for (size_t ti = 0; ti < ctx.translators.size(); ++ti) {
            const auto& img = ctx.image[ti][size_t(tgt[ai])];
            bool inside = !img.empty();
            for (int r : img)
                if (!s.in_target_ref[size_t(r)]) {
                    inside = false;
                    break;
                }
            if (inside) s.vars.push_back({int(ai), int(ti), &img});
        }
        s.group_end.push_back(int(s.vars.size()));
    }
    if (long(s.vars.size()) > kMaxVars)
        throw Error(errk::ContextOverflow, "piece variable count " + std::to_string(s.vars.size()));
    s.lhs.assign(tgt.size(), 0);
    s.rhs.assign(size_t(ctx.refined_count), 0);
    s.values.assign(s.vars.size(), 0);

    if (!s.dfs(0)) return std::nullopt;

    ParadoxCertificate cert;
    cert.context_hash = ctx.context_hash;
    cert.target = tgt;
    cert.k = k;
    cert.l = l;
    for (size_t v = 0; v < s.vars.size(); ++v)
        for (int m = 0; m < s.values[v]; ++m)
            cert.pieces.push_back({tgt[size_t(s.vars[v].atom)], s.vars[v].trans});
    return cert;
}

bool verify_certificate(const ActionContext& ctx, const ParadoxCertificate& cert) {
    if (cert.context_hash != ctx.context_hash)
        throw Error(errk::StaleContext, "certificate was computed against a different context");
    if (!(cert.k > cert.l && cert.l > 0)) return false;
    auto tgt = sorted_ids(cert.target, ctx.base_count, "target");
    std::vector<int> lhs(size_t(ctx.refined_count), 0), rhs(size_t(ctx.refined_count), 0);
    for (const auto& [a, t] : cert.pieces) {
        if (a < 0 || a >= ctx.base_count)
            throw Error(errk::StaleContext, "piece is not a union of context atoms");
        if (t < 0 || t >= int(ctx.translators.size()))
            throw Error(errk::StaleContext, "piece uses a translator missing from the context");
        for (int r : ctx.refinement[size_t(a)]) ++lhs[size_t(r)];
        for (int r : ctx.image[size_t(t)][size_t(a)]) ++rhs[size_t(r)];
    }
    std::vector<char> in_a(size_t(ctx.refined_count), 0);
    for (int a : tgt)
        for (int r : ctx.refinement[size_t(a)]) in_a[size_t(r)] = 1;
    for (int r = 0; r < ctx.refined_count; ++r) {
        if (in_a[size_t(r)] && lhs[size_t(r)] < cert.k) return false;
        if (rhs[size_t(r)] > (in_a[size_t(r)] ? cert.l : 0)) return false;
    }
    return true;
}

std::optional<InvariantMeasureCertificate> invariant_measure_lp(const ActionContext& ctx,
                                                                const std::vector<int>& target) {
    auto tgt = sorted_ids(target, ctx.base_count, "target");
    if (tgt.empty()) throw Error(errk::HypothesisError, "empty target");

    LpProblem lp(ctx.refined_count);
    std::set<std::vector<std::pair<int, Rational>>> seen;
    for (size_t ti = 0; ti < ctx.translators.size(); ++ti) {
        for (int a = 0; a < ctx.base_count; ++a) {
            std::map<int, Rational> row;
            for (int r : ctx.image[ti][size_t(a)]) row[r] += Rational(1);
            for (int r : ctx.refinement[size_t(a)]) row[r] -= Rational(1);
            std::vector<std::pair<int, Rational>> coeffs;
            for (auto& [r, c] : row)
                if (c != 0) coeffs.push_back({r, c});
            if (coeffs.empty()) continue;
            if (seen.insert(coeffs).second) lp.add_constraint(coeffs, 0, Rational(0));
        }
    }
    std::vector<std::pair<int, Rational>> norm;
    for (int a : tgt)
        for (int r : ctx.refinement[size_t(a)]) norm.push_back({r, Rational(1)});
    lp.add_constraint(norm, 0, Rational(1));

    auto res = lp.feasible_point();
    if (!res.feasible) return std::nullopt;
    InvariantMeasureCertificate cert;
    cert.context_hash = ctx.context_hash;
    cert.target = tgt;
    cert.weights = res.x;
    cert.weights.resize(size_t(ctx.refined_count), Rational(0));
    return cert;
}

Rational measure_of(const ActionContext& ctx, const InvariantMeasureCertificate& cert,
                    const std::vector<int>& base_ids) {
    if (cert.context_hash != ctx.context_hash)
        throw Error(errk::StaleContext, "measure was computed against a different context");
    Rational total(0);
    for (int a : sorted_ids(base_ids, ctx.base_count, "measure"))
        for (int r : ctx.refinement[size_t(a)]) total += cert.weights[size_t(r)];
    return total;
}

std::optional<PieceMatching> equidecompose(const ActionContext& ctx, const std::vector<int>& P,
                                           const std::vector<int>& Q) {
    auto ps = sorted_ids(P, ctx.base_count, "P");
    auto qs = sorted_ids(Q, ctx.base_count, "Q");
    std::vector<char> want(size_t(ctx.refined_count), 0);
    long want_count = 0;
    for (int a : qs)
        for (int r : ctx.refinement[size_t(a)]) {
            want[size_t(r)] = 1;
            ++want_count;
        }
    long covered = 0;
    std::vector<int> choice(ps.size(), -1);
    long budget = kSearchBudget;

    // Identity-first lexicographic assignment: the translator list order is
    // the tie-break order, so contexts listing the identity first prefer it.
    auto dfs = [&](auto&& self, size_t i) -> bool {
        if (--budget <= 0) throw Error(errk::ContextOverflow, "matching search budget exceeded");
        if (i == ps.size()) return covered == want_count;
        for (size_t ti = 0; ti < ctx.translators.size(); ++ti) {
            const auto& img = ctx.image[ti][size_t(ps[i])];
            bool free = !img.empty();
            for (int r : img)
                if (want[size_t(r)] != 1) {
                    free = false;
                    break;
                }
            if (!free) continue;
            for (int r : img) want[size_t(r)] = 2;
            covered += long(img.size());
            choice[i] = int(ti);
            if (self(self, i + 1)) return true;
            covered -= long(img.size());
            for (int r : img) want[size_t(r)] = 1;
        }
        choice[i] = -1;
        return false;
    };
    if (!dfs(dfs, 0)) return std::nullopt;
    PieceMatching m;
    m.context_hash = ctx.context_hash;
    for (size_t i = 0; i < ps.size(); ++i) m.assignment.push_back({ps[i], choice[i]});
    return m;
}

}  // namespace resfin
