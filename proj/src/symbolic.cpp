#include "resfin/symbolic.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <numbers>
#include <set>

#include "resfin/error.hpp"

namespace resfin {

// --------------------------------------------------------------------------
// Finite quotients
// --------------------------------------------------------------------------

void validate_quotient(const FiniteQuotient& q) {
    if (q.order < 1) throw Error(errk::Mismatch, "quotient order must be positive");
    if (q.gen_images.empty()) throw Error(errk::Mismatch, "quotient needs generator images");
    for (auto& perm : q.gen_images) {
        if (int(perm.size()) != q.order) throw Error(errk::NonBijective, "image size");
        std::vector<char> hit(q.order, 0);
        for (int v : perm) {
            if (v < 0 || v >= q.order || hit[v]) throw Error(errk::NonBijective, "image not a permutation");
            hit[v] = 1;
        }
    }
    // transitivity of the generated action
    std::vector<char> seen(q.order, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int i = 1; i <= q.rank(); ++i)
            for (int l : {i, -i}) {
                int v = quotient_apply(q, l, u);
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
    }
    if (count != q.order) throw Error(errk::Mismatch, "generator images are not transitive");
}

int quotient_apply(const FiniteQuotient& q, int letter, int elem) {
    int i = std::abs(letter) - 1;
    const auto& perm = q.gen_images[i];
    if (letter > 0) return perm[elem];
    for (int v = 0; v < q.order; ++v)
        if (perm[v] == elem) return v;
    throw Error(errk::NonBijective, "image not a permutation");
}

int quotient_eval(const FiniteQuotient& q, const Word& w, int elem) {
    int cur = elem;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) cur = quotient_apply(q, *it, cur);
    return cur;
}

// --------------------------------------------------------------------------
// Boundary translation
// --------------------------------------------------------------------------

std::vector<Word> boundary_translate_cylinders(int rank, const Word& g, const Word& prefix) {
    if (rank < 2) throw Error(errk::Mismatch, "boundary needs rank >= 2");
    for (int l : g.letters)
        if (l == 0 || std::abs(l) > rank) throw Error(errk::Mismatch, "letter out of rank");
    for (int l : prefix.letters)
        if (l == 0 || std::abs(l) > rank) throw Error(errk::Mismatch, "letter out of rank");
    if (reduce(prefix.letters) != prefix) throw Error(errk::Mismatch, "cylinder prefix not reduced");
    Word gr = reduce(g.letters);
    // The full boundary is invariant under every translation.
    if (prefix.empty()) return {Word{}};

    std::vector<Word> out;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> todo{{gr.letters, prefix.letters}};
    while (!todo.empty()) {
        auto [gl, w] = todo.back();
        todo.pop_back();
        size_t t = 0;  // maximal cancellation between the tail of g and the head of w
        while (t < gl.size() && t < w.size() && gl[gl.size() - 1 - t] == -w[t]) ++t;
        if (t < w.size()) {
            // Some of w survives, so every stream in C(w) keeps a reduced
            // junction after multiplying: a single cylinder.
            std::vector<int> res(gl.begin(), gl.end() - long(t));
            res.insert(res.end(), w.begin() + long(t), w.end());
            out.push_back(Word{std::move(res)});
        } else {
            // w is consumed entirely: what follows w in the stream is an
            // arbitrary letter other than the inverse of w's last letter.
            std::vector<int> rest(gl.begin(), gl.end() - long(t));
            int excluded = -w.back();
            for (int i = 1; i <= rank; ++i)
                for (int s : {+1, -1}) {
                    int b = s * i;
                    if (b == excluded) continue;
                    todo.push_back({rest, {b}});
                }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Express disjoint cylinders as a union of sphere atoms at their max length.
ClopenSet clopen_from_cylinders(const FrBoundarySystem& sys, const std::vector<Word>& pieces,
                                const DensityGridCaps& caps) {
    int W = 0;
    for (auto& p : pieces) W = std::max(W, p.length());
    auto atoms = atoms_at(sys, W, caps);
    ClopenSet out;
    out.window = W;
    for (int id = 0; id < int(atoms.size()); ++id) {
        const auto& a = atoms[id].bword.letters;
        for (auto& p : pieces)
            if (p.letters.size() <= a.size() &&
                std::equal(p.letters.begin(), p.letters.end(), a.begin())) {
                out.atoms.push_back(id);
                break;
            }
    }
    return out;
}

}  // namespace

ClopenSet boundary_translate(const FrBoundarySystem& sys, const Word& g, const Word& prefix,
                             const DensityGridCaps& caps) {
    return clopen_from_cylinders(sys, boundary_translate_cylinders(sys.rank, g, prefix), caps);
}

ClopenSet boundary_translate_set(const FrBoundarySystem& sys, const Word& g, const ClopenSet& s,
                                 const DensityGridCaps& caps) {
    auto atoms = atoms_at(sys, s.window, caps);
    std::vector<Word> pieces;
    for (int id : s.atoms) {
        if (id < 0 || id >= int(atoms.size())) throw Error(errk::Mismatch, "atom id out of range");
        auto part = boundary_translate_cylinders(sys.rank, g, atoms[id].bword);
        pieces.insert(pieces.end(), part.begin(), part.end());
    }
    if (pieces.empty()) return ClopenSet{0, {}};
    return clopen_from_cylinders(sys, pieces, caps);
}

// --------------------------------------------------------------------------
// Bernoulli models from finite quotients
// --------------------------------------------------------------------------

namespace {

std::vector<int> decode_labels(long e, int order, int alphabet) {
    std::vector<int> y(order);
    for (int j = 0; j < order; ++j) {
        y[j] = int(e % alphabet);
        e /= alphabet;
    }
    return y;
}

long encode_labels(const std::vector<int>& y, int alphabet) {
    long e = 0;
    for (size_t j = y.size(); j-- > 0;) e = e * alphabet + y[j];
    return e;
}

}  // namespace

Witness bernoulli_model(int alphabet, const FiniteQuotient& q, const Rational& epsilon,
                        const DensityGridCaps& caps) {
    validate_quotient(q);
    if (alphabet < 1) throw Error(errk::Mismatch, "alphabet must be positive");
    long size = 1;
    for (int j = 0; j < q.order; ++j) {
        if (size > caps.max_patterns / alphabet)
            throw Error(errk::SizeOverflow, "alphabet^|Q| exceeds the pattern cap");
        size *= alphabet;
    }

    // inverse permutations, for the translated-index action (s.y)_q = y_{s^-1 q}
    std::vector<std::vector<int>> inv(q.rank(), std::vector<int>(q.order));
    for (int s = 0; s < q.rank(); ++s)
        for (int v = 0; v < q.order; ++v) inv[s][q.gen_images[s][v]] = v;

    std::vector<std::vector<int>> tables(q.rank(), std::vector<int>(size));
    for (long e = 0; e < size; ++e) {
        auto y = decode_labels(e, q.order, alphabet);
        for (int s = 0; s < q.rank(); ++s) {
            std::vector<int> sy(q.order);
            for (int j = 0; j < q.order; ++j) sy[j] = y[inv[s][j]];
            tables[s][e] = int(encode_labels(sy, alphabet));
        }
    }
    FiniteAction action = validate_action_description(int(size), tables);

    SystemDescriptor sys;
    ZetaMap zeta;
    if (q.rank() == 1) {
        sys = ZShiftSystem{alphabet, {}};
        const auto& pi = q.gen_images[0];
        for (long e = 0; e < size; ++e) {
            auto y = decode_labels(e, q.order, alphabet);
            std::vector<int> v(q.order);
            int cur = 0;  // orbit of the base point: v[i] = y at pi^i(0)
            for (int i = 0; i < q.order; ++i) {
                v[i] = y[cur];
                cur = pi[cur];
            }
            zeta.push_back(EvSeqPoint{v, {}, v, 0});
        }
    } else {
        sys = FrShiftSystem{q.rank(), alphabet};
        for (long e = 0; e < size; ++e)
            zeta.push_back(QuotientPoint{q.gen_images, decode_labels(e, q.order, alphabet), 0});
    }
    std::vector<int> scope(q.rank());
    for (int s = 0; s < q.rank(); ++s) scope[s] = s;
    return check_witness(sys, action, zeta, scope, epsilon, caps);
}

// --------------------------------------------------------------------------
// Algebraic actions of Z via finite quotients
// --------------------------------------------------------------------------

void validate_group_ring(const GroupRingElement& f) {
    std::set<long> exps;
    for (auto& [e, c] : f.terms) {
        if (c == 0) throw Error(errk::Mismatch, "zero coefficient in support");
        if (!exps.insert(e).second) throw Error(errk::Mismatch, "duplicate exponent");
    }
}

IntMatrix circulant_matrix(const GroupRingElement& f, int n) {
    if (n < 1) throw Error(errk::Mismatch, "quotient index must be positive");
    IntMatrix m(n, std::vector<Int>(n, 0));
    for (auto& [e, c] : f.terms)
        for (int i = 0; i < n; ++i) m[i][int(((i + e) % n + n) % n)] += c;
    return m;
}

FixedPointGroup algebraic_fixed_points(const GroupRingElement& f, int n) {
    validate_group_ring(f);
    auto snf = smith_normal_form(circulant_matrix(f, n));
    FixedPointGroup out;
    out.order = 1;
    for (auto& d : snf.diag) {
        if (d == 0) throw Error(errk::Infinite, "singular circulant: fixed points not finite");
        out.order *= d;
        if (d > 1) out.factors.push_back(d);
    }
    return out;
}

std::vector<std::vector<Rational>> character_points(const GroupRingElement& f, int n, long cap) {
    validate_group_ring(f);
    auto snf = smith_normal_form(circulant_matrix(f, n));
    Int count = 1;
    for (auto& d : snf.diag) {
        if (d == 0) throw Error(errk::Infinite, "singular circulant: fixed points not finite");
        count *= d;
        if (count > cap) throw Error(errk::SizeOverflow, "solution count exceeds cap");
    }
    // Solutions of Mx = 0 over Q/Z are x = R y with y_i in (1/d_i)Z/Z: the
    // unimodular L, R turn the system into the diagonal D y = 0.
    std::vector<std::vector<Rational>> out;
    std::vector<Int> a(size_t(n), 0);
    for (;;) {
        std::vector<Rational> x(size_t(n), Rational(0));
        for (int i = 0; i < n; ++i) {
            Rational acc(0);
            for (int j = 0; j < n; ++j) acc += Rational(snf.R[i][j] * a[j], snf.diag[j]);
            x[size_t(i)] = mod1(acc);
        }
        out.push_back(std::move(x));
        int pos = 0;
        while (pos < n && ++a[size_t(pos)] == snf.diag[size_t(pos)]) a[size_t(pos++)] = 0;
        if (pos == n) break;
    }
    return out;
}

FourierVerdict fourier_precheck(const GroupRingElement& f) {
    if (f.terms.empty()) return FourierVerdict::NotInvertible;
    // min |f^| over a 2^10 grid on the circle, against margins relative to
    // sum |c_k|. Floating point on purpose: the grid and margins are the
    // documented contract, not a proof of invertibility.
    double scale = 0;
    for (auto& [e, c] : f.terms) scale += std::abs(c.convert_to<double>());
    double minabs = scale;
    for (int j = 0; j < 1024; ++j) {
        double theta = 2.0 * std::numbers::pi * j / 1024.0;
        std::complex<double> v(0.0, 0.0);
        for (auto& [e, c] : f.terms)
            v += c.convert_to<double>() * std::polar(1.0, theta * double(e));
        minabs = std::min(minabs, std::abs(v));
    }
    if (minabs < 1e-9 * scale) return FourierVerdict::NotInvertible;
    if (minabs < 1e-6 * scale) return FourierVerdict::Inconclusive;
    return FourierVerdict::Ok;
}

std::vector<TorusPeriodicPoint> algebraic_density_grid(const GroupRingElement& f, int radius,
                                                       const DensityGridCaps& caps) {
    long target = 2 * long(radius) + 1;
    for (long n = target; n < target + 1024; ++n) {
        if (smith_determinant(circulant_matrix(f, int(n))) == 0) continue;
        auto pts = character_points(f, int(n), caps.max_patterns);
        std::vector<TorusPeriodicPoint> grid;
        grid.reserve(pts.size());
        for (auto& p : pts) grid.push_back(TorusPeriodicPoint{p});
        return grid;
    }
    throw Error(errk::ResolutionOverflow, "no nonsingular period at this resolution");
}

Witness algebraic_model_witness(const GroupRingElement& f, int n, const Rational& epsilon,
                                const DensityGridCaps& caps) {
    validate_group_ring(f);
    switch (fourier_precheck(f)) {
        case FourierVerdict::NotInvertible:
            throw Error(errk::NotInvertible, "symbol vanishes on the test grid");
        case FourierVerdict::Inconclusive:
            throw Error(errk::Inconclusive, "symbol margin below tolerance");
        case FourierVerdict::Ok:
            break;
    }
    auto pts = character_points(f, n, caps.max_patterns);
    std::map<std::vector<Rational>, int> index;
    for (int i = 0; i < int(pts.size()); ++i) index[pts[i]] = i;
    std::vector<int> table(pts.size());
    ZetaMap zeta;
    for (int i = 0; i < int(pts.size()); ++i) {
        std::vector<Rational> rot(pts[i].size());
        for (size_t k = 0; k < rot.size(); ++k) rot[k] = pts[i][(k + 1) % rot.size()];
        auto it = index.find(rot);
        if (it == index.end()) throw Error(errk::Mismatch, "solution set is not shift closed");
        table[i] = it->second;
        zeta.push_back(TorusPeriodicPoint{pts[i]});
    }
    FiniteAction action = validate_action_description(int(pts.size()), {table});
    return check_witness(AlgebraicZSystem{f}, action, zeta, {0}, epsilon, caps);
}

}  // namespace resfin
