#include "resfin/measure_model.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "resfin/error.hpp"
#include "resfin/lp.hpp"
#include "resfin/sft.hpp"

namespace resfin {

namespace {

constexpr long kDenominatorBound = 1000000;
constexpr long kModelSizeCap = 1 << 20;

struct JoinStructure {
    std::vector<std::string> labels;
    std::vector<int> block_of;        // join atom -> partition atom
    std::vector<int> image_block_of;  // join atom -> p with atom inside T p
    std::vector<Point> reps;          // finite kind: the sample point of each atom
    std::vector<std::vector<int>> win;  // z-shift kind: the window of each atom
    int block_count = 0;
};

JoinStructure join_zshift(const ZShiftSystem& z, int window, const DensityGridCaps& caps) {
    SubshiftWindows sw(z, caps.max_patterns);
    auto base = sw.windows(window, caps.max_patterns);
    std::map<std::vector<int>, int> base_id;
    for (size_t i = 0; i < base.size(); ++i) base_id[base[i]] = int(i);
    // The join of the window partition with its shift is the partition by
    // windows one longer; for the trivial partition it is trivial again.
    long jl = window == 0 ? 0 : window + 1;
    // Joint windows must cover the forbidden words, or the wiring cycles
    // below cannot be realized by admissible configurations.
    if (sw.blk > 0 && jl < sw.blk + 1)
        throw Error(errk::NonEvaluable, "partition window shorter than the longest forbidden word");
    auto join = sw.windows(jl, caps.max_patterns);
    JoinStructure js;
    js.block_count = int(base.size());
    for (auto& v : join) {
        std::string lbl;
        for (int c : v) lbl += std::to_string(c);
        js.labels.push_back(lbl.empty() ? "()" : lbl);
        js.block_of.push_back(base_id.at(std::vector<int>(v.begin(), v.begin() + window)));
        js.image_block_of.push_back(
            base_id.at(std::vector<int>(v.begin() + (window == 0 ? 0 : 1), v.end())));
        js.win.push_back(v);
    }
    return js;
}

JoinStructure join_finite(const FiniteSampleSystem& fs) {
    if (!fs.on_sample() || !fs.bijective())
        throw Error(errk::NonEvaluable, "finite-sample models need a bijective on-sample map");
    JoinStructure js;
    js.block_count = fs.n;
    std::vector<int> inv(size_t(fs.n));
    for (int i = 0; i < fs.n; ++i) inv[size_t(fs.map_index[size_t(i)])] = i;
    for (int q = 0; q < fs.n; ++q) {
        js.labels.push_back("p" + std::to_string(q));
        js.block_of.push_back(q);
        js.image_block_of.push_back(inv[size_t(q)]);
        js.reps.push_back(SamplePoint{q});
    }
    return js;
}

// Reduced row echelon form of [A | b] over the rationals. Returns false on an
// inconsistent system. pivot_col[r] is the pivot column of surviving row r.
bool rref(std::vector<std::vector<Rational>>& rows, int cols, std::vector<int>& pivot_col) {
    size_t rank = 0;
    for (int c = 0; c < cols && rank < rows.size(); ++c) {
        size_t pr = rank;
        while (pr < rows.size() && rows[pr][size_t(c)] == 0) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[rank], rows[pr]);
        Rational d = rows[rank][size_t(c)];
        for (auto& v : rows[rank]) v /= d;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][size_t(c)] == 0) continue;
            Rational f = rows[r][size_t(c)];
            for (int j = 0; j <= cols; ++j) rows[r][size_t(j)] -= Rational(f * rows[rank][size_t(j)]);
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (size_t r = rank; r < rows.size(); ++r)
        if (rows[r][size_t(cols)] != 0) return false;
    rows.resize(rank);
    return true;
}

Rational round_to_grid(const Rational& x, long M) {
    Rational scaled = Rational(x * M) + Rational(1, 2);
    Int fl = floor_div(numerator(scaled), denominator(scaled));
    return Rational(fl, Int(M));
}

Int binom_int(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int v = 1;
    for (long i = 1; i <= k; ++i) v = v * Int(n - k + i) / Int(i);
    return v;
}

}  // namespace

ModelFromMeasure measure_to_model(const SystemDescriptor& sys, int window,
                                  const std::vector<Rational>& target, const Rational& epsilon,
                                  const DensityGridCaps& caps) {
    validate_system(sys);
    if (window < 0) throw Error(errk::Mismatch, "window must be nonnegative");
    JoinStructure js;
    if (auto* z = std::get_if<ZShiftSystem>(&sys))
        js = join_zshift(*z, window, caps);
    else if (auto* fs = std::get_if<FiniteSampleSystem>(&sys))
        js = join_finite(*fs);
    else
        throw Error(errk::NonEvaluable, "no canonical join partition for kind " + kind_name(sys));

    int nq = int(js.labels.size());
    if (int(target.size()) != nq)
        throw Error(errk::Mismatch, "expected " + std::to_string(nq) + " cell masses, got " +
                                        std::to_string(target.size()));
    for (auto& t : target)
        if (t < 0) throw Error(errk::Mismatch, "cell masses must be nonnegative");

    // Invariance rows (mass entering each block equals mass inside it) plus
    // total mass one.
    std::vector<std::vector<Rational>> rows;
    for (int p = 0; p < js.block_count; ++p) {
        std::vector<Rational> row(size_t(nq) + 1, Rational(0));
        for (int q = 0; q < nq; ++q) {
            if (js.block_of[size_t(q)] == p) row[size_t(q)] += Rational(1);
            if (js.image_block_of[size_t(q)] == p) row[size_t(q)] -= Rational(1);
        }
        rows.push_back(row);
    }
    {
        std::vector<Rational> row(size_t(nq) + 1, Rational(1));
        rows.push_back(row);
    }
    auto eq_rows = rows;

    // Widest strictly positive floor the solution polytope admits.
    Rational tstar;
    {
        LpProblem lp(nq + 1);
        for (auto& row : rows) {
            std::vector<std::pair<int, Rational>> coeffs;
            for (int q = 0; q < nq; ++q)
                if (row[size_t(q)] != 0) coeffs.push_back({q, row[size_t(q)]});
            lp.add_constraint(coeffs, 0, row[size_t(nq)]);
        }
        for (int q = 0; q < nq; ++q)
            lp.add_constraint({{q, Rational(1)}, {nq, Rational(-1)}}, +1, Rational(0));
        lp.set_objective(nq, Rational(-1));
        auto res = lp.solve();
        if (!res.feasible)
            throw Error(errk::NoPositiveRationalSolution, "invariance equations are infeasible");
        tstar = -res.objective;
        if (tstar <= 0)
            throw Error(errk::NoPositiveRationalSolution, "no strictly positive invariant masses");
    }
    Rational floor_pos = tstar;
    for (auto& t : target)
        if (t > 0 && t < floor_pos) floor_pos = t;
    Rational s = floor_pos / 2;

    // Nearest exactly invariant point in L1, kept at least s away from zero.
    std::vector<Rational> xinf(size_t(nq), Rational(0));
    {
        LpProblem lp(2 * nq);
        for (auto& row : eq_rows) {
            std::vector<std::pair<int, Rational>> coeffs;
            for (int q = 0; q < nq; ++q)
                if (row[size_t(q)] != 0) coeffs.push_back({q, row[size_t(q)]});
            lp.add_constraint(coeffs, 0, row[size_t(nq)]);
        }
        for (int q = 0; q < nq; ++q) {
            lp.add_constraint({{q, Rational(1)}, {nq + q, Rational(-1)}}, -1, target[size_t(q)]);
            lp.add_constraint({{q, Rational(1)}, {nq + q, Rational(1)}}, +1, target[size_t(q)]);
            lp.add_constraint({{q, Rational(1)}}, +1, s);
            lp.set_objective(nq + q, Rational(1));
        }
        auto res = lp.solve();
        if (!res.feasible || res.unbounded)
            throw Error(errk::NoPositiveRationalSolution, "no invariant masses near the target");
        for (int q = 0; q < nq; ++q) xinf[size_t(q)] = res.x[size_t(q)];
    }

    // Free coordinates of the equality system parameterize the solutions;
    // round them on the 1/M grid, smallest denominator first.
    std::vector<int> pivot_col;
    if (!rref(eq_rows, nq, pivot_col))
        throw Error(errk::NoPositiveRationalSolution, "invariance equations are infeasible");
    std::vector<char> is_pivot(size_t(nq), 0);
    for (int c : pivot_col) is_pivot[size_t(c)] = 1;
    std::vector<int> free_cols;
    for (int q = 0; q < nq; ++q)
        if (!is_pivot[size_t(q)]) free_cols.push_back(q);

    std::vector<Rational> solution;
    for (long M = 1; M <= kDenominatorBound; ++M) {
        std::vector<Rational> x(size_t(nq), Rational(0));
        for (int f : free_cols) x[size_t(f)] = round_to_grid(xinf[size_t(f)], M);
        for (size_t r = 0; r < eq_rows.size(); ++r) {
            Rational v = eq_rows[r][size_t(nq)];
            for (int f : free_cols) v -= Rational(eq_rows[r][size_t(f)] * x[size_t(f)]);
            x[size_t(pivot_col[r])] = v;
        }
        bool pos = true;
        for (auto& v : x)
            if (v <= 0) {
                pos = false;
                break;
            }
        if (pos) {
            solution = std::move(x);
            break;
        }
    }
    if (solution.empty())
        throw Error(errk::NoPositiveRationalSolution,
                    "no positive solution with denominator <= " + std::to_string(kDenominatorBound));

    Int lcm(1);
    for (auto& v : solution) {
        Int d = denominator(v);
        lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    if (lcm > kModelSizeCap) throw Error(errk::SizeOverflow, "model needs " + lcm.str() + " points");
    long M2 = long(lcm);

    ModelFromMeasure out;
    out.cells = js.labels;
    out.solution = solution;
    out.denominator = M2;
    out.block_of = js.block_of;
    out.image_block_of = js.image_block_of;
    out.radius = 0;
    for (int q = 0; q < nq; ++q)
        out.radius = std::max(out.radius, Rational(rat_abs(solution[size_t(q)] - target[size_t(q)])));

    for (int q = 0; q < nq; ++q) {
        long cnt = long(Int(solution[size_t(q)] * M2));
        for (long i = 0; i < cnt; ++i) out.cell_of.push_back(q);
    }
    int total = int(out.cell_of.size());

    // Order-preserving wiring: elements of each block map onto the elements
    // of its translate, both listed in cell order.
    std::vector<int> gen(size_t(total), -1);
    for (int p = 0; p < js.block_count; ++p) {
        std::vector<int> src, dst;
        for (int e = 0; e < total; ++e) {
            if (js.block_of[size_t(out.cell_of[size_t(e)])] == p) src.push_back(e);
            if (js.image_block_of[size_t(out.cell_of[size_t(e)])] == p) dst.push_back(e);
        }
        if (src.size() != dst.size())
            throw Error(errk::Mismatch, "wiring blocks of unequal size");  // invariance guarantees not
        for (size_t i = 0; i < src.size(); ++i) gen[size_t(src[i])] = dst[i];
    }

    ZetaMap zeta;
    zeta.resize(size_t(total));
    if (std::holds_alternative<FiniteSampleSystem>(sys)) {
        for (int e = 0; e < total; ++e) zeta[size_t(e)] = js.reps[size_t(out.cell_of[size_t(e)])];
    } else {
        // Each wiring cycle reads off a periodic configuration: successive
        // cells overlap in all but one letter, so the first letters along the
        // cycle, reversed, tile a sequence the model tracks exactly.
        std::vector<char> seen(size_t(total), 0);
        for (int e0 = 0; e0 < total; ++e0) {
            if (seen[size_t(e0)]) continue;
            std::vector<int> cyc;
            for (int e = e0; !seen[size_t(e)]; e = gen[size_t(e)]) {
                seen[size_t(e)] = 1;
                cyc.push_back(e);
            }
            long L = long(cyc.size());
            std::vector<int> per(size_t(L), 0);
            for (long i = 0; i < L; ++i) {
                const auto& v = js.win[size_t(out.cell_of[size_t(cyc[size_t((L - i) % L)])])];
                if (!v.empty()) per[size_t(i)] = v[0];
            }
            for (long i = 0; i < L; ++i)
                zeta[size_t(cyc[size_t(i)])] = EvSeqPoint{per, {}, per, i};
        }
    }
    auto action = validate_action_description(total, {gen});
    out.witness = check_witness(sys, action, zeta, {0}, epsilon, caps);
    return out;
}

AffineLiftResult affine_lift(const Witness& base, int m, const std::vector<TestFunction>& omega,
                             const DensityGridCaps& caps) {
    if (base.action.rank() != 1)
        throw Error(errk::NonEvaluable, "lift needs a single-generator witness");
    if (m < 1) throw Error(errk::Mismatch, "quantization must be >= 1");
    if (omega.empty()) throw Error(errk::Mismatch, "empty test family");
    int n = base.action.size;
    if (n < 1) throw Error(errk::Mismatch, "empty base model");
    Int count = binom_int(n + m - 1, m);
    if (count > caps.max_patterns)
        throw Error(errk::SizeOverflow, "lift needs " + count.str() + " quantized measures");

    // Compositions of m over n slots, lexicographically.
    std::vector<std::vector<int>> combos;
    std::vector<int> cur(size_t(n), 0);
    auto emit = [&](auto&& self, int i, int left) -> void {
        if (i == n - 1) {
            cur[size_t(i)] = left;
            combos.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[size_t(i)] = v;
            self(self, i + 1, left - v);
        }
    };
    emit(emit, 0, m);
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < combos.size(); ++i) index[combos[i]] = int(i);
    int N = int(combos.size());

    size_t nf = omega.size();
    std::vector<std::vector<Rational>> F(size_t(n), std::vector<Rational>(nf, Rational(0)));
    std::vector<std::vector<Rational>> FT(size_t(n), std::vector<Rational>(nf, Rational(0)));
    for (int y = 0; y < n; ++y) {
        Point img = apply_generator(base.system, 0, +1, base.zeta[size_t(y)]);
        for (size_t f = 0; f < nf; ++f) {
            F[size_t(y)][f] = eval_function(base.system, omega[f], base.zeta[size_t(y)]);
            FT[size_t(y)][f] = eval_function(base.system, omega[f], img);
        }
    }
    const auto& sigma = base.action.generators[0];
    Rational base_defect(0);
    for (int y = 0; y < n; ++y)
        for (size_t f = 0; f < nf; ++f)
            base_defect = std::max(
                base_defect, Rational(rat_abs(FT[size_t(y)][f] - F[size_t(sigma[size_t(y)])][f])));

    std::vector<int> lifted(size_t(N), 0);
    for (int i = 0; i < N; ++i) {
        std::vector<int> push(size_t(n), 0);
        for (int y = 0; y < n; ++y) push[size_t(sigma[size_t(y)])] += combos[size_t(i)][size_t(y)];
        lifted[size_t(i)] = index.at(push);
    }

    FiniteSampleSystem lift_sys;
    lift_sys.n = N;
    lift_sys.dist.assign(size_t(N), std::vector<Rational>(size_t(N), Rational(0)));
    lift_sys.image_dist.assign(size_t(N), std::vector<Rational>(size_t(N), Rational(0)));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Rational d(0), di(0);
            for (size_t f = 0; f < nf; ++f) {
                Rational a(0), ai(0);
                for (int y = 0; y < n; ++y) {
                    int ci = combos[size_t(i)][size_t(y)], cj = combos[size_t(j)][size_t(y)];
                    if (ci != cj) a += Rational(Rational(ci - cj) * F[size_t(y)][f]);
                    if (ci != 0) ai += Rational(Rational(ci) * FT[size_t(y)][f]);
                    if (cj != 0) ai -= Rational(Rational(cj) * F[size_t(y)][f]);
                }
                d = std::max(d, Rational(rat_abs(a)));
                di = std::max(di, Rational(rat_abs(ai)));
            }
            lift_sys.dist[size_t(i)][size_t(j)] = d / m;
            lift_sys.image_dist[size_t(i)][size_t(j)] = di / m;
            if (i != j && d == 0)
                throw Error(errk::Mismatch, "test family does not separate the lifted measures");
        }

    ZetaMap zeta;
    for (int i = 0; i < N; ++i) zeta.push_back(SamplePoint{i});
    auto action = validate_action_description(N, {lifted});
    AffineLiftResult out;
    out.witness = check_witness(lift_sys, action, zeta, {0}, base.epsilon, caps);
    out.base_defect = base_defect;
    out.lift_defect = out.witness.equivariance_defect;
    out.count = N;
    if (out.lift_defect > base_defect)
        throw Error(errk::Mismatch, "lifted defect exceeds the base defect");
    return out;
}

FixedPointModel fixed_point_model(const PolytopeSystem& K,
                                  const std::vector<std::vector<Rational>>& orbit_starts,
                                  const std::vector<Rational>& fixed, int m, const Rational& epsilon,
                                  const DensityGridCaps& caps) {
    SystemDescriptor sys = K;
    validate_system(sys);
    if (m < 1) throw Error(errk::Mismatch, "interpolation depth must be >= 1");
    if (orbit_starts.empty()) throw Error(errk::Mismatch, "need at least one orbit start");
    if (int(fixed.size()) != K.dim()) throw Error(errk::Mismatch, "fixed point has wrong dimension");
    if (K.apply(fixed) != fixed) throw Error(errk::NotFixed, "map moves the proposed fixed point");
    if (!K.contains(fixed)) throw Error(errk::InvalidPoint, "fixed point outside the polytope");

    long per = 2L * m + 1;
    ZetaMap zeta;
    std::vector<int> succ(orbit_starts.size() * size_t(per));
    for (size_t vi = 0; vi < orbit_starts.size(); ++vi) {
        if (int(orbit_starts[vi].size()) != K.dim())
            throw Error(errk::Mismatch, "orbit start has wrong dimension");
        std::vector<std::vector<Rational>> orbit{size_t(per)};
        orbit[size_t(m)] = orbit_starts[vi];
        for (int k = 1; k <= m; ++k) {
            orbit[size_t(m + k)] = K.apply(orbit[size_t(m + k - 1)]);
            orbit[size_t(m - k)] = K.apply_inverse(orbit[size_t(m - k + 1)]);
        }
        for (int k = -m; k <= m; ++k) {
            Rational t = Rational(std::abs(k), m);
            std::vector<Rational> coords(size_t(K.dim()));
            for (int j = 0; j < K.dim(); ++j)
                coords[size_t(j)] = Rational(Rational(1 - t) * orbit[size_t(m + k)][size_t(j)]) +
                                    Rational(t * fixed[size_t(j)]);
            if (!K.contains(coords))
                throw Error(errk::Mismatch, "interpolated orbit leaves the polytope");
            zeta.push_back(PolytopePoint{coords});
            long idx = long(vi) * per + (k + m);
            succ[size_t(idx)] = int(k == m ? long(vi) * per : idx + 1);
        }
    }
    auto action = validate_action_description(int(zeta.size()), {succ});

    Rational maxf(0);
    for (auto& v : K.vertices)
        for (auto& c : v) maxf = std::max(maxf, Rational(rat_abs(c)));
    FixedPointModel out;
    out.witness = check_witness(sys, action, zeta, {0}, epsilon, caps);
    out.bound = Rational(2) * maxf / m;
    if (out.witness.equivariance_defect > out.bound)
        throw Error(errk::Mismatch, "interpolation defect exceeded its bound");
    return out;
}

BarycentreResult barycentre(const PolytopeSystem& K, const std::vector<std::vector<Rational>>& pts,
                            const std::vector<Rational>& weights) {
    SystemDescriptor sys = K;
    validate_system(sys);
    if (pts.empty() || pts.size() != weights.size())
        throw Error(errk::Mismatch, "need matching support points and weights");
    Rational total(0);
    for (auto& w : weights) {
        if (w < 0) throw Error(errk::Mismatch, "weights must be nonnegative");
        total += w;
    }
    if (total != 1) throw Error(errk::Mismatch, "weights must sum to one");

    BarycentreResult out;
    out.point.assign(size_t(K.dim()), Rational(0));
    std::map<std::vector<Rational>, Rational> meas, push;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (int(pts[i].size()) != K.dim()) throw Error(errk::Mismatch, "support point has wrong dimension");
        if (!K.contains(pts[i])) throw Error(errk::InvalidPoint, "support point outside the polytope");
        for (int j = 0; j < K.dim(); ++j)
            out.point[size_t(j)] += Rational(weights[i] * pts[i][size_t(j)]);
        meas[pts[i]] += weights[i];
        push[K.apply(pts[i])] += weights[i];
    }
    for (auto it = meas.begin(); it != meas.end();)
        it = it->second == 0 ? meas.erase(it) : std::next(it);
    for (auto it = push.begin(); it != push.end();)
        it = it->second == 0 ? push.erase(it) : std::next(it);
    out.invariant = meas == push;
    if (out.invariant && K.apply(out.point) != out.point)
        throw Error(errk::Mismatch, "invariant measure with a moving barycentre");
    return out;
}

}  // namespace resfin
