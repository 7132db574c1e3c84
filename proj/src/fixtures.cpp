#include "resfin/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "resfin/error.hpp"

namespace resfin {

CompactifiedZSystem compactified_translation() {
    CompactifiedZSystem c;
    c.copies = 1;
    c.classes = {{{0, +1}}, {{0, -1}}};
    return c;
}

FiniteSampleSystem rotation_sample(int n) {
    if (n < 1) throw Error(errk::Mismatch, "rotation sample needs n >= 1");
    FiniteSampleSystem s;
    s.n = n;
    auto frac = [&](int i) { return Rational(i, n); };
    s.dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.dist[size_t(i)][size_t(j)] = circle_dist(frac(i), frac(j));
    s.map_index.resize(size_t(n));
    for (int i = 0; i < n; ++i) s.map_index[size_t(i)] = (i + 1) % n;
    s.image_dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.image_dist[size_t(i)][size_t(j)] = s.dist[size_t((i + 1) % n)][size_t(j)];
    return s;
}

FiniteSampleSystem compactified_sample(int range) {
    CompactifiedZSystem c = compactified_translation();
    SystemDescriptor sys = c;
    std::vector<Point> pts;
    for (long p = -range; p <= range; ++p) pts.push_back(CompactZPoint{false, 0, 0, p});
    pts.push_back(CompactZPoint{true, c.class_of(0, +1), 0, 0});
    pts.push_back(CompactZPoint{true, c.class_of(0, -1), 0, 0});
    int n = int(pts.size());

    auto image = [&](const Point& p) {
        auto q = std::get<CompactZPoint>(p);
        if (!q.at_class) q.pos += 1;  // endpoints are fixed
        return Point(q);
    };
    FiniteSampleSystem s;
    s.n = n;
    s.dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    s.image_dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s.dist[size_t(i)][size_t(j)] = distance(sys, pts[size_t(i)], pts[size_t(j)]);
            s.image_dist[size_t(i)][size_t(j)] = distance(sys, image(pts[size_t(i)]), pts[size_t(j)]);
        }
    return s;
}

FiniteSampleSystem shift_sample() {
    ZShiftSystem z;
    z.alphabet = 2;
    SystemDescriptor sys = z;
    auto periodic = [](std::vector<int> per) {
        EvSeqPoint p;
        p.left = per;
        p.right = per;
        return Point(p);
    };
    std::vector<Point> pts = {periodic({0}), periodic({1}), periodic({0, 1}), periodic({1, 0})};
    std::vector<int> map = {0, 1, 3, 2};
    int n = int(pts.size());
    FiniteSampleSystem s;
    s.n = n;
    s.map_index = map;
    s.dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    s.image_dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s.dist[size_t(i)][size_t(j)] = distance(sys, pts[size_t(i)], pts[size_t(j)]);
            s.image_dist[size_t(i)][size_t(j)] = s.dist[size_t(map[size_t(i)])][size_t(j)];
        }
    return s;
}

ZShiftSystem full_shift(int alphabet) {
    ZShiftSystem z;
    z.alphabet = alphabet;
    return z;
}

ZShiftSystem golden_mean_shift() {
    ZShiftSystem z;
    z.alphabet = 2;
    z.forbidden = {{1, 1}};
    return z;
}

FiniteQuotient cyclic_quotient(int n) {
    if (n < 1) throw Error(errk::Mismatch, "cyclic quotient needs n >= 1");
    FiniteQuotient q;
    q.order = n;
    std::vector<int> rot;
    rot.resize(size_t(n));
    for (int i = 0; i < n; ++i) rot[size_t(i)] = (i + 1) % n;
    q.gen_images = {rot};
    return q;
}

std::vector<Word> ball_words(int rank, int radius) {
    std::vector<Word> out = {Word{}};
    size_t lo = 0;
    for (int len = 1; len <= radius; ++len) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; ++i)
            for (int g = 1; g <= rank; ++g)
                for (int sgn : {+1, -1}) {
                    int l = sgn * g;
                    if (!out[i].letters.empty() && out[i].letters.back() == -l) continue;
                    Word w = out[i];
                    w.letters.push_back(l);
                    out.push_back(std::move(w));
                }
        lo = hi;
    }
    std::sort(out.begin(), out.end());
    return out;
}

GroupRingElement doubling_ring() { return GroupRingElement{{{0, Int(2)}}}; }

GroupRingElement laplace_ring() {
    return GroupRingElement{{{-1, Int(-1)}, {0, Int(3)}, {1, Int(-1)}}};
}

AlgebraicZSystem rotation_system() {
    // (t - 1)^2: kills second differences, so x_j = j * alpha mod 1 solves it.
    return AlgebraicZSystem{GroupRingElement{{{0, Int(1)}, {1, Int(-2)}, {2, Int(1)}}}};
}

TorusPeriodicPoint rotation_orbit_point(int num, int den) {
    TorusPeriodicPoint p;
    for (int j = 0; j < den; ++j) p.values.push_back(mod1(Rational(long(j) * num, den)));
    return p;
}

OrbitRepresentation rotation_orbit_window(long lo, long length, int num, int den) {
    OrbitRepresentation o;
    o.lo = lo;
    o.values.assign(1, std::vector<Cplx>(size_t(length)));
    for (long j = 0; j < length; ++j) {
        long idx = lo + j;
        long r = ((idx * num) % den + den) % den;
        double x = 2.0 * M_PI * double(r) / double(den);
        o.values[0][size_t(j)] = Cplx(std::cos(x), std::sin(x));
    }
    return o;
}

// ---------------------------------------------------------------------------
// Seeded builders.
// ---------------------------------------------------------------------------

FiniteSampleSystem random_metric_sample(std::mt19937_64& rng, int max_n) {
    std::uniform_int_distribution<int> n_d(2, max_n);
    std::uniform_int_distribution<int> coord_d(0, 256);
    int n = n_d(rng);
    std::vector<std::pair<Rational, Rational>> pts;
    for (int i = 0; i < n; ++i)
        pts.emplace_back(Rational(coord_d(rng), 64), Rational(coord_d(rng), 64));
    FiniteSampleSystem s;
    s.n = n;
    s.dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.dist[size_t(i)][size_t(j)] =
                std::max(Rational(rat_abs(pts[size_t(i)].first - pts[size_t(j)].first)),
                         Rational(rat_abs(pts[size_t(i)].second - pts[size_t(j)].second)));
    std::uniform_int_distribution<int> target_d(0, n - 1);
    s.map_index.resize(size_t(n));
    for (int i = 0; i < n; ++i) s.map_index[size_t(i)] = target_d(rng);
    s.image_dist.assign(size_t(n), std::vector<Rational>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.image_dist[size_t(i)][size_t(j)] = s.dist[size_t(s.map_index[size_t(i)])][size_t(j)];
    return s;
}

RandomGraph random_graph(std::mt19937_64& rng, int max_nodes, int edge_percent) {
    std::uniform_int_distribution<int> n_d(1, max_nodes);
    std::uniform_int_distribution<int> pct(0, 99);
    RandomGraph g;
    g.nodes = n_d(rng);
    g.out.resize(size_t(g.nodes));
    for (int x = 0; x < g.nodes; ++x)
        for (int y = 0; y < g.nodes; ++y)
            if (pct(rng) < edge_percent) g.out[size_t(x)].push_back(y);
    return g;
}

FiniteAction random_f2_action(std::mt19937_64& rng, int size) {
    std::vector<std::vector<int>> tables;
    for (int g = 0; g < 2; ++g) {
        std::vector<int> perm(size_t(size), 0);
        for (int i = 0; i < size; ++i) perm[size_t(i)] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        tables.push_back(std::move(perm));
    }
    return validate_action_description(size, tables);
}

MatrixTuple encode_action(const FiniteAction& a) {
    MatrixTuple t;
    t.dimension = a.size;
    for (int j = 0; j < a.size; ++j) {
        Mat m = Mat::Zero(a.size, a.size);
        m(j, j) = 1;
        t.projections.push_back(std::move(m));
    }
    for (const auto& perm : a.generators) {
        Mat u = Mat::Zero(a.size, a.size);
        for (int j = 0; j < a.size; ++j) u(perm[size_t(j)], j) = 1;
        t.unitaries.push_back(std::move(u));
    }
    return t;
}

Mat hermitian_noise(std::mt19937_64& rng, int d, double norm) {
    std::normal_distribution<double> g;
    Mat n(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) n(i, j) = Cplx(g(rng), g(rng));
    n = (n + n.adjoint()) / 2.0;
    double on = operator_norm(n);
    if (on > 0) n *= norm / on;
    return n;
}

Mat random_unitary(std::mt19937_64& rng, int d) {
    Mat base = hermitian_noise(rng, d, 1.0) + Cplx(0, 1) * hermitian_noise(rng, d, 1.0) +
               Mat::Identity(d, d) * 3.0;
    Tolerances loose;
    loose.unitary_residual = 1e-8;
    return polar_unitary(base, loose);
}

void perturb_tuple(std::mt19937_64& rng, MatrixTuple& t, double eps) {
    int d = t.dimension;
    Mat drift = Mat::Zero(d, d);
    for (auto& p : t.projections) {
        Mat h = hermitian_noise(rng, d, eps / 2);
        p += h;
        drift += h;
    }
    // Recentre so the projection family still sums to one; each member moves
    // by at most eps/2 + eps/2 = eps.
    for (auto& p : t.projections) p -= drift / double(t.projections.size());
    for (auto& u : t.unitaries) u += hermitian_noise(rng, d, eps);
}

SimplexFixture random_simplex_map(std::mt19937_64& rng, int dim) {
    int k = dim + 1;  // vertex count of the dim-simplex
    SimplexFixture fx;
    fx.K.vertices.assign(size_t(k), std::vector<Rational>(size_t(k), Rational(0)));
    for (int i = 0; i < k; ++i) fx.K.vertices[size_t(i)][size_t(i)] = 1;

    // Interior fixed point with every barycentric weight >= 1/(8k).
    std::uniform_int_distribution<int> wt(1, 8);
    std::vector<int> a(size_t(k), 0);
    int total = 0;
    for (int i = 0; i < k; ++i) total += (a[size_t(i)] = wt(rng));
    fx.fixed.resize(size_t(k));
    for (int i = 0; i < k; ++i) fx.fixed[size_t(i)] = Rational(a[size_t(i)], total);

    // T(x) = w + s P (x - w): P permutes coordinates, |s| <= 1/(8k) keeps the
    // image inside the hull since coordinates of x - w lie in [-1, 1].
    std::vector<int> perm(size_t(k), 0);
    for (int i = 0; i < k; ++i) perm[size_t(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<int> sd(1, 4);
    Rational s(std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1, 8 * k * sd(rng));

    fx.K.A.assign(size_t(k), std::vector<Rational>(size_t(k), Rational(0)));
    for (int i = 0; i < k; ++i) fx.K.A[size_t(i)][size_t(perm[size_t(i)])] = s;
    fx.K.b.resize(size_t(k));
    for (int i = 0; i < k; ++i) {
        Rational acc = fx.fixed[size_t(i)];
        for (int j = 0; j < k; ++j) acc -= fx.K.A[size_t(i)][size_t(j)] * fx.fixed[size_t(j)];
        fx.K.b[size_t(i)] = acc;
    }
    validate_system(SystemDescriptor(fx.K));
    return fx;
}

}  // namespace resfin
