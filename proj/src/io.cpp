#include "resfin/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "resfin/error.hpp"
#include "resfin/hash.hpp"

namespace resfin {
namespace {

// Field accessors that fail with the offending field name instead of a bare
// type error from the JSON layer.
const Json& need(const Json& j, const std::string& field) {
    if (!j.is_object() || !j.contains(field))
        throw Error(errk::ParseError, "missing field '" + field + "'");
    return j.at(field);
}

long need_int(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (!v.is_number_integer()) throw Error(errk::ParseError, "field '" + field + "' not an integer");
    return v.get<long>();
}

std::string need_str(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (!v.is_string()) throw Error(errk::ParseError, "field '" + field + "' not a string");
    return v.get<std::string>();
}

const Json& need_array(const Json& j, const std::string& field) {
    const Json& v = need(j, field);
    if (!v.is_array()) throw Error(errk::ParseError, "field '" + field + "' not an array");
    return v;
}

std::vector<int> int_vector(const Json& arr, const std::string& field) {
    if (!arr.is_array()) throw Error(errk::ParseError, "field '" + field + "' not an array");
    std::vector<int> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer())
            throw Error(errk::ParseError, "field '" + field + "' holds a non-integer");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<Rational> rational_vector(const Json& arr, const std::string& field) {
    if (!arr.is_array()) throw Error(errk::ParseError, "field '" + field + "' not an array");
    std::vector<Rational> out;
    for (size_t i = 0; i < arr.size(); ++i) out.push_back(rational_from(arr[i], field));
    return out;
}

Json rational_matrix_json(const std::vector<std::vector<Rational>>& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(rat_str(x));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::vector<Rational>> rational_matrix_from(const Json& arr, const std::string& field) {
    if (!arr.is_array()) throw Error(errk::ParseError, "field '" + field + "' not an array");
    std::vector<std::vector<Rational>> out;
    for (const auto& row : arr) out.push_back(rational_vector(row, field));
    return out;
}

std::string dir_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

std::string base_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

constexpr char kMatrixMagic[8] = {'R', 'F', 'M', 'X', '0', '0', '0', '1'};

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, size_t& off) {
    if (off + 8 > in.size()) throw Error(errk::ParseError, "matrix sidecar truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in[off + i])) << (8 * i);
    off += 8;
    return v;
}

void put_matrix(std::string& out, const Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double re = m(r, c).real(), im = m(r, c).imag();
            char buf[16];
            std::memcpy(buf, &re, 8);
            std::memcpy(buf + 8, &im, 8);
            out.append(buf, 16);
        }
}

Mat get_matrix(const std::string& in, size_t& off, long d) {
    if (off + size_t(d) * size_t(d) * 16 > in.size())
        throw Error(errk::ParseError, "matrix sidecar truncated");
    Mat m(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) {
            double re, im;
            std::memcpy(&re, in.data() + off, 8);
            std::memcpy(&im, in.data() + off + 8, 8);
            off += 16;
            m(r, c) = Cplx(re, im);
        }
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifests and raw files.
// ---------------------------------------------------------------------------

std::uint64_t content_digest(const std::string& bytes) { return fnv1a64(bytes); }

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(base_of(path), content_digest(read_text_file(path)));
}

Json manifest_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    Json ins = Json::array();
    for (const auto& [name, digest] : m.inputs) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        Json e;
        e["name"] = name;
        e["digest"] = buf;
        ins.push_back(std::move(e));
    }
    j["inputs"] = std::move(ins);
    j["seed"] = m.seed;
    Json tols = Json::object();
    for (const auto& [k, v] : m.tolerance_overrides) tols[k] = v;
    j["tolerances"] = std::move(tols);
    j["version"] = m.version;
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errk::ParseError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errk::ParseError, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(errk::ParseError, "short write to '" + path + "'");
}

Json make_document(const std::string& format) {
    Json j;
    j["format"] = format;
    j["version"] = kFormatVersion;
    return j;
}

Json load_document(const std::string& path, const std::string& format) {
    std::string text = read_text_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errk::ParseError, std::string(e.what()));
    }
    std::string found = need_str(j, "format");
    if (found != format)
        throw Error(errk::ParseError, "expected format '" + format + "', found '" + found + "'");
    long version = need_int(j, "version");
    if (version != kFormatVersion)
        throw Error(errk::UnsupportedVersion,
                    "version " + std::to_string(version) + " of '" + format + "'");
    return j;
}

// ---------------------------------------------------------------------------
// Scalars, words, systems, points.
// ---------------------------------------------------------------------------

Json rational_json(const Rational& r) { return Json(rat_str(r)); }

Rational rational_from(const Json& j, const std::string& field) {
    if (!j.is_string()) {
        if (j.is_number_integer()) return Rational(j.get<long>());
        throw Error(errk::ParseError, "field '" + field + "' not a rational string");
    }
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
        throw Error(errk::ParseError,
                    "field '" + field + "' holds a bad rational '" + j.get<std::string>() + "'");
    }
}

Json word_json(const Word& w) {
    Json j = Json::array();
    for (int l : w.letters) j.push_back(l);
    return j;
}

Word word_from(const Json& j, const std::string& field) {
    Word w{int_vector(j, field)};
    for (size_t i = 0; i + 1 < w.letters.size(); ++i)
        if (w.letters[i] == -w.letters[i + 1])
            throw Error(errk::ParseError, "field '" + field + "' holds a non-reduced word");
    for (int l : w.letters)
        if (l == 0) throw Error(errk::ParseError, "field '" + field + "' holds a zero letter");
    return w;
}

Json system_json(const SystemDescriptor& sys) {
    Json j = make_document("resfin/system");
    j["kind"] = kind_name(sys);
    if (const auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        j["n"] = s->n;
        j["dist"] = rational_matrix_json(s->dist);
        if (!s->map_index.empty()) j["map"] = s->map_index;
        if (!s->image_dist.empty()) j["image_dist"] = rational_matrix_json(s->image_dist);
    } else if (const auto* z = std::get_if<ZShiftSystem>(&sys)) {
        j["alphabet"] = z->alphabet;
        j["forbidden"] = z->forbidden;
    } else if (const auto* f = std::get_if<FrShiftSystem>(&sys)) {
        j["rank"] = f->rank;
        j["alphabet"] = f->alphabet;
    } else if (const auto* b = std::get_if<FrBoundarySystem>(&sys)) {
        j["rank"] = b->rank;
    } else if (const auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        j["copies"] = c->copies;
        Json cls = Json::array();
        for (const auto& cl : c->classes) {
            Json one = Json::array();
            for (auto [copy, sign] : cl) one.push_back(Json::array({copy, sign}));
            cls.push_back(std::move(one));
        }
        j["classes"] = std::move(cls);
    } else if (const auto* p = std::get_if<PolytopeSystem>(&sys)) {
        j["vertices"] = rational_matrix_json(p->vertices);
        j["A"] = rational_matrix_json(p->A);
        Json b = Json::array();
        for (const auto& x : p->b) b.push_back(rat_str(x));
        j["b"] = std::move(b);
    } else if (const auto* a = std::get_if<AlgebraicZSystem>(&sys)) {
        Json terms = Json::array();
        for (const auto& [k, c] : a->f.terms) terms.push_back(Json::array({k, c.str()}));
        j["terms"] = std::move(terms);
    }
    return j;
}

SystemDescriptor system_from(const Json& j) {
    std::string kind = need_str(j, "kind");
    SystemDescriptor sys;
    if (kind == "finite-sample") {
        FiniteSampleSystem s;
        s.n = int(need_int(j, "n"));
        s.dist = rational_matrix_from(need_array(j, "dist"), "dist");
        if (j.contains("map")) s.map_index = int_vector(j.at("map"), "map");
        if (j.contains("image_dist"))
            s.image_dist = rational_matrix_from(j.at("image_dist"), "image_dist");
        sys = std::move(s);
    } else if (kind == "z-shift") {
        ZShiftSystem z;
        z.alphabet = int(need_int(j, "alphabet"));
        for (const auto& w : need_array(j, "forbidden")) z.forbidden.push_back(int_vector(w, "forbidden"));
        sys = std::move(z);
    } else if (kind == "fr-shift") {
        FrShiftSystem f;
        f.rank = int(need_int(j, "rank"));
        f.alphabet = int(need_int(j, "alphabet"));
        sys = f;
    } else if (kind == "fr-boundary") {
        FrBoundarySystem b;
        b.rank = int(need_int(j, "rank"));
        sys = b;
    } else if (kind == "compactified-z") {
        CompactifiedZSystem c;
        c.copies = int(need_int(j, "copies"));
        for (const auto& cl : need_array(j, "classes")) {
            std::vector<std::pair<int, int>> one;
            if (!cl.is_array()) throw Error(errk::ParseError, "field 'classes' not an array");
            for (const auto& pr : cl) {
                auto v = int_vector(pr, "classes");
                if (v.size() != 2) throw Error(errk::ParseError, "field 'classes' entry not a pair");
                one.emplace_back(v[0], v[1]);
            }
            c.classes.push_back(std::move(one));
        }
        sys = std::move(c);
    } else if (kind == "polytope") {
        PolytopeSystem p;
        p.vertices = rational_matrix_from(need_array(j, "vertices"), "vertices");
        p.A = rational_matrix_from(need_array(j, "A"), "A");
        p.b = rational_vector(need_array(j, "b"), "b");
        sys = std::move(p);
    } else if (kind == "algebraic-z") {
        AlgebraicZSystem a;
        a.f = group_ring_from(j);
        sys = std::move(a);
    } else {
        throw Error(errk::ParseError, "unknown system kind '" + kind + "'");
    }
    try {
        validate_system(sys);
    } catch (const Error& e) {
        throw Error(errk::ParseError, e.detail());
    }
    return sys;
}

Json group_ring_json(const GroupRingElement& f) {
    Json j;
    Json terms = Json::array();
    for (const auto& [k, c] : f.terms) terms.push_back(Json::array({k, c.str()}));
    j["terms"] = std::move(terms);
    return j;
}

GroupRingElement group_ring_from(const Json& j) {
    GroupRingElement f;
    for (const auto& t : need_array(j, "terms")) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_string())
            throw Error(errk::ParseError, "field 'terms' entry not [exponent, coefficient]");
        try {
            f.terms.emplace_back(t[0].get<long>(), Int(t[1].get<std::string>()));
        } catch (const std::exception&) {
            throw Error(errk::ParseError, "field 'terms' holds a bad integer coefficient");
        }
    }
    return f;
}

Json point_json(const Point& p) {
    Json j;
    if (const auto* s = std::get_if<SamplePoint>(&p)) {
        j["kind"] = "sample";
        j["index"] = s->index;
    } else if (const auto* e = std::get_if<EvSeqPoint>(&p)) {
        j["kind"] = "evseq";
        j["left"] = e->left;
        j["core"] = e->core;
        j["right"] = e->right;
        j["start"] = e->start;
    } else if (const auto* q = std::get_if<QuotientPoint>(&p)) {
        j["kind"] = "quotient";
        j["action"] = q->action;
        j["labels"] = q->labels;
        j["base"] = q->base;
    } else if (const auto* b = std::get_if<BoundaryPoint>(&p)) {
        j["kind"] = "boundary";
        j["prefix"] = word_json(b->prefix);
        j["period"] = word_json(b->period);
    } else if (const auto* c = std::get_if<CompactZPoint>(&p)) {
        j["kind"] = "compact-z";
        j["at_class"] = c->at_class;
        j["class"] = c->cls;
        j["copy"] = c->copy;
        j["pos"] = c->pos;
    } else if (const auto* v = std::get_if<PolytopePoint>(&p)) {
        j["kind"] = "polytope";
        Json coords = Json::array();
        for (const auto& x : v->coords) coords.push_back(rat_str(x));
        j["coords"] = std::move(coords);
    } else if (const auto* t = std::get_if<TorusPeriodicPoint>(&p)) {
        j["kind"] = "torus-periodic";
        Json vals = Json::array();
        for (const auto& x : t->values) vals.push_back(rat_str(x));
        j["values"] = std::move(vals);
    }
    return j;
}

Point point_from(const Json& j) {
    std::string kind = need_str(j, "kind");
    if (kind == "sample") return SamplePoint{int(need_int(j, "index"))};
    if (kind == "evseq") {
        EvSeqPoint e;
        e.left = int_vector(need_array(j, "left"), "left");
        e.core = int_vector(need_array(j, "core"), "core");
        e.right = int_vector(need_array(j, "right"), "right");
        e.start = need_int(j, "start");
        return e;
    }
    if (kind == "quotient") {
        QuotientPoint q;
        for (const auto& row : need_array(j, "action")) q.action.push_back(int_vector(row, "action"));
        q.labels = int_vector(need_array(j, "labels"), "labels");
        q.base = int(need_int(j, "base"));
        return q;
    }
    if (kind == "boundary") {
        BoundaryPoint b;
        b.prefix = word_from(need_array(j, "prefix"), "prefix");
        b.period = word_from(need_array(j, "period"), "period");
        return b;
    }
    if (kind == "compact-z") {
        CompactZPoint c;
        c.at_class = need(j, "at_class").get<bool>();
        c.cls = int(need_int(j, "class"));
        c.copy = int(need_int(j, "copy"));
        c.pos = need_int(j, "pos");
        return c;
    }
    if (kind == "polytope") {
        PolytopePoint v;
        v.coords = rational_vector(need_array(j, "coords"), "coords");
        return v;
    }
    if (kind == "torus-periodic") {
        TorusPeriodicPoint t;
        t.values = rational_vector(need_array(j, "values"), "values");
        return t;
    }
    throw Error(errk::ParseError, "unknown point kind '" + kind + "'");
}

Json action_json(const FiniteAction& a) {
    Json j;
    j["size"] = a.size;
    j["generators"] = a.generators;
    return j;
}

FiniteAction action_from(const Json& j) {
    int size = int(need_int(j, "size"));
    std::vector<std::vector<int>> tables;
    for (const auto& row : need_array(j, "generators")) tables.push_back(int_vector(row, "generators"));
    try {
        return validate_action_description(size, tables);
    } catch (const Error& e) {
        throw Error(errk::ParseError, e.detail());
    }
}

// ---------------------------------------------------------------------------
// Witnesses and clopen sets.
// ---------------------------------------------------------------------------

Json witness_json(const Witness& w) {
    Json j = make_document("resfin/witness");
    j["system"] = system_json(w.system);
    j["action"] = action_json(w.action);
    Json zeta = Json::array();
    for (const auto& p : w.zeta) zeta.push_back(point_json(p));
    j["zeta"] = std::move(zeta);
    j["epsilon"] = rat_str(w.epsilon);
    j["scope"] = w.generator_scope;
    j["density_defect"] = rat_str(w.density_defect);
    j["equivariance_defect"] = rat_str(w.equivariance_defect);
    j["pass"] = w.pass();
    return j;
}

Witness witness_from(const Json& j) {
    Witness w;
    w.system = system_from(need(j, "system"));
    w.action = action_from(need(j, "action"));
    for (const auto& p : need_array(j, "zeta")) w.zeta.push_back(point_from(p));
    w.epsilon = rational_from(need(j, "epsilon"), "epsilon");
    w.generator_scope = int_vector(need_array(j, "scope"), "scope");
    if (j.contains("density_defect"))
        w.density_defect = rational_from(j.at("density_defect"), "density_defect");
    if (j.contains("equivariance_defect"))
        w.equivariance_defect = rational_from(j.at("equivariance_defect"), "equivariance_defect");
    return w;
}

Json clopen_json(const ClopenSet& c) {
    Json j = make_document("resfin/clopen");
    j["window"] = c.window;
    j["atoms"] = c.atoms;
    return j;
}

ClopenSet clopen_from(const Json& j) {
    ClopenSet c;
    c.window = int(need_int(j, "window"));
    c.atoms = int_vector(need_array(j, "atoms"), "atoms");
    for (size_t i = 0; i + 1 < c.atoms.size(); ++i)
        if (c.atoms[i] >= c.atoms[i + 1])
            throw Error(errk::ParseError, "field 'atoms' not strictly increasing");
    return c;
}

// ---------------------------------------------------------------------------
// Contexts and certificates.
// ---------------------------------------------------------------------------

Json context_json(const ContextDescription& c) {
    Json j;
    if (c.system) j["system"] = system_json(*c.system);
    if (c.action) j["action"] = action_json(*c.action);
    j["window"] = c.window;
    Json tr = Json::array();
    for (const auto& w : c.translators) tr.push_back(word_json(w));
    j["translators"] = std::move(tr);
    return j;
}

ContextDescription context_from(const Json& j) {
    ContextDescription c;
    if (j.contains("system")) c.system = system_from(j.at("system"));
    if (j.contains("action")) c.action = action_from(j.at("action"));
    if (!c.system && !c.action)
        throw Error(errk::ParseError, "context carries neither a system nor an action");
    c.window = int(need_int(j, "window"));
    for (const auto& w : need_array(j, "translators")) c.translators.push_back(word_from(w, "translators"));
    return c;
}

ActionContext rebuild_context(const ContextDescription& c, const DensityGridCaps& caps) {
    if (c.action) return make_context_finite(*c.action, c.translators);
    return make_context(*c.system, c.window, c.translators, caps);
}

Json paradox_certificate_json(const ParadoxCertificate& cert) {
    Json j;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cert.context_hash));
    j["context_hash"] = buf;
    j["target"] = cert.target;
    Json pieces = Json::array();
    for (auto [atom, tr] : cert.pieces) pieces.push_back(Json::array({atom, tr}));
    j["pieces"] = std::move(pieces);
    j["k"] = cert.k;
    j["l"] = cert.l;
    return j;
}

ParadoxCertificate paradox_certificate_from(const Json& j) {
    ParadoxCertificate cert;
    cert.context_hash = std::stoull(need_str(j, "context_hash"), nullptr, 16);
    cert.target = int_vector(need_array(j, "target"), "target");
    for (const auto& p : need_array(j, "pieces")) {
        auto v = int_vector(p, "pieces");
        if (v.size() != 2) throw Error(errk::ParseError, "field 'pieces' entry not a pair");
        cert.pieces.emplace_back(v[0], v[1]);
    }
    cert.k = int(need_int(j, "k"));
    cert.l = int(need_int(j, "l"));
    return cert;
}

Json measure_certificate_json(const InvariantMeasureCertificate& cert) {
    Json j;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cert.context_hash));
    j["context_hash"] = buf;
    j["target"] = cert.target;
    Json w = Json::array();
    for (const auto& x : cert.weights) w.push_back(rat_str(x));
    j["weights"] = std::move(w);
    return j;
}

InvariantMeasureCertificate measure_certificate_from(const Json& j) {
    InvariantMeasureCertificate cert;
    cert.context_hash = std::stoull(need_str(j, "context_hash"), nullptr, 16);
    cert.target = int_vector(need_array(j, "target"), "target");
    cert.weights = rational_vector(need_array(j, "weights"), "weights");
    return cert;
}

SystemDescriptor parse_system_file(const std::string& path) {
    return system_from(load_document(path, "resfin/system"));
}

// ---------------------------------------------------------------------------
// Matrix tuples and orbit windows.
// ---------------------------------------------------------------------------

void save_matrix_tuple(const std::string& json_path, const MatrixTuple& t,
                       const RunManifest* manifest) {
    for (const auto& m : t.projections)
        if (m.rows() != t.dimension || m.cols() != t.dimension)
            throw Error(errk::Mismatch, "projection shape disagrees with the tuple dimension");
    for (const auto& m : t.unitaries)
        if (m.rows() != t.dimension || m.cols() != t.dimension)
            throw Error(errk::Mismatch, "unitary shape disagrees with the tuple dimension");

    std::string sidecar_name = base_of(json_path) + ".rfm";
    std::string blob(kMatrixMagic, sizeof kMatrixMagic);
    put_u64(blob, std::uint64_t(t.dimension));
    put_u64(blob, t.projections.size());
    put_u64(blob, t.unitaries.size());
    for (const auto& m : t.projections) put_matrix(blob, m);
    for (const auto& m : t.unitaries) put_matrix(blob, m);
    write_text_file(dir_of(json_path) + "/" + sidecar_name, blob);

    Json j = make_document("resfin/matrix-tuple");
    j["dimension"] = t.dimension;
    j["projections"] = int(t.projections.size());
    j["unitaries"] = int(t.unitaries.size());
    Json tols = Json::object();
    for (const auto& [k, v] : t.tolerances) tols[k] = v;
    j["tolerances"] = std::move(tols);
    j["data"] = sidecar_name;
    if (manifest) j["manifest"] = manifest_json(*manifest);
    write_text_file(json_path, j.dump(2) + "\n");
}

MatrixTuple load_matrix_tuple(const std::string& json_path) {
    Json j = load_document(json_path, "resfin/matrix-tuple");
    MatrixTuple t;
    t.dimension = int(need_int(j, "dimension"));
    long np = need_int(j, "projections"), nu = need_int(j, "unitaries");
    if (t.dimension <= 0 || np < 0 || nu < 0)
        throw Error(errk::ParseError, "bad matrix tuple counts");
    if (j.contains("tolerances"))
        for (const auto& [k, v] : j.at("tolerances").items()) {
            if (!v.is_number()) throw Error(errk::ParseError, "field 'tolerances' not numeric");
            t.tolerances[k] = v.get<double>();
        }
    std::string blob = read_text_file(dir_of(json_path) + "/" + need_str(j, "data"));
    if (blob.size() < sizeof kMatrixMagic ||
        std::memcmp(blob.data(), kMatrixMagic, sizeof kMatrixMagic) != 0)
        throw Error(errk::ParseError, "matrix sidecar magic mismatch");
    size_t off = sizeof kMatrixMagic;
    std::uint64_t d = get_u64(blob, off);
    std::uint64_t bp = get_u64(blob, off), bu = get_u64(blob, off);
    if (d != std::uint64_t(t.dimension) || bp != std::uint64_t(np) || bu != std::uint64_t(nu))
        throw Error(errk::ParseError, "matrix sidecar header disagrees with the JSON header");
    for (long i = 0; i < np; ++i) t.projections.push_back(get_matrix(blob, off, t.dimension));
    for (long i = 0; i < nu; ++i) t.unitaries.push_back(get_matrix(blob, off, t.dimension));
    if (off != blob.size()) throw Error(errk::ParseError, "matrix sidecar has trailing bytes");
    return t;
}

Json orbit_json(const OrbitRepresentation& o) {
    Json j = make_document("resfin/orbit");
    j["lo"] = o.lo;
    Json fns = Json::array();
    for (const auto& f : o.values) {
        Json vals = Json::array();
        for (const auto& z : f) vals.push_back(Json::array({z.real(), z.imag()}));
        fns.push_back(std::move(vals));
    }
    j["values"] = std::move(fns);
    return j;
}

OrbitRepresentation orbit_from(const Json& j) {
    OrbitRepresentation o;
    o.lo = need_int(j, "lo");
    for (const auto& f : need_array(j, "values")) {
        if (!f.is_array()) throw Error(errk::ParseError, "field 'values' not an array");
        std::vector<Cplx> vals;
        for (const auto& z : f) {
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw Error(errk::ParseError, "field 'values' entry not [re, im]");
            vals.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
        o.values.push_back(std::move(vals));
    }
    size_t len = o.values.empty() ? 0 : o.values[0].size();
    for (const auto& f : o.values)
        if (f.size() != len) throw Error(errk::ParseError, "field 'values' rows differ in length");
    return o;
}

}  // namespace resfin
