#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "resfin/cli.hpp"
#include "resfin/error.hpp"
#include "resfin/fixtures.hpp"
#include "resfin/hash.hpp"
#include "resfin/io.hpp"
#include "resfin/paradox.hpp"
#include "resfin/zsystems.hpp"

using namespace resfin;

namespace {

std::string scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "resfin-io-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string write_doc(const std::string& name, const Json& doc) {
    std::string path = scratch(name);
    write_text_file(path, doc.dump(2) + "\n");
    return path;
}

struct CliResult {
    int rc;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int rc = run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

template <typename F>
std::string thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

// Three points drifting right: every image distance is realized off the
// diagonal, so no epsilon-chain ever returns.
FiniteSampleSystem drifting_line() {
    FiniteSampleSystem s;
    s.n = 3;
    s.dist.assign(3, std::vector<Rational>(3, Rational(0)));
    s.image_dist.assign(3, std::vector<Rational>(3, Rational(0)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            s.dist[i][j] = Rational(i > j ? i - j : j - i);
            int d = (i + 1) - j;
            s.image_dist[i][j] = Rational(d < 0 ? -d : d);
        }
    return s;
}

}  // namespace

TEST_CASE("equal manifests serialize to identical bytes") {
    std::string input = scratch("manifest-input.json");
    write_text_file(input, "{\"x\": 1}\n");
    RunManifest a, b;
    for (RunManifest* m : {&a, &b}) {
        m->command = "check";
        m->seed = 7;
        m->tolerance_overrides["gap"] = "0.5";
        m->add_input(input);
    }
    CHECK(manifest_json(a).dump(2) == manifest_json(b).dump(2));
    CHECK(a.inputs.size() == 1);
    CHECK(a.inputs[0].first == "manifest-input.json");
    CHECK(a.inputs[0].second == fnv1a64("{\"x\": 1}\n"));
    CHECK(content_digest("") == fnv1a64(""));
    CHECK(thrown_kind([&] {
              RunManifest m;
              m.add_input(scratch("no-such-file.json"));
          }) == errk::ParseError);
}

TEST_CASE("rationals travel as exact strings") {
    CHECK(rational_json(Rational(-3, 4)).get<std::string>() == "-3/4");
    CHECK(rational_from(Json("1.25e-3"), "x") == Rational(1, 800));
    CHECK(rational_from(Json(5), "x") == Rational(5));
    CHECK(thrown_kind([] { rational_from(Json("1/0"), "x"); }) == errk::ParseError);
    CHECK(thrown_kind([] { rational_from(Json(true), "x"); }) == errk::ParseError);
}

TEST_CASE("word encoding rejects malformed letters") {
    Word w = parse_word("abA", 2);
    CHECK(word_from(word_json(w), "w") == w);
    CHECK(thrown_kind([] { word_from(Json::array({1, -1}), "w"); }) == errk::ParseError);
    CHECK(thrown_kind([] { word_from(Json::array({1, 0}), "w"); }) == errk::ParseError);
}

TEST_CASE("system documents round-trip for every kind") {
    std::mt19937_64 rng(11);
    std::vector<SystemDescriptor> fixtures = {
        rotation_sample(4),
        compactified_sample(3),
        full_shift(2),
        golden_mean_shift(),
        FrShiftSystem{2, 2},
        FrBoundarySystem{2},
        compactified_translation(),
        rotation_system(),
        random_simplex_map(rng, 2).K,
    };
    for (const auto& sys : fixtures) {
        Json j = system_json(sys);
        SystemDescriptor back = system_from(j);
        CHECK(system_json(back).dump() == j.dump());
    }
    Json bad = make_document("resfin/system");
    bad["kind"] = "frobnicator";
    CHECK(thrown_kind([&] { system_from(bad); }) == errk::ParseError);
}

TEST_CASE("witness documents re-check to the stored defects") {
    Witness w = model_from_chains(rotation_sample(8), Rational(1, 16));
    Json j = witness_json(w);
    CHECK(j.at("pass").get<bool>() == true);
    Witness back = witness_from(j);
    CHECK(witness_json(back).dump() == j.dump());
    Witness re = check_witness(back.system, back.action, back.zeta, back.generator_scope,
                               back.epsilon);
    CHECK(re.density_defect == w.density_defect);
    CHECK(re.equivariance_defect == w.equivariance_defect);
}

TEST_CASE("clopen documents keep atoms strictly increasing") {
    ClopenSet c;
    c.window = 2;
    c.atoms = {0, 2, 5};
    ClopenSet back = clopen_from(clopen_json(c));
    CHECK(back.window == 2);
    CHECK((back.atoms == std::vector<int>{0, 2, 5}));
    Json j = clopen_json(c);
    j["atoms"] = Json::array({2, 2});
    CHECK(thrown_kind([&] { clopen_from(j); }) == errk::ParseError);
}

TEST_CASE("document headers are enforced on load") {
    std::string ok = write_doc("header-ok.json", clopen_json(ClopenSet{1, {0}}));
    CHECK(load_document(ok, "resfin/clopen").at("window").get<int>() == 1);
    CHECK(thrown_kind([&] { load_document(ok, "resfin/system"); }) == errk::ParseError);

    Json drifted = clopen_json(ClopenSet{1, {0}});
    drifted["version"] = 2;
    std::string vpath = write_doc("header-version.json", drifted);
    CHECK(thrown_kind([&] { load_document(vpath, "resfin/clopen"); }) == errk::UnsupportedVersion);

    std::string broken = scratch("header-broken.json");
    write_text_file(broken, "{\"format\": ");
    CHECK(thrown_kind([&] { load_document(broken, "resfin/clopen"); }) == errk::ParseError);
    CHECK(thrown_kind([&] { load_document(scratch("absent.json"), "resfin/clopen"); }) ==
          errk::ParseError);
}

TEST_CASE("matrix tuples survive the binary sidecar") {
    std::mt19937_64 rng(99);
    MatrixTuple t = encode_action(random_f2_action(rng, 5));
    perturb_tuple(rng, t, 1e-4);
    t.tolerances["gap"] = 0.25;
    std::string path = scratch("tuple.json");
    save_matrix_tuple(path, t);
    CHECK(std::filesystem::exists(scratch("tuple.json.rfm")));

    MatrixTuple back = load_matrix_tuple(path);
    CHECK(back.dimension == t.dimension);
    REQUIRE(back.projections.size() == t.projections.size());
    REQUIRE(back.unitaries.size() == t.unitaries.size());
    for (size_t i = 0; i < t.projections.size(); ++i)
        CHECK((back.projections[i] - t.projections[i]).cwiseAbs().maxCoeff() == 0.0);
    for (size_t i = 0; i < t.unitaries.size(); ++i)
        CHECK((back.unitaries[i] - t.unitaries[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.tolerances.at("gap") == 0.25);

    Json j = Json::parse(read_text_file(path));
    j["dimension"] = t.dimension + 1;
    std::string lied = write_doc("tuple-lied.json", j);
    write_text_file(scratch("tuple-lied.json.rfm"), read_text_file(scratch("tuple.json.rfm")));
    CHECK(thrown_kind([&] { load_matrix_tuple(lied); }) == errk::ParseError);

    std::string blob = read_text_file(scratch("tuple.json.rfm"));
    blob[0] = 'X';
    write_text_file(scratch("tuple.json.rfm"), blob);
    CHECK(thrown_kind([&] { load_matrix_tuple(path); }) == errk::ParseError);
}

TEST_CASE("orbit windows round-trip exactly") {
    OrbitRepresentation o = rotation_orbit_window(-4, 9, 55, 89);
    OrbitRepresentation back = orbit_from(orbit_json(o));
    CHECK(back.lo == o.lo);
    REQUIRE(back.values.size() == o.values.size());
    for (size_t f = 0; f < o.values.size(); ++f) {
        REQUIRE(back.values[f].size() == o.values[f].size());
        for (size_t i = 0; i < o.values[f].size(); ++i) CHECK(back.values[f][i] == o.values[f][i]);
    }
    Json j = orbit_json(o);
    j["values"][0][0] = Json::array({1.0});
    CHECK(thrown_kind([&] { orbit_from(j); }) == errk::ParseError);
}

TEST_CASE("context recipes rebuild to the same bounded context") {
    ContextDescription desc;
    desc.system = FrBoundarySystem{2};
    desc.window = 1;
    desc.translators = ball_words(2, 2);
    ContextDescription back = context_from(context_json(desc));
    ActionContext ctx = rebuild_context(desc);
    ActionContext ctx2 = rebuild_context(back);
    CHECK(ctx.context_hash == ctx2.context_hash);

    std::vector<int> target;
    for (int i = 0; i < ctx.base_count; ++i) target.push_back(i);
    auto cert = decide_paradoxical(ctx, target, 2, 1);
    REQUIRE(cert.has_value());
    ParadoxCertificate cback = paradox_certificate_from(paradox_certificate_json(*cert));
    CHECK(cback.context_hash == cert->context_hash);
    CHECK(verify_certificate(ctx2, cback));

    ContextDescription shift;
    shift.system = full_shift(2);
    shift.window = 1;
    shift.translators = ball_words(1, 2);
    ActionContext sctx = rebuild_context(shift);
    std::vector<int> whole;
    for (int i = 0; i < sctx.base_count; ++i) whole.push_back(i);
    auto mu = invariant_measure_lp(sctx, whole);
    REQUIRE(mu.has_value());
    InvariantMeasureCertificate mback = measure_certificate_from(measure_certificate_json(*mu));
    CHECK(mback.weights == mu->weights);
    CHECK(measure_of(sctx, mback, whole) == Rational(1));

    Json cj = context_json(desc);
    cj.erase("system");
    CHECK(thrown_kind([&] { context_from(cj); }) == errk::ParseError);
}

TEST_CASE("cli rejects unknown commands and missing input") {
    CliResult none = cli({});
    CHECK(none.rc == 2);
    CHECK(!none.err.empty());
    CHECK(cli({"frobnicate"}).rc == 2);
    CHECK(cli({"chain-recurrence", scratch("absent-system.json")}).rc == 2);
    CHECK(cli({"check-witness", "--frobnicate"}).rc == 2);

    CliResult help = cli({"--help"});
    CHECK(help.rc == 0);
    CHECK(help.out.find("chain-recurrence") != std::string::npos);
    CHECK(help.out.find("berg") != std::string::npos);
}

TEST_CASE("cli chain-recurrence emits a deterministic model document") {
    std::string sys = write_doc("rot8.json", system_json(rotation_sample(8)));
    std::string out1 = scratch("rot8-model-a.json");
    std::string out2 = scratch("rot8-model-b.json");
    CliResult r1 = cli({"chain-recurrence", sys, "--epsilon", "1/16", "--out", out1});
    CliResult r2 = cli({"chain-recurrence", sys, "--epsilon", "1/16", "--out", out2});
    CHECK(r1.rc == 0);
    CHECK(r1.out.find("wrote ") != std::string::npos);
    CHECK(read_text_file(out1) == read_text_file(out2));

    Json doc = load_document(out1, "resfin/chain-model");
    CHECK(doc.at("found").get<bool>() == true);
    CHECK(doc.at("chain_recurrent").size() == 8);
    CHECK(doc.at("witness").at("pass").get<bool>() == true);
    CHECK(doc.at("manifest").at("command").get<std::string>() == "chain-recurrence");
    CHECK(doc.at("manifest").at("inputs")[0].at("name").get<std::string>() == "rot8.json");

    std::string drift = write_doc("drift.json", system_json(drifting_line()));
    CliResult r3 = cli({"chain-recurrence", drift, "--epsilon", "1/2"});
    CHECK(r3.rc == 1);
    CHECK(r3.out.find("none at this epsilon") != std::string::npos);

    CHECK(cli({"chain-recurrence", write_doc("clop.json", clopen_json(ClopenSet{1, {0}}))}).rc == 2);
}

TEST_CASE("cli compressible splits the glued line and balks at the shift") {
    std::string glued = write_doc("glued.json", system_json(compactified_translation()));
    std::string out = scratch("glued-u.json");
    CliResult found = cli({"compressible", glued, "--window", "2", "--out", out});
    CHECK(found.rc == 0);
    Json doc = load_document(out, "resfin/compressible");
    CHECK(doc.at("found").get<bool>() == true);
    CHECK(doc.at("labels").size() == clopen_from(doc.at("clopen")).atoms.size());

    std::string shift = write_doc("shift2.json", system_json(full_shift(2)));
    CliResult missing = cli({"compressible", shift, "--window", "2"});
    CHECK(missing.rc == 1);
    CHECK(missing.out.find("none at window 2") != std::string::npos);
}

TEST_CASE("cli recurrence-scan reports the least return pair") {
    std::string sys = write_doc("torus.json", system_json(rotation_system()));
    Json pj = make_document("resfin/point");
    for (auto& [k, v] : point_json(rotation_orbit_point(55, 89)).items()) pj[k] = v;
    std::string pt = write_doc("torus-pt.json", pj);
    std::string out = scratch("scan.json");
    CliResult r = cli({"recurrence-scan", sys, pt, "--epsilon", "1/32", "--ball", "9", "--horizon",
                       "200", "--out", out});
    CHECK(r.rc == 0);
    CHECK(r.out.find("recurrent: n = 9, m = 12") != std::string::npos);
    Json doc = load_document(out, "resfin/recurrence");
    CHECK(doc.at("found").get<bool>() == true);
    CHECK(doc.at("n").get<long>() == 9);
    CHECK(doc.at("m").get<long>() == 12);

    CliResult far = cli({"recurrence-scan", sys, pt, "--epsilon", "1/128", "--ball", "33",
                         "--horizon", "40"});
    CHECK(far.rc == 1);
    CHECK(far.out.find("none up to horizon 40") != std::string::npos);
}

TEST_CASE("cli paradox honors the atom cap from the environment") {
    std::string boundary = write_doc("boundary.json", system_json(FrBoundarySystem{2}));
    setenv("RESFIN_CAP_ATOMS", "4", 1);
    CliResult capped = cli({"paradox", boundary, "--window", "1", "--ball", "2"});
    unsetenv("RESFIN_CAP_ATOMS");
    CHECK(capped.rc == 2);
    CHECK(!capped.err.empty());

    std::string out = scratch("paradox-cert.json");
    CliResult free_run = cli({"paradox", boundary, "--window", "1", "--ball", "2", "--out", out});
    CHECK(free_run.rc == 0);
    CHECK(free_run.out.find("paradoxical: k = 2, l = 1") != std::string::npos);
    Json doc = load_document(out, "resfin/paradox");
    CHECK(doc.at("found").get<bool>() == true);

    std::string shift = write_doc("shift2b.json", system_json(full_shift(2)));
    CliResult none = cli({"paradox", shift, "--window", "1", "--ball", "2"});
    CHECK(none.rc == 1);
    CliResult mu = cli({"invariant-measure", shift, "--window", "1", "--ball", "2"});
    CHECK(mu.rc == 0);
    CHECK(mu.out.find("invariant measure on") != std::string::npos);
}

TEST_CASE("cli check-witness re-derives the verdict from the recipe") {
    Witness w = model_from_chains(rotation_sample(8), Rational(1, 16));
    std::string path = write_doc("witness8.json", witness_json(w));
    CliResult r = cli({"check-witness", path});
    CHECK(r.rc == 0);
    CHECK(r.out.find("pass = true") != std::string::npos);
    CHECK(r.out.find("density_defect = 0") != std::string::npos);
    CHECK(r.out.find("equivariance_defect = 0") != std::string::npos);
}

TEST_CASE("cli berg writes the key-value report") {
    std::string orbit = write_doc("orbit.json", orbit_json(rotation_orbit_window(-200, 400, 55, 89)));
    std::string out = scratch("berg.txt");
    CliResult r = cli({"berg", orbit, "--ball", "8", "--r", "17", "--s", "-17", "--out", out});
    CHECK(r.rc == 0);
    std::string report = read_text_file(out);
    CHECK(report.find("command = berg\n") != std::string::npos);
    CHECK(report.find("n = 8\n") != std::string::npos);
    CHECK(report.find("u_minus_v = ") != std::string::npos);
    CHECK(report.find("bound.pu_comm = 1\n") != std::string::npos);

    CliResult missing_rs = cli({"berg", orbit, "--ball", "8"});
    CHECK(missing_rs.rc == 2);
}
