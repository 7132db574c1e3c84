#include "resfin/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "resfin/acceptance.hpp"
#include "resfin/berg.hpp"
#include "resfin/error.hpp"
#include "resfin/fixtures.hpp"
#include "resfin/io.hpp"
#include "resfin/matrix_approx.hpp"
#include "resfin/measure_model.hpp"
#include "resfin/paradox.hpp"
#include "resfin/symbolic.hpp"
#include "resfin/zsystems.hpp"

namespace resfin {
namespace {

DensityGridCaps caps_from_env() {
    DensityGridCaps caps;
    if (const char* cap = std::getenv("RESFIN_CAP_ATOMS")) {
        char* end = nullptr;
        long v = std::strtol(cap, &end, 10);
        if (end && *end == '\0' && v > 0) caps.max_patterns = v;
    }
    return caps;
}

// Options shared by the subcommands; each one registers only what it uses.
struct Invocation {
    std::string epsilon = "1/2";
    int window = 1;
    long ball = 1;
    long horizon = 64;
    long table = 0;
    long seed = 0;
    long level = 2;
    int k = 2, l = 1;
    int alphabet = 2;
    long r = 0, s = 0;
    std::vector<std::string> tol;
    std::string out_path;
    std::vector<std::string> files;

    DensityGridCaps caps = caps_from_env();
    std::ostream* out = nullptr;

    Rational eps() const { return parse_rational(epsilon); }

    Tolerances tolerances(const std::map<std::string, double>& base = {}) const {
        Tolerances t;
        for (const auto& [name, value] : base) t.set(name, value);
        for (const auto& spec : tol) {
            auto eq = spec.find('=');
            if (eq == std::string::npos)
                throw Error(errk::ParseError, "--tol expects name=value, got '" + spec + "'");
            t.set(spec.substr(0, eq), std::stod(spec.substr(eq + 1)));
        }
        return t;
    }

    RunManifest manifest(const std::string& command) const {
        RunManifest m;
        m.command = command;
        m.seed = seed;
        for (const auto& f : files) m.add_input(f);
        for (const auto& spec : tol) {
            auto eq = spec.find('=');
            if (eq != std::string::npos)
                m.tolerance_overrides[spec.substr(0, eq)] = spec.substr(eq + 1);
        }
        return m;
    }

    void emit(Json doc, const RunManifest& man) const {
        doc["manifest"] = manifest_json(man);
        std::string text = doc.dump(2) + "\n";
        if (out_path.empty())
            *out << text;
        else {
            write_text_file(out_path, text);
            *out << "wrote " << out_path << "\n";
        }
    }

    void emit_text(const std::string& text) const {
        if (out_path.empty())
            *out << text;
        else {
            write_text_file(out_path, text);
            *out << "wrote " << out_path << "\n";
        }
    }
};

std::string peek_format(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errk::ParseError, std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("format") || !j.at("format").is_string())
        throw Error(errk::ParseError, "file '" + path + "' has no format field");
    return j.at("format").get<std::string>();
}

// System-or-finite-action input for the bounded-context commands.
ContextDescription load_context_input(const Invocation& iv) {
    ContextDescription desc;
    const std::string& path = iv.files[0];
    std::string fmt = peek_format(path);
    int rank = 0;
    if (fmt == "resfin/action") {
        desc.action = action_from(load_document(path, "resfin/action"));
        rank = desc.action->rank();
    } else {
        desc.system = parse_system_file(path);
        rank = generator_count(*desc.system);
    }
    desc.window = iv.window;
    desc.translators = ball_words(rank, int(iv.ball));
    return desc;
}

std::string defect_lines(const Witness& w) {
    std::ostringstream ss;
    ss << "epsilon = " << rat_str(w.epsilon) << "\n"
       << "density_defect = " << rat_str(w.density_defect) << "\n"
       << "equivariance_defect = " << rat_str(w.equivariance_defect) << "\n"
       << "pass = " << (w.pass() ? "true" : "false") << "\n";
    return ss.str();
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit status.
// ---------------------------------------------------------------------------

int cmd_check_witness(const Invocation& iv) {
    Witness in = witness_from(load_document(iv.files[0], "resfin/witness"));
    Witness w = check_witness(in.system, in.action, in.zeta, in.generator_scope, in.epsilon, iv.caps);
    *iv.out << defect_lines(w);
    iv.emit(witness_json(w), iv.manifest("check-witness"));
    return w.pass() ? 0 : 1;
}

int cmd_chain_recurrence(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    auto* sample = std::get_if<FiniteSampleSystem>(&sys);
    if (!sample) throw Error(errk::NonEvaluable, "chain recurrence needs a finite sampled system");
    Rational eps = iv.eps();
    EpsGraph g = build_eps_graph(*sample, eps);
    std::vector<int> rec = chain_recurrent_set(g);
    *iv.out << "chain_recurrent =";
    for (int x : rec) *iv.out << " " << x;
    *iv.out << "\n";

    Json doc = make_document("resfin/chain-model");
    doc["epsilon"] = rat_str(eps);
    doc["chain_recurrent"] = rec;
    if (rec.empty()) {
        doc["found"] = false;
        iv.emit(std::move(doc), iv.manifest("chain-recurrence"));
        *iv.out << "none at this epsilon\n";
        return 1;
    }
    Witness w = model_from_chains(*sample, eps, iv.caps);
    *iv.out << defect_lines(w);
    doc["found"] = true;
    doc["witness"] = witness_json(w);
    iv.emit(std::move(doc), iv.manifest("chain-recurrence"));
    return 0;
}

int cmd_compressible(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    auto u = find_compressible_clopen(sys, iv.window, iv.caps);
    Json doc = make_document("resfin/compressible");
    doc["window"] = iv.window;
    if (!u) {
        doc["found"] = false;
        iv.emit(std::move(doc), iv.manifest("compressible"));
        *iv.out << "none at window " << iv.window << "\n";
        return 1;
    }
    auto atoms = atoms_at(sys, u->window, iv.caps);
    Json labels = Json::array();
    *iv.out << "compressible U =";
    for (int id : u->atoms) {
        std::string lb = atom_label(sys, atoms[size_t(id)]);
        *iv.out << " " << lb;
        labels.push_back(lb);
    }
    *iv.out << "\n";
    doc["found"] = true;
    doc["clopen"] = clopen_json(*u);
    doc["labels"] = std::move(labels);
    iv.emit(std::move(doc), iv.manifest("compressible"));
    return 0;
}

int cmd_recurrence_scan(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    Point x = point_from(load_document(iv.files[1], "resfin/point"));
    validate_point(sys, x);
    RecurrenceVerdict v = recurrence_scan(sys, x, iv.eps(), iv.ball, iv.horizon);
    Json doc = make_document("resfin/recurrence");
    doc["found"] = v.found;
    doc["n"] = v.n;
    doc["m"] = v.m;
    doc["epsilon"] = rat_str(iv.eps());
    doc["from"] = iv.ball;
    doc["horizon"] = iv.horizon;
    iv.emit(std::move(doc), iv.manifest("recurrence-scan"));
    if (v.found)
        *iv.out << "recurrent: n = " << v.n << ", m = " << v.m << "\n";
    else
        *iv.out << "none up to horizon " << iv.horizon << "\n";
    return v.found ? 0 : 1;
}

int cmd_paradox(const Invocation& iv) {
    ContextDescription desc = load_context_input(iv);
    ActionContext ctx = rebuild_context(desc, iv.caps);
    std::vector<int> target;
    for (int i = 0; i < ctx.base_count; ++i) target.push_back(i);
    auto cert = decide_paradoxical(ctx, target, iv.k, iv.l);
    Json doc = make_document("resfin/paradox");
    doc["context"] = context_json(desc);
    doc["bound"] = ctx.bound_description;
    doc["k"] = iv.k;
    doc["l"] = iv.l;
    if (!cert) {
        doc["found"] = false;
        iv.emit(std::move(doc), iv.manifest("paradox"));
        *iv.out << "no (" << iv.k << "," << iv.l << ")-certificate at context: "
                << ctx.bound_description << "\n";
        return 1;
    }
    if (!verify_certificate(ctx, *cert)) throw Error(errk::Mismatch, "fresh certificate failed");
    doc["found"] = true;
    doc["certificate"] = paradox_certificate_json(*cert);
    iv.emit(std::move(doc), iv.manifest("paradox"));
    *iv.out << "paradoxical: k = " << cert->k << ", l = " << cert->l << ", pieces = "
            << cert->pieces.size() << "\n";
    return 0;
}

int cmd_invariant_measure(const Invocation& iv) {
    ContextDescription desc = load_context_input(iv);
    ActionContext ctx = rebuild_context(desc, iv.caps);
    std::vector<int> target;
    for (int i = 0; i < ctx.base_count; ++i) target.push_back(i);
    auto cert = invariant_measure_lp(ctx, target);
    Json doc = make_document("resfin/invariant-measure");
    doc["context"] = context_json(desc);
    doc["bound"] = ctx.bound_description;
    if (!cert) {
        doc["found"] = false;
        iv.emit(std::move(doc), iv.manifest("invariant-measure"));
        *iv.out << "no invariant measure at context: " << ctx.bound_description << "\n";
        return 1;
    }
    doc["found"] = true;
    doc["certificate"] = measure_certificate_json(*cert);
    iv.emit(std::move(doc), iv.manifest("invariant-measure"));
    *iv.out << "invariant measure on " << ctx.refined_count << " atoms\n";
    return 0;
}

int cmd_equidecompose(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    ClopenSet P = clopen_from(load_document(iv.files[1], "resfin/clopen"));
    ClopenSet Q = clopen_from(load_document(iv.files[2], "resfin/clopen"));
    int window = std::max({iv.window, P.window, Q.window});
    P = clopen_refine(sys, P, window, iv.caps);
    Q = clopen_refine(sys, Q, window, iv.caps);
    ContextDescription desc;
    desc.system = sys;
    desc.window = window;
    desc.translators = ball_words(generator_count(sys), int(iv.ball));
    ActionContext ctx = rebuild_context(desc, iv.caps);
    auto match = equidecompose(ctx, P.atoms, Q.atoms);
    Json doc = make_document("resfin/equidecomposition");
    doc["context"] = context_json(desc);
    doc["P"] = P.atoms;
    doc["Q"] = Q.atoms;
    if (!match) {
        doc["found"] = false;
        iv.emit(std::move(doc), iv.manifest("equidecompose"));
        *iv.out << "no piece matching at context: " << ctx.bound_description << "\n";
        return 1;
    }
    doc["found"] = true;
    Json asg = Json::array();
    for (auto [atom, tr] : match->assignment) asg.push_back(Json::array({atom, tr}));
    doc["assignment"] = std::move(asg);
    iv.emit(std::move(doc), iv.manifest("equidecompose"));
    *iv.out << "matched " << match->assignment.size() << " pieces\n";
    return 0;
}

int cmd_measure_to_model(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    Json mj = load_document(iv.files[1], "resfin/measure");
    std::vector<Rational> target;
    for (const auto& m : mj.at("masses")) target.push_back(rational_from(m, "masses"));
    ModelFromMeasure model = measure_to_model(sys, iv.window, target, iv.eps(), iv.caps);
    *iv.out << "cells = " << model.cells.size() << ", |E| = " << model.witness.action.size
            << ", denominator = " << model.denominator << ", radius = " << rat_str(model.radius)
            << "\n"
            << defect_lines(model.witness);
    Json doc = make_document("resfin/model");
    doc["cells"] = model.cells;
    Json sol = Json::array();
    for (const auto& x : model.solution) sol.push_back(rat_str(x));
    doc["solution"] = std::move(sol);
    doc["radius"] = rat_str(model.radius);
    doc["denominator"] = model.denominator;
    doc["cell_of"] = model.cell_of;
    doc["block_of"] = model.block_of;
    doc["image_block_of"] = model.image_block_of;
    doc["witness"] = witness_json(model.witness);
    iv.emit(std::move(doc), iv.manifest("measure-to-model"));
    return model.witness.pass() ? 0 : 1;
}

int cmd_affine_lift(const Invocation& iv) {
    Witness base = witness_from(load_document(iv.files[0], "resfin/witness"));
    base = check_witness(base.system, base.action, base.zeta, base.generator_scope, base.epsilon,
                         iv.caps);
    int radius = iv.window > 1 ? iv.window : resolution_radius(base.epsilon);
    auto omega = standard_test_family(base.system, radius, iv.caps);
    AffineLiftResult res = affine_lift(base, int(iv.level), omega, iv.caps);
    *iv.out << "count = " << res.count << "\n"
            << "base_defect = " << rat_str(res.base_defect) << "\n"
            << "lift_defect = " << rat_str(res.lift_defect) << "\n";
    Json doc = make_document("resfin/affine-lift");
    doc["level"] = iv.level;
    doc["count"] = res.count;
    doc["base_defect"] = rat_str(res.base_defect);
    doc["lift_defect"] = rat_str(res.lift_defect);
    doc["witness"] = witness_json(res.witness);
    iv.emit(std::move(doc), iv.manifest("affine-lift"));
    return res.witness.pass() ? 0 : 1;
}

int cmd_fixed_point_model(const Invocation& iv) {
    SystemDescriptor sys = parse_system_file(iv.files[0]);
    auto* K = std::get_if<PolytopeSystem>(&sys);
    if (!K) throw Error(errk::NonEvaluable, "fixed-point models need a polytope system");
    Point p = point_from(load_document(iv.files[1], "resfin/point"));
    auto* fixed = std::get_if<PolytopePoint>(&p);
    if (!fixed) throw Error(errk::NonEvaluable, "the fixed point must be a polytope point");
    FixedPointModel res = fixed_point_model(*K, K->vertices, fixed->coords, int(iv.level), iv.eps(),
                                            iv.caps);
    *iv.out << "bound = " << rat_str(res.bound) << "\n" << defect_lines(res.witness);
    Json doc = make_document("resfin/fixed-point-model");
    doc["level"] = iv.level;
    doc["bound"] = rat_str(res.bound);
    doc["witness"] = witness_json(res.witness);
    iv.emit(std::move(doc), iv.manifest("fixed-point-model"));
    return res.witness.pass() ? 0 : 1;
}

int cmd_bernoulli_model(const Invocation& iv) {
    FiniteQuotient q;
    if (!iv.files.empty()) {
        Json j = load_document(iv.files[0], "resfin/quotient");
        q.order = int(j.at("order").get<long>());
        for (const auto& row : j.at("gen_images")) q.gen_images.push_back(row.get<std::vector<int>>());
        validate_quotient(q);
    } else {
        q = cyclic_quotient(iv.window);
    }
    Witness w = bernoulli_model(iv.alphabet, q, iv.eps(), iv.caps);
    *iv.out << "|E| = " << w.action.size << "\n" << defect_lines(w);
    iv.emit(witness_json(w), iv.manifest("bernoulli-model"));
    return w.pass() ? 0 : 1;
}

int cmd_algebraic(const Invocation& iv) {
    Json fj = load_document(iv.files[0], "resfin/group-ring");
    GroupRingElement f = group_ring_from(fj);
    validate_group_ring(f);
    if (iv.table > 0) {
        Json doc = make_document("resfin/algebraic-orders");
        Json orders = Json::array();
        for (int n = 1; n <= iv.table; ++n) {
            try {
                FixedPointGroup g = algebraic_fixed_points(f, n);
                orders.push_back(g.order.str());
                *iv.out << "n = " << n << ": order " << g.order.str() << "\n";
            } catch (const Error& e) {
                if (e.kind() != errk::Infinite) throw;
                orders.push_back("infinite");
                *iv.out << "n = " << n << ": infinite\n";
            }
        }
        doc["orders"] = std::move(orders);
        iv.emit(std::move(doc), iv.manifest("algebraic"));
        return 0;
    }
    FixedPointGroup g = algebraic_fixed_points(f, iv.window);
    Witness w = algebraic_model_witness(f, iv.window, iv.eps(), iv.caps);
    *iv.out << "order = " << g.order.str() << "\n" << defect_lines(w);
    Json doc = make_document("resfin/algebraic-model");
    doc["n"] = iv.window;
    doc["order"] = g.order.str();
    Json factors = Json::array();
    for (const auto& d : g.factors) factors.push_back(d.str());
    doc["factors"] = std::move(factors);
    doc["witness"] = witness_json(w);
    iv.emit(std::move(doc), iv.manifest("algebraic"));
    return w.pass() ? 0 : 1;
}

int cmd_microstate_extract(const Invocation& iv) {
    MatrixTuple t = load_matrix_tuple(iv.files[0]);
    Tolerances tol = iv.tolerances(t.tolerances);
    ExtractedAction ex = extract_finite_action(t, tol);
    *iv.out << "|E| = " << ex.action.size << ", delta = " << ex.delta << "\n";
    Json doc = make_document("resfin/action");
    doc["size"] = ex.action.size;
    doc["generators"] = ex.action.generators;
    doc["labels"] = ex.label_of;
    doc["delta"] = ex.delta;
    iv.emit(std::move(doc), iv.manifest("microstate-extract"));
    return 0;
}

int cmd_berg(const Invocation& iv) {
    OrbitRepresentation orbit = orbit_from(load_document(iv.files[0], "resfin/orbit"));
    long n = iv.ball;
    BergReport rep = berg_projection(orbit, n, iv.r, iv.s, iv.tolerances());
    RunManifest man = iv.manifest("berg");
    std::ostringstream ss;
    ss << "command = berg\n";
    for (const auto& [name, digest] : man.inputs) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        ss << "input." << name << " = " << buf << "\n";
    }
    ss << "version = " << man.version << "\n"
       << "n = " << n << "\nr = " << iv.r << "\ns = " << iv.s << "\nwindow = " << orbit.length()
       << "\n";
    ss.precision(17);
    ss << "u_minus_v = " << rep.u_minus_v << "\n"
       << "bound.u_minus_v = " << 4.0 / double(n) << "\n"
       << "pv_comm = " << rep.pv_comm << "\n"
       << "bound.pv_comm = 1e-12\n"
       << "pu_comm = " << rep.pu_comm << "\n"
       << "bound.pu_comm = " << 8.0 / double(n) << "\n"
       << "pf_comm = " << rep.pf_comm << "\n"
       << "bound.pf_comm = " << 2.0 / double(n) << "\n";
    iv.emit_text(ss.str());
    return 0;
}

int cmd_selftest(const Invocation& iv) { return run_acceptance(*iv.out) == 0 ? 0 : 1; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"residually finite action toolkit"};
    app.require_subcommand(1);
    Invocation iv;
    iv.out = &out;
    int rc = 0;

    auto add_common = [&](CLI::App* sub, bool epsilon = false) {
        sub->add_option("--seed", iv.seed, "seed recorded in the manifest");
        sub->add_option("--tol", iv.tol, "tolerance override name=value")->delimiter(',');
        sub->add_option("--out", iv.out_path, "artifact output path");
        if (epsilon) sub->add_option("--epsilon", iv.epsilon, "exact rational p/q");
    };

    struct Cmd {
        const char* name;
        const char* help;
        int files;
        int opt_files;
        bool epsilon;
        int (*fn)(const Invocation&);
    };
    const std::vector<Cmd> cmds = {
        {"check-witness", "re-check a witness file", 1, 0, false, cmd_check_witness},
        {"chain-recurrence", "chain-recurrent model of a sampled system", 1, 0, true,
         cmd_chain_recurrence},
        {"compressible", "search for a compressible clopen set", 1, 0, false, cmd_compressible},
        {"recurrence-scan", "forward/backward orbit recurrence scan", 2, 0, true,
         cmd_recurrence_scan},
        {"paradox", "bounded-context paradoxicality decision", 1, 0, false, cmd_paradox},
        {"invariant-measure", "bounded-context invariant measure LP", 1, 0, false,
         cmd_invariant_measure},
        {"equidecompose", "piece matching between two clopen sets", 3, 0, false, cmd_equidecompose},
        {"measure-to-model", "finite model from approximate invariant masses", 2, 0, true,
         cmd_measure_to_model},
        {"affine-lift", "quantized-measure lift of a witness", 1, 0, false, cmd_affine_lift},
        {"fixed-point-model", "interpolation model around a fixed point", 2, 0, true,
         cmd_fixed_point_model},
        {"bernoulli-model", "Bernoulli model from a finite quotient", 0, 1, true,
         cmd_bernoulli_model},
        {"algebraic", "algebraic action models and fixed-point counts", 1, 0, true, cmd_algebraic},
        {"microstate-extract", "finite action from an approximate matrix tuple", 1, 0, false,
         cmd_microstate_extract},
        {"berg", "interpolated shift unitary and commuting projection", 1, 0, false, cmd_berg},
        {"selftest", "run the acceptance suite", 0, 0, false, cmd_selftest},
    };

    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, c.epsilon);
        if (c.files > 0 || c.opt_files > 0)
            sub->add_option("files", iv.files, "input files")
                ->expected(c.files, c.files + c.opt_files)
                ->check(CLI::ExistingFile);
        if (std::string(c.name) == "chain-recurrence" || std::string(c.name) == "recurrence-scan" ||
            std::string(c.name) == "measure-to-model" || std::string(c.name) == "affine-lift" ||
            std::string(c.name) == "compressible" || std::string(c.name) == "paradox" ||
            std::string(c.name) == "invariant-measure" || std::string(c.name) == "equidecompose" ||
            std::string(c.name) == "bernoulli-model" || std::string(c.name) == "algebraic")
            sub->add_option("--window", iv.window, "resolution window / quotient index");
        if (std::string(c.name) == "recurrence-scan" || std::string(c.name) == "paradox" ||
            std::string(c.name) == "invariant-measure" || std::string(c.name) == "equidecompose" ||
            std::string(c.name) == "berg")
            sub->add_option("--ball", iv.ball, "translator ball radius / scan start / index n");
        if (std::string(c.name) == "recurrence-scan")
            sub->add_option("--horizon", iv.horizon, "scan bound");
        if (std::string(c.name) == "algebraic")
            sub->add_option("--horizon", iv.table, "emit the order table for n = 1..horizon");
        if (std::string(c.name) == "paradox") {
            sub->add_option("--k", iv.k, "lower multiplicity");
            sub->add_option("--l", iv.l, "upper multiplicity");
        }
        if (std::string(c.name) == "affine-lift" || std::string(c.name) == "fixed-point-model")
            sub->add_option("--level", iv.level, "quantization level m");
        if (std::string(c.name) == "bernoulli-model")
            sub->add_option("--alphabet", iv.alphabet, "alphabet size");
        if (std::string(c.name) == "berg") {
            sub->add_option("--r", iv.r, "forward recurrence offset")->required();
            sub->add_option("--s", iv.s, "backward recurrence offset")->required();
        }
        sub->callback([&iv, &rc, fn = c.fn] { rc = fn(iv); });
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
    return rc;
}

}  // namespace resfin
