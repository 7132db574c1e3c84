#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "resfin/cli.hpp"
#include "resfin/error.hpp"
#include "resfin/fixtures.hpp"
#include "resfin/io.hpp"
#include "resfin/matrix_approx.hpp"
#include "resfin/paradox.hpp"
#include "resfin/symbolic.hpp"
#include "resfin/witness.hpp"
#include "resfin/zsystems.hpp"

namespace py = pybind11;
using namespace resfin;

// Everything structured crosses the boundary as JSON text in the documented
// file formats, so the python face and the CLI artifacts stay interchangeable.
namespace {

Json parse_doc(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errk::ParseError, e.what());
    }
}

ActionContext context_of(const std::string& system_doc, int window, int ball) {
    ContextDescription d;
    d.system = system_from(parse_doc(system_doc));
    d.window = window;
    d.translators = ball_words(generator_count(*d.system), ball);
    return rebuild_context(d);
}

std::vector<int> whole_of(const ActionContext& ctx) {
    std::vector<int> t;
    for (int i = 0; i < ctx.base_count; ++i) t.push_back(i);
    return t;
}

}  // namespace

PYBIND11_MODULE(_resfin, m) {
    m.doc() = "residually finite action toolkit";
    m.attr("__version__") = kToolVersion;
    py::register_exception<Error>(m, "ResfinError");

    m.def(
        "check_witness",
        [](const std::string& witness_doc) {
            Witness in = witness_from(parse_doc(witness_doc));
            Witness w =
                check_witness(in.system, in.action, in.zeta, in.generator_scope, in.epsilon);
            return witness_json(w).dump();
        },
        py::arg("witness_doc"),
        "Re-derive the defects of a witness document; returns the refreshed document.");

    m.def(
        "chain_recurrent",
        [](const std::string& system_doc, const std::string& epsilon) {
            SystemDescriptor sys = system_from(parse_doc(system_doc));
            auto* sample = std::get_if<FiniteSampleSystem>(&sys);
            if (!sample)
                throw Error(errk::NonEvaluable, "chain recurrence needs a finite sampled system");
            return chain_recurrent_set(build_eps_graph(*sample, parse_rational(epsilon)));
        },
        py::arg("system_doc"), py::arg("epsilon"),
        "Indices of the epsilon-chain-recurrent points of a sampled system.");

    m.def(
        "model_from_chains",
        [](const std::string& system_doc, const std::string& epsilon) {
            SystemDescriptor sys = system_from(parse_doc(system_doc));
            auto* sample = std::get_if<FiniteSampleSystem>(&sys);
            if (!sample)
                throw Error(errk::NonEvaluable, "chain recurrence needs a finite sampled system");
            return witness_json(model_from_chains(*sample, parse_rational(epsilon))).dump();
        },
        py::arg("system_doc"), py::arg("epsilon"),
        "Finite model built from epsilon-chains, as a witness document.");

    m.def(
        "find_compressible",
        [](const std::string& system_doc, int window) -> py::object {
            auto u = find_compressible_clopen(system_from(parse_doc(system_doc)), window);
            if (!u) return py::none();
            return py::cast(clopen_json(*u).dump());
        },
        py::arg("system_doc"), py::arg("window") = 1,
        "Clopen set sent strictly inside itself, or None at this window.");

    m.def(
        "decide_paradoxical",
        [](const std::string& system_doc, int window, int ball, int k, int l) -> py::object {
            ActionContext ctx = context_of(system_doc, window, ball);
            auto cert = decide_paradoxical(ctx, whole_of(ctx), k, l);
            if (!cert) return py::none();
            if (!verify_certificate(ctx, *cert))
                throw Error(errk::Mismatch, "fresh certificate failed");
            return py::cast(paradox_certificate_json(*cert).dump());
        },
        py::arg("system_doc"), py::arg("window") = 1, py::arg("ball") = 2, py::arg("k") = 2,
        py::arg("l") = 1, "Certificate of (k,l)-paradoxicality of the whole space, or None.");

    m.def(
        "invariant_measure",
        [](const std::string& system_doc, int window, int ball) -> py::object {
            ActionContext ctx = context_of(system_doc, window, ball);
            auto mu = invariant_measure_lp(ctx, whole_of(ctx));
            if (!mu) return py::none();
            return py::cast(measure_certificate_json(*mu).dump());
        },
        py::arg("system_doc"), py::arg("window") = 1, py::arg("ball") = 2,
        "Exact invariant measure certificate at this bounded context, or None.");

    m.def(
        "algebraic_orders",
        [](const std::vector<std::pair<long, std::string>>& terms, int horizon) {
            GroupRingElement f;
            for (const auto& [k, c] : terms) f.terms.emplace_back(k, Int(c));
            validate_group_ring(f);
            std::vector<std::string> out;
            for (int n = 1; n <= horizon; ++n) {
                try {
                    out.push_back(algebraic_fixed_points(f, n).order.str());
                } catch (const Error& e) {
                    if (e.kind() != errk::Infinite) throw;
                    out.push_back("infinite");
                }
            }
            return out;
        },
        py::arg("terms"), py::arg("horizon"),
        "Fixed-point group orders for n = 1..horizon; terms are (exponent, coefficient) pairs.");

    m.def(
        "bernoulli_model",
        [](int alphabet, int quotient_order, const std::string& epsilon) {
            Witness w =
                bernoulli_model(alphabet, cyclic_quotient(quotient_order), parse_rational(epsilon));
            return witness_json(w).dump();
        },
        py::arg("alphabet") = 2, py::arg("quotient_order") = 3, py::arg("epsilon") = "1/2",
        "Bernoulli model over the cyclic quotient, as a witness document.");

    m.def(
        "recurrence_scan",
        [](const std::string& system_doc, const std::string& point_doc, const std::string& epsilon,
           long from, long horizon) {
            SystemDescriptor sys = system_from(parse_doc(system_doc));
            Point x = point_from(parse_doc(point_doc));
            validate_point(sys, x);
            RecurrenceVerdict v = recurrence_scan(sys, x, parse_rational(epsilon), from, horizon);
            return py::make_tuple(v.found, v.n, v.m);
        },
        py::arg("system_doc"), py::arg("point_doc"), py::arg("epsilon"), py::arg("from_") = 1,
        py::arg("horizon") = 64, "Least (n, m) with d(T^n x, T^-m x) < epsilon, as (found, n, m).");

    m.def(
        "berg_report",
        [](const std::string& orbit_doc, int n, long r, long s) {
            BergReport rep = berg_projection(orbit_from(parse_doc(orbit_doc)), n, r, s);
            py::dict d;
            d["u_minus_v"] = rep.u_minus_v;
            d["pv_comm"] = rep.pv_comm;
            d["pu_comm"] = rep.pu_comm;
            d["pf_comm"] = rep.pf_comm;
            return d;
        },
        py::arg("orbit_doc"), py::arg("n"), py::arg("r"), py::arg("s"),
        "Defect norms of the interpolated shift unitary and its invariant projection.");

    m.def(
        "extract_action",
        [](const std::string& tuple_path) {
            MatrixTuple t = load_matrix_tuple(tuple_path);
            Tolerances tol;
            for (const auto& [k, v] : t.tolerances) tol.set(k, v);
            ExtractedAction ex = extract_finite_action(t, tol);
            Json doc = make_document("resfin/action");
            doc["size"] = ex.action.size;
            doc["generators"] = ex.action.generators;
            doc["labels"] = ex.label_of;
            doc["delta"] = ex.delta;
            return doc.dump();
        },
        py::arg("tuple_path"),
        "Finite action recovered from a matrix-tuple file, as an action document.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int rc = run_cli(args, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI invocation in-process; returns (exit_code, stdout, stderr).");
}
