#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resfin/berg.hpp"
#include "resfin/clopen.hpp"
#include "resfin/matrix_approx.hpp"
#include "resfin/measure_model.hpp"
#include "resfin/paradox.hpp"
#include "resfin/system.hpp"
#include "resfin/witness.hpp"
#include "resfin/zsystems.hpp"

namespace resfin {

// Key order is part of the byte format: equal manifests must reproduce equal
// artifacts, so every document goes through ordered_json.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "resfin 0.1.0";
inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Run manifests. Every emitted artifact embeds one.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::uint64_t>> inputs;  // (name, content digest)
    long seed = 0;
    std::map<std::string, std::string> tolerance_overrides;
    std::string version = kToolVersion;

    void add_input(const std::string& path);  // digests the file content
};

Json manifest_json(const RunManifest& m);
std::uint64_t content_digest(const std::string& bytes);

// ---------------------------------------------------------------------------
// Raw file helpers.
// ---------------------------------------------------------------------------

std::string read_text_file(const std::string& path);   // ParseError if unreadable
void write_text_file(const std::string& path, const std::string& content);

// Parse + require {"format": <format>, "version": supported}. ParseError on
// malformed JSON or format mismatch, UnsupportedVersion on version drift.
Json load_document(const std::string& path, const std::string& format);
Json make_document(const std::string& format);

// ---------------------------------------------------------------------------
// JSON encodings. Rationals travel as exact "p/q" strings.
// ---------------------------------------------------------------------------

Json rational_json(const Rational& r);
Rational rational_from(const Json& j, const std::string& field);

Json word_json(const Word& w);
Word word_from(const Json& j, const std::string& field);

Json system_json(const SystemDescriptor& sys);
SystemDescriptor system_from(const Json& j);

Json point_json(const Point& p);
Point point_from(const Json& j);

Json action_json(const FiniteAction& a);
FiniteAction action_from(const Json& j);

Json group_ring_json(const GroupRingElement& f);
GroupRingElement group_ring_from(const Json& j);

// Witness documents carry everything needed to re-check them from scratch;
// the stored defects are advisory and recomputed on load.
Json witness_json(const Witness& w);
Witness witness_from(const Json& j);

Json clopen_json(const ClopenSet& c);
ClopenSet clopen_from(const Json& j);

// ---------------------------------------------------------------------------
// Bounded contexts and their certificates. Artifacts store the recipe (system
// or action plus window and translators) so a verifier can rebuild the
// context fresh and check the claim against it.
// ---------------------------------------------------------------------------

struct ContextDescription {
    std::optional<SystemDescriptor> system;  // atoms of a system at `window`
    std::optional<FiniteAction> action;      // or the points of a finite action
    int window = 1;
    std::vector<Word> translators;
};

Json context_json(const ContextDescription& c);
ContextDescription context_from(const Json& j);
ActionContext rebuild_context(const ContextDescription& c, const DensityGridCaps& caps = {});

Json paradox_certificate_json(const ParadoxCertificate& cert);
ParadoxCertificate paradox_certificate_from(const Json& j);

Json measure_certificate_json(const InvariantMeasureCertificate& cert);
InvariantMeasureCertificate measure_certificate_from(const Json& j);

// ---------------------------------------------------------------------------
// Spec'd entry point: parse and validate a system description file.
// ---------------------------------------------------------------------------

SystemDescriptor parse_system_file(const std::string& path);

// ---------------------------------------------------------------------------
// Matrix tuples: JSON header plus a dense binary sidecar (magic "RFMX0001",
// then u64 counts and row-major complex<double> entries).
// ---------------------------------------------------------------------------

void save_matrix_tuple(const std::string& json_path, const MatrixTuple& t,
                       const RunManifest* manifest = nullptr);
MatrixTuple load_matrix_tuple(const std::string& json_path);

Json orbit_json(const OrbitRepresentation& o);
OrbitRepresentation orbit_from(const Json& j);

}  // namespace resfin
