#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resfin/clopen.hpp"
#include "resfin/lp.hpp"
#include "resfin/system.hpp"
#include "resfin/witness.hpp"
#include "resfin/word.hpp"

namespace resfin {

// Bounded context for paradoxicality and invariant-measure questions. Pieces
// are unions of base atoms; all pointwise checks happen on refined atoms,
// chosen fine enough that every translator image of a base atom is exactly a
// union of refined atoms. Answers are always relative to this context.
struct ActionContext {
    int base_count = 0;
    int refined_count = 0;
    std::vector<std::vector<int>> refinement;          // base id -> refined ids
    std::vector<Word> translators;                     // reduced, deduplicated
    std::vector<std::vector<std::vector<int>>> image;  // [translator][base] -> refined ids
    std::vector<std::string> base_labels, refined_labels;
    std::uint64_t context_hash = 0;

    std::string bound_description;  // window / translator bound, for reporting
};

// Context over the clopen atoms of a symbolic or compactified system at a
// window. ContextOverflow on cap violations, NonInvertible when a translator
// cannot act exactly.
ActionContext make_context(const SystemDescriptor& sys, int window,
                           const std::vector<Word>& translators,
                           const DensityGridCaps& caps = {});

// Context whose atoms are the points of a finite action.
ActionContext make_context_finite(const FiniteAction& action, const std::vector<Word>& translators);

// (k,l)-paradoxicality certificate: pieces (base atom, translator), possibly
// repeated, with sum 1_{A_i} >= k 1_A and sum 1_{s_i A_i} <= l 1_A pointwise
// on refined atoms.
struct ParadoxCertificate {
    std::uint64_t context_hash = 0;
    std::vector<int> target;                  // A as sorted base atom ids
    std::vector<std::pair<int, int>> pieces;  // (base atom id, translator id)
    int k = 0, l = 0;
};

// Exact bounded-context decision: lexicographically least certificate over
// per-piece multiplicities, or nullopt when none exists at this context
// (which never claims global nonparadoxicality). Integer search is
// depth-first in canonical piece order, values ascending, pruned by running
// capacity bounds and by exact LP relaxation.
std::optional<ParadoxCertificate> decide_paradoxical(const ActionContext& ctx,
                                                     const std::vector<int>& target, int k, int l);

// Pure pointwise recomputation of the two multiplicity inequalities.
// StaleContext when the certificate does not refer to ctx.
bool verify_certificate(const ActionContext& ctx, const ParadoxCertificate& cert);

// Nonnegative rational weights on refined atoms with mu(s a) = mu(a) for
// every base atom and translator, normalized by mu(A) = 1.
struct InvariantMeasureCertificate {
    std::uint64_t context_hash = 0;
    std::vector<int> target;
    std::vector<Rational> weights;  // per refined atom
};

std::optional<InvariantMeasureCertificate> invariant_measure_lp(const ActionContext& ctx,
                                                                const std::vector<int>& target);

Rational measure_of(const ActionContext& ctx, const InvariantMeasureCertificate& cert,
                    const std::vector<int>& base_ids);

// Piece matching realizing [P] = [Q] in the bounded type semigroup: every
// base atom of P is assigned one translator so the images tile Q's refined
// atoms exactly. Identity-first depth-first search; lexicographically least
// assignment, or nullopt.
struct PieceMatching {
    std::uint64_t context_hash = 0;
    std::vector<std::pair<int, int>> assignment;  // (base atom of P, translator id)
};

std::optional<PieceMatching> equidecompose(const ActionContext& ctx, const std::vector<int>& P,
                                           const std::vector<int>& Q);

}  // namespace resfin
