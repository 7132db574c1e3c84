#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resfin/system.hpp"
#include "resfin/word.hpp"

namespace resfin {

// One atom of the clopen algebra of a system at a fixed resolution window.
// Exactly one group of fields is meaningful, matching the system kind.
struct Atom {
    std::vector<int> zwin;  // z-shift: letters on positions [0, window)
    Word bword;             // fr-boundary: cylinder prefix (length = window)
    std::vector<int> frwin;  // fr-shift: labels over ball(rank, window)
    int sample = -1;        // finite-sample singleton

    bool cz_tail = false;  // compactified-z: class tail atom vs singleton
    int cz_cls = 0;
    int cz_copy = 0;
    long cz_pos = 0;
};

// Atoms in canonical order. For compactified systems the order walks each
// copy as 0,1,...,W, +inf tail, -1,...,-W, -inf tail (tail atoms listed once,
// at their first incident copy); this follows the forward orbit so that
// prefixes of the order are unions the translation pushes forward.
std::vector<Atom> atoms_at(const SystemDescriptor& sys, int window,
                           const DensityGridCaps& caps = {});

std::string atom_label(const SystemDescriptor& sys, const Atom& a);

// Does the (admissible) atom contain the point?
bool atom_contains(const SystemDescriptor& sys, int window, const Atom& a, const Point& p);

// A representative point inside the atom (used to turn cylinder data back
// into point representations).
Point atom_representative(const SystemDescriptor& sys, int window, const Atom& a);

// Union of atoms at a window, stored as a sorted id list.
struct ClopenSet {
    int window = 0;
    std::vector<int> atoms;  // indices into atoms_at(sys, window), sorted

    bool operator==(const ClopenSet&) const = default;
};

ClopenSet clopen_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet clopen_intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet clopen_complement(const SystemDescriptor& sys, const ClopenSet& a,
                            const DensityGridCaps& caps = {});

// Re-express at a finer window (every coarse atom splits into finer ones).
ClopenSet clopen_refine(const SystemDescriptor& sys, const ClopenSet& a, int window,
                        const DensityGridCaps& caps = {});

// Sorted-id-sequence order: shorter prefix first, then entrywise.
bool clopen_before(const ClopenSet& a, const ClopenSet& b);

}  // namespace resfin
