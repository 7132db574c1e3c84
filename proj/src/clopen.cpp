#include "resfin/clopen.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "resfin/error.hpp"
#include "resfin/sft.hpp"

namespace resfin {

std::vector<Atom> atoms_at(const SystemDescriptor& sys, int window, const DensityGridCaps& caps) {
    if (window < 0) throw Error(errk::Mismatch, "window must be nonnegative");
    std::vector<Atom> out;
    if (auto* s = std::get_if<FiniteSampleSystem>(&sys)) {
        for (int i = 0; i < s->n; ++i) {
            Atom a;
            a.sample = i;
            out.push_back(a);
        }
    } else if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        SubshiftWindows sw(*z, caps.max_patterns);
        for (auto& w : sw.windows(window, caps.max_patterns)) {
            Atom a;
            a.zwin = w;
            out.push_back(a);
        }
    } else if (auto* f = std::get_if<FrShiftSystem>(&sys)) {
        auto words = ball(f->rank, window);
        long count = 1;
        for (size_t i = 0; i < words.size(); ++i) {
            count *= f->alphabet;
            if (count > caps.max_patterns) throw Error(errk::ResolutionOverflow, "atom grid too large");
        }
        std::vector<int> pat(words.size(), 0);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == pat.size()) {
                Atom a;
                a.frwin = pat;
                out.push_back(a);
                return;
            }
            for (int c = 0; c < f->alphabet; ++c) {
                pat[i] = c;
                rec(i + 1);
            }
        };
        rec(0);
    } else if (auto* bd = std::get_if<FrBoundarySystem>(&sys)) {
        auto words = sphere(bd->rank, window);
        if (long(words.size()) > caps.max_patterns)
            throw Error(errk::ResolutionOverflow, "atom grid too large");
        for (auto& v : words) {
            Atom a;
            a.bword = v;
            out.push_back(a);
        }
    } else if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        std::set<int> listed;
        for (int cp = 0; cp < c->copies; ++cp) {
            for (long n = 0; n <= window; ++n) {
                Atom a;
                a.cz_copy = cp;
                a.cz_pos = n;
                out.push_back(a);
            }
            int hi = c->class_of(cp, +1);
            if (listed.insert(hi).second) {
                Atom a;
                a.cz_tail = true;
                a.cz_cls = hi;
                out.push_back(a);
            }
            for (long n = -1; n >= -window; --n) {
                Atom a;
                a.cz_copy = cp;
                a.cz_pos = n;
                out.push_back(a);
            }
            int lo = c->class_of(cp, -1);
            if (listed.insert(lo).second) {
                Atom a;
                a.cz_tail = true;
                a.cz_cls = lo;
                out.push_back(a);
            }
        }
    } else {
        throw Error(errk::NonEvaluable, "atoms: unsupported kind");
    }
    return out;
}

std::string atom_label(const SystemDescriptor& sys, const Atom& a) {
    if (std::holds_alternative<FiniteSampleSystem>(sys)) return "x" + std::to_string(a.sample);
    if (std::holds_alternative<ZShiftSystem>(sys)) {
        std::string s = "[";
        for (int c : a.zwin) s += std::to_string(c);
        return s + "]";
    }
    if (std::holds_alternative<FrShiftSystem>(sys)) {
        std::string s = "[";
        for (int c : a.frwin) s += std::to_string(c);
        return s + "]";
    }
    if (std::holds_alternative<FrBoundarySystem>(sys)) return "C(" + word_str(a.bword) + ")";
    if (std::holds_alternative<CompactifiedZSystem>(sys)) {
        if (a.cz_tail) return "tail#" + std::to_string(a.cz_cls);
        return "c" + std::to_string(a.cz_copy) + ":" + std::to_string(a.cz_pos);
    }
    throw Error(errk::NonEvaluable, "atoms: unsupported kind");
}

bool atom_contains(const SystemDescriptor& sys, int window, const Atom& a, const Point& p) {
    if (std::holds_alternative<FiniteSampleSystem>(sys))
        return std::get<SamplePoint>(p).index == a.sample;
    if (std::holds_alternative<ZShiftSystem>(sys)) {
        const auto& e = std::get<EvSeqPoint>(p);
        for (int i = 0; i < window; ++i)
            if (e.at(i) != a.zwin[i]) return false;
        return true;
    }
    if (auto* f = std::get_if<FrShiftSystem>(&sys)) {
        const auto& q = std::get<QuotientPoint>(p);
        auto words = ball(f->rank, window);
        for (size_t k = 0; k < words.size(); ++k)
            if (q.at(words[k]) != a.frwin[k]) return false;
        return true;
    }
    if (std::holds_alternative<FrBoundarySystem>(sys)) {
        const auto& b = std::get<BoundaryPoint>(p);
        for (size_t i = 0; i < a.bword.letters.size(); ++i)
            if (b.at(int(i)) != a.bword.letters[i]) return false;
        return true;
    }
    if (auto* c = std::get_if<CompactifiedZSystem>(&sys)) {
        const auto& z = std::get<CompactZPoint>(p);
        if (!a.cz_tail) return !z.at_class && z.copy == a.cz_copy && z.pos == a.cz_pos;
        if (z.at_class) return z.cls == a.cz_cls;
        for (auto& [cp, sg] : c->classes[a.cz_cls])
            if (cp == z.copy && sg * z.pos > window) return true;
        return false;
    }
    throw Error(errk::NonEvaluable, "atoms: unsupported kind");
}

Point atom_representative(const SystemDescriptor& sys, int window, const Atom& a) {
    (void)window;
    if (std::holds_alternative<FiniteSampleSystem>(sys)) return SamplePoint{a.sample};
    if (auto* z = std::get_if<ZShiftSystem>(&sys)) {
        SubshiftWindows sw(*z, DensityGridCaps{}.max_patterns);
        return sw.representative(a.zwin);
    }
    if (std::holds_alternative<FrBoundarySystem>(sys)) {
        Word per;
        per.letters = {a.bword.empty() ? 1 : a.bword.letters.back()};
        return BoundaryPoint{a.bword, per};
    }
    if (std::holds_alternative<CompactifiedZSystem>(sys)) {
        if (a.cz_tail) return CompactZPoint{true, a.cz_cls, 0, 0};
        return CompactZPoint{false, 0, a.cz_copy, a.cz_pos};
    }
    throw Error(errk::NonEvaluable, "no representative for this kind");
}

ClopenSet clopen_union(const ClopenSet& a, const ClopenSet& b) {
    if (a.window != b.window) throw Error(errk::Mismatch, "window mismatch");
    ClopenSet out{a.window, {}};
    std::set_union(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                   std::back_inserter(out.atoms));
    return out;
}

ClopenSet clopen_intersect(const ClopenSet& a, const ClopenSet& b) {
    if (a.window != b.window) throw Error(errk::Mismatch, "window mismatch");
    ClopenSet out{a.window, {}};
    std::set_intersection(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                          std::back_inserter(out.atoms));
    return out;
}

ClopenSet clopen_complement(const SystemDescriptor& sys, const ClopenSet& a,
                            const DensityGridCaps& caps) {
    int n = int(atoms_at(sys, a.window, caps).size());
    ClopenSet out{a.window, {}};
    size_t k = 0;
    for (int i = 0; i < n; ++i) {
        if (k < a.atoms.size() && a.atoms[k] == i)
            ++k;
        else
            out.atoms.push_back(i);
    }
    return out;
}

ClopenSet clopen_refine(const SystemDescriptor& sys, const ClopenSet& a, int window,
                        const DensityGridCaps& caps) {
    if (window < a.window) throw Error(errk::Mismatch, "refinement must not coarsen");
    if (window == a.window) return a;
    auto coarse = atoms_at(sys, a.window, caps);
    auto fine = atoms_at(sys, window, caps);
    ClopenSet out{window, {}};
    for (int j = 0; j < int(fine.size()); ++j) {
        Point rep = atom_representative(sys, window, fine[j]);
        for (int id : a.atoms)
            if (atom_contains(sys, a.window, coarse[id], rep)) {
                out.atoms.push_back(j);
                break;
            }
    }
    return out;
}

bool clopen_before(const ClopenSet& a, const ClopenSet& b) {
    size_t n = std::min(a.atoms.size(), b.atoms.size());
    for (size_t i = 0; i < n; ++i)
        if (a.atoms[i] != b.atoms[i]) return a.atoms[i] < b.atoms[i];
    return a.atoms.size() < b.atoms.size();
}

}  // namespace resfin
