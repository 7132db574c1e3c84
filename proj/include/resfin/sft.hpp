#pragma once

#include <map>
#include <vector>

#include "resfin/system.hpp"

namespace resfin {

// Window admissibility for a z-shift cut out by forbidden words, via the
// transfer graph on (m-1)-blocks. A window is admissible iff it contains no
// forbidden word and extends to a bi-infinite configuration.
struct SubshiftWindows {
    const ZShiftSystem& sys;
    int blk;  // block length m-1; 0 when there are no forbidden words
    std::map<std::vector<int>, int> node_id;
    std::vector<std::vector<int>> node_word;
    std::vector<std::vector<char>> edge;
    std::vector<char> good;  // node lies on a bi-infinite path

    SubshiftWindows(const ZShiftSystem& s, long cap);

    bool contains_forbidden(const std::vector<int>& w) const;
    bool admissible(const std::vector<int>& w) const;
    std::vector<std::vector<int>> windows(long len, long cap) const;

    // A valid configuration whose restriction to [0, len) is the window:
    // extend both ways along the transfer graph into cycles (shortest, then
    // lexicographically least, for determinism).
    EvSeqPoint representative(const std::vector<int>& w) const;

    template <typename F>
    void enumerate_words(std::vector<int>& w, size_t i, F&& emit) const {
        if (i == w.size()) {
            emit(w);
            return;
        }
        for (int a = 0; a < sys.alphabet; ++a) {
            w[i] = a;
            enumerate_words(w, i + 1, emit);
        }
    }
};

}  // namespace resfin
