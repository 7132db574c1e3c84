#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "resfin/error.hpp"

namespace resfin {

// Reduced words in the free group on r generators. Letters are +-(i+1) for
// generator i; a word is reduced iff no adjacent pair sums to zero.
struct Word {
    std::vector<int> letters;

    bool empty() const { return letters.empty(); }
    int length() const { return int(letters.size()); }

    bool operator==(const Word& o) const = default;
    // Length-then-lexicographic order; letter order a < a^-1 < b < b^-1 < ...
    bool operator<(const Word& o) const {
        if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
        auto key = [](int l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; };
        for (size_t i = 0; i < letters.size(); ++i)
            if (letters[i] != o.letters[i]) return key(letters[i]) < key(o.letters[i]);
        return false;
    }
};

inline Word reduce(std::vector<int> ls) {
    std::vector<int> out;
    for (int l : ls) {
        if (l == 0) throw Error(errk::ParseError, "zero letter in word");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return Word{std::move(out)};
}

inline Word wmul(const Word& a, const Word& b) {
    std::vector<int> ls = a.letters;
    ls.insert(ls.end(), b.letters.begin(), b.letters.end());
    return reduce(std::move(ls));
}

inline Word winv(const Word& a) {
    std::vector<int> ls(a.letters.rbegin(), a.letters.rend());
    for (int& l : ls) l = -l;
    return Word{std::move(ls)};
}

// Text form: generator i is 'a'+i, its inverse the uppercase letter.
inline std::string word_str(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w.letters) s += char((l > 0 ? 'a' + l : 'A' - l) - 1);
    return s;
}

inline Word parse_word(const std::string& s, int rank) {
    if (s == "e" || s.empty()) return Word{};
    std::vector<int> ls;
    for (char c : s) {
        int l;
        if (c >= 'a' && c < 'a' + rank)
            l = c - 'a' + 1;
        else if (c >= 'A' && c < 'A' + rank)
            l = -(c - 'A' + 1);
        else
            throw Error(errk::ParseError, std::string("bad word letter '") + c + "'");
        ls.push_back(l);
    }
    Word w = reduce(ls);
    if (int(w.letters.size()) != int(s.size()))
        throw Error(errk::ParseError, "word '" + s + "' is not reduced");
    return w;
}

// All reduced words of length exactly n (n >= 0), in the canonical order.
inline std::vector<Word> sphere(int rank, int n) {
    std::vector<Word> cur{Word{}};
    for (int d = 0; d < n; ++d) {
        std::vector<Word> next;
        for (const Word& w : cur)
            for (int i = 1; i <= rank; ++i)
                for (int sgn : {+1, -1}) {
                    int l = sgn * i;
                    if (!w.letters.empty() && w.letters.back() == -l) continue;
                    Word e = w;
                    e.letters.push_back(l);
                    next.push_back(std::move(e));
                }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

// All reduced words of length <= n, sorted.
inline std::vector<Word> ball(int rank, int n) {
    std::vector<Word> out;
    for (int d = 0; d <= n; ++d) {
        auto s = sphere(rank, d);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

}  // namespace resfin
