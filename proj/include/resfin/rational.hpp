#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace resfin {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical text form "p/q" (q omitted when 1), used by every file format.
inline std::string rat_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline Rational parse_rational(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("bad rational '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            // Accept plain integers and decimal literals like "1.25e-3".
            auto dot = s.find_first_of(".eE");
            if (dot == std::string::npos) return Rational(Int(s));
            double probe = std::stod(s);  // validates syntax
            (void)probe;
            std::string mant = s;
            long exp10 = 0;
            auto e = s.find_first_of("eE");
            if (e != std::string::npos) {
                exp10 = std::stol(s.substr(e + 1));
                mant = s.substr(0, e);
            }
            bool neg = !mant.empty() && mant[0] == '-';
            if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) mant = mant.substr(1);
            auto d = mant.find('.');
            std::string digits = d == std::string::npos ? mant : mant.substr(0, d) + mant.substr(d + 1);
            if (digits.empty()) bad();
            long frac = d == std::string::npos ? 0 : long(mant.size() - d - 1);
            Int num(digits);
            if (neg) num = -num;
            Int den = 1;
            long net = exp10 - frac;
            for (long i = 0; i < (net < 0 ? -net : net); ++i) (net < 0 ? den : num) *= 10;
            return Rational(num, den);
        }
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) bad();
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        bad();
    }
    return Rational();  // unreachable
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Distance on Q/Z: ||x|| = min(frac(x), 1 - frac(x)).
inline Rational circle_dist(const Rational& a, const Rational& b) {
    Rational d = a - b;
    Int fl = floor_div(numerator(d), denominator(d));
    d -= fl;  // now 0 <= d < 1
    return d > Rational(1, 2) ? Rational(1 - d) : d;
}

// Reduce x into [0,1).
inline Rational mod1(const Rational& x) {
    Rational r = x - Rational(floor_div(numerator(x), denominator(x)));
    return r;
}

}  // namespace resfin
