#ifndef OUTERTRACK_RATIONAL_HPP
#define OUTERTRACK_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace outertrack {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

// 2^k for k of either sign.
inline Rat pow2(long k) {
    Int one = 1;
    if (k >= 0) return Rat(one << k);
    return Rat(one, one << (-k));
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Exact rationals serialize as "p/q"; integers as plain decimal.
std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

std::string int_to_string(const Int& v);
Int int_from_string(const std::string& s);

// Nonnegative exact fraction kept unnormalized: certificates and game values
// reach hundreds of thousands of digits, where a single gcd costs more than
// the entire rest of the run. Comparisons cross-multiply, with a bit-length
// shortcut that settles all but near-ties without any big multiplication.
struct Frac {
    Int num, den;

    Frac() : num(0), den(1) {}
    Frac(const Int& n) : num(n), den(1) { require_nonneg(); }
    Frac(long n) : num(n), den(1) { require_nonneg(); }
    Frac(const Int& n, const Int& d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("fraction with zero denominator");
        require_nonneg();
    }
    static Frac from_rat(const Rat& q) {
        return Frac(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
    }

    Rat to_rat() const { return Rat(num, den); }
    bool is_zero() const { return num == 0; }

    Frac operator*(const Frac& o) const { return Frac(num * o.num, den * o.den); }
    Frac operator+(const Frac& o) const { return Frac(num * o.den + o.num * den, den * o.den); }
    Frac operator/(const Frac& o) const {
        if (o.num == 0) throw std::invalid_argument("fraction division by zero");
        return Frac(num * o.den, den * o.num);
    }

    // -1, 0, +1 against another nonnegative fraction.
    int cmp(const Frac& o) const;

    bool operator<(const Frac& o) const { return cmp(o) < 0; }
    bool operator<=(const Frac& o) const { return cmp(o) <= 0; }
    bool operator>(const Frac& o) const { return cmp(o) > 0; }
    bool operator>=(const Frac& o) const { return cmp(o) >= 0; }
    bool operator==(const Frac& o) const { return cmp(o) == 0; }
    bool operator!=(const Frac& o) const { return cmp(o) != 0; }

private:
    void require_nonneg() const {
        if (num < 0 || den < 0) throw std::invalid_argument("Frac is nonnegative only");
    }
};

inline Frac frac_max(const Frac& a, const Frac& b) { return a < b ? b : a; }

// Normalized "p/q" form (one gcd; avoid in hot paths).
std::string frac_to_string(const Frac& f);

// 2^k as a fraction, either sign of k.
inline Frac fpow2(long k) {
    Int one = 1;
    if (k >= 0) return Frac(one << k);
    return Frac(one, one << (-k));
}

}  // namespace outertrack

#endif
