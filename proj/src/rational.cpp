#include "outertrack/rational.hpp"

namespace outertrack {

std::string rat_to_string(const Rat& q) {
    Int n = num(q), d = den(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(n, d);
}

std::string int_to_string(const Int& v) { return v.str(); }

Int int_from_string(const std::string& s) { return Int(s); }

std::string frac_to_string(const Frac& f) { return rat_to_string(f.to_rat()); }

int Frac::cmp(const Frac& o) const {
    if (num == 0) return o.num == 0 ? 0 : -1;
    if (o.num == 0) return 1;
    // bit-length shortcut: msb(a*d) is msb(a)+msb(d) or one more
    std::size_t lhs = boost::multiprecision::msb(num) + boost::multiprecision::msb(o.den);
    std::size_t rhs = boost::multiprecision::msb(o.num) + boost::multiprecision::msb(den);
    if (lhs + 1 < rhs) return -1;
    if (rhs + 1 < lhs) return 1;
    Int l = num * o.den, r = o.num * den;
    return l < r ? -1 : (l == r ? 0 : 1);
}

}  // namespace outertrack
