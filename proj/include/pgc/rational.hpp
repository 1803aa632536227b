#ifndef PGC_RATIONAL_HPP
#define PGC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "pgc/errors.hpp"

namespace pgc {

// Exact rational scalar used throughout. All coordinate arithmetic in this
// library is exact; no floating point enters any invariant or comparison.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw ValidationError("unparsable rational: " + s);
    if (q.get_den() == 0) throw ValidationError("rational with zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) {
    return q.get_str();
}

inline Rat rat_sum(const std::vector<Rat>& v) {
    Rat s = 0;
    for (const Rat& q : v) s += q;
    return s;
}

// Scales a positive vector so it sums to one.
inline std::vector<Rat> projectivize(const std::vector<Rat>& v) {
    Rat s = rat_sum(v);
    if (s <= 0) throw ValidationError("projectivize: nonpositive total");
    std::vector<Rat> out;
    out.reserve(v.size());
    for (const Rat& q : v) out.push_back(Rat(q / s));
    return out;
}

} // namespace pgc

#endif
