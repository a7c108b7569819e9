// rational.hpp -- exact rational scalars (GMP) and small helpers.
#ifndef MKDV_RATIONAL_HPP
#define MKDV_RATIONAL_HPP

#include <gmpxx.h>
#include <string>

namespace mkdv {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double rat_double(const Rat& q) { return q.get_d(); }

} // namespace mkdv

#endif
