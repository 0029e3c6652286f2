#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "sak/error.hpp"

namespace sak {

using Int = mpz_class;
using Rat = mpq_class;

// Parses "p", "-p", "p/q" with arbitrary-precision p, q.  q = 0 is a schema error.
inline Rat parse_rat(const std::string& s, const std::string& where = {}) {
    if (s.empty()) fail(Module::cli, ErrorKind::schema, "empty rational literal", where);
    mpq_t q;
    mpq_init(q);
    if (mpq_set_str(q, s.c_str(), 10) != 0) {
        mpq_clear(q);
        fail(Module::cli, ErrorKind::schema, "unparsable rational '" + s + "'", where);
    }
    if (mpz_sgn(mpq_denref(q)) == 0) {
        mpq_clear(q);
        fail(Module::cli, ErrorKind::schema, "zero denominator in '" + s + "'", where);
    }
    Rat r(q);
    mpq_clear(q);
    r.canonicalize();
    return r;
}

inline std::string format_rat(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// lcm of denominators; 1 for an empty range
inline Int common_denominator(const std::vector<Rat>& v) {
    Int d = 1;
    for (const auto& r : v) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), r.get_den().get_mpz_t());
    return d;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline Int int_pow(Int base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = base;
    if (e < 0) {
        if (b == 0) fail(Module::cli, ErrorKind::domain, "0 raised to negative power");
        b = 1 / b;
        e = -e;
    }
    Rat acc(1);
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

}  // namespace sak
