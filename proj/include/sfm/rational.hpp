// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace sfm {

using Rat = mpq_class;
using QVec = std::vector<Rat>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "p/q" or "p"; used by all file formats.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw Error("empty rational literal");
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error("bad rational literal: " + s);
  }
}

inline std::string format_rat(const Rat& r) {
  return r.get_str();
}

inline Rat rat_of(long long v) { return Rat(static_cast<long>(v)); }

inline long long rat_to_ll(const Rat& r) {
  if (r.get_den() != 1) throw Error("rat_to_ll: not an integer");
  if (!r.get_num().fits_slong_p()) throw Error("rat_to_ll: out of range");
  return r.get_num().get_si();
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline bool is_half_integral(const Rat& r) {
  Rat two_r = r * 2;
  return two_r.get_den() == 1;
}

inline Rat dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

}  // namespace sfm
