// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfm/rational.hpp"

namespace sfm {

// Element of the diamond M_k, encoded 0 = Bottom, 1..k = Atom(i), k+1 = Top.
struct DiamondElement {
  int k = 3;
  int code = 0;

  static DiamondElement bottom(int k) { return {k, 0}; }
  static DiamondElement top(int k) { return {k, k + 1}; }
  static DiamondElement atom(int k, int index);  // index in 1..k

  bool is_bottom() const { return code == 0; }
  bool is_top() const { return code == k + 1; }
  bool is_atom() const { return code >= 1 && code <= k; }
  int atom_index() const;  // usage error unless is_atom()

  // coordinate rank: 0 / 1 / 2
  int rank() const { return is_bottom() ? 0 : (is_top() ? 2 : 1); }

  bool operator==(const DiamondElement& o) const {
    return k == o.k && code == o.code;
  }
  bool operator!=(const DiamondElement& o) const { return !(*this == o); }
};

DiamondElement meet(const DiamondElement& x, const DiamondElement& y);
DiamondElement join(const DiamondElement& x, const DiamondElement& y);
bool leq(const DiamondElement& x, const DiamondElement& y);

std::string element_to_string(const DiamondElement& e);           // "0","1","a3"
DiamondElement element_from_string(const std::string& s, int k);  // throws Error

// Point of the product M_k^n (coordinatewise order).
struct LatticeTuple {
  int k = 3;
  std::vector<int> codes;  // length n, same encoding as DiamondElement::code

  int n() const { return static_cast<int>(codes.size()); }

  static LatticeTuple all_bottom(int n, int k) {
    return {k, std::vector<int>(static_cast<size_t>(n), 0)};
  }
  static LatticeTuple all_top(int n, int k) {
    return {k, std::vector<int>(static_cast<size_t>(n), k + 1)};
  }
  // t_{i,a}: atom a at coordinate i (0-based), Bottom elsewhere
  static LatticeTuple unit(int n, int k, int i, int atom);

  DiamondElement at(int i) const { return {k, codes[static_cast<size_t>(i)]}; }
  LatticeTuple with(int i, int code) const {
    LatticeTuple t = *this;
    t.codes[static_cast<size_t>(i)] = code;
    return t;
  }

  bool operator==(const LatticeTuple& o) const {
    return k == o.k && codes == o.codes;
  }
  bool operator!=(const LatticeTuple& o) const { return !(*this == o); }
  // arbitrary total order, for use as map keys
  bool operator<(const LatticeTuple& o) const {
    if (k != o.k) return k < o.k;
    return codes < o.codes;
  }
};

LatticeTuple meet(const LatticeTuple& s, const LatticeTuple& t);
LatticeTuple join(const LatticeTuple& s, const LatticeTuple& t);
bool leq(const LatticeTuple& s, const LatticeTuple& t);
int rank(const LatticeTuple& t);

// v_i: first i coordinates Top, the rest Bottom
LatticeTuple chain_prefix(int n, int k, int i);

std::string tuple_to_string(const LatticeTuple& t);  // "a1,0,1"
LatticeTuple tuple_from_string(const std::string& s, int n, int k);

// Index of t in enumeration order (coordinate-major, element order
// Bottom < Atom(1) < ... < Atom(k) < Top); the inverse of tuple_at.
std::uint64_t tuple_index(const LatticeTuple& t);
LatticeTuple tuple_at(std::uint64_t idx, int n, int k);
std::uint64_t tuple_space_size(int n, int k);  // (k+2)^n, overflow-checked

// Yields all (k+2)^n tuples in enumeration order. Budget guards dense paths.
void enumerate_tuples(int n, int k, const std::function<void(const LatticeTuple&)>& fn,
                      std::uint64_t budget = 0);

// All t with a <= t <= b, in enumeration order of the free positions.
void interval(const LatticeTuple& a, const LatticeTuple& b,
              const std::function<void(const LatticeTuple&)>& fn);

}  // namespace sfm
