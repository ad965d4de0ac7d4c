// SPDX-License-Identifier: Apache-2.0
#include "sfm/lattice.hpp"

#include <cassert>
#include <cstdlib>

namespace sfm {

static void check_k(int k) {
  if (k < 3) throw Error("diamond requires k >= 3");
}

DiamondElement DiamondElement::atom(int k, int index) {
  check_k(k);
  if (index < 1 || index > k) throw Error("atom index out of range");
  return {k, index};
}

int DiamondElement::atom_index() const {
  if (!is_atom()) throw Error("atom_index on non-atom");
  return code;
}

static void check_same_k(int ka, int kb) {
  if (ka != kb) throw Error("mixed diamond sizes k");
}

DiamondElement meet(const DiamondElement& x, const DiamondElement& y) {
  check_same_k(x.k, y.k);
  if (x.code == y.code) return x;
  if (x.is_top()) return y;
  if (y.is_top()) return x;
  return DiamondElement::bottom(x.k);  // distinct atoms, or one Bottom
}

DiamondElement join(const DiamondElement& x, const DiamondElement& y) {
  check_same_k(x.k, y.k);
  if (x.code == y.code) return x;
  if (x.is_bottom()) return y;
  if (y.is_bottom()) return x;
  return DiamondElement::top(x.k);
}

bool leq(const DiamondElement& x, const DiamondElement& y) {
  check_same_k(x.k, y.k);
  return meet(x, y) == x;
}

std::string element_to_string(const DiamondElement& e) {
  if (e.is_bottom()) return "0";
  if (e.is_top()) return "1";
  return "a" + std::to_string(e.code);
}

DiamondElement element_from_string(const std::string& s, int k) {
  check_k(k);
  if (s == "0") return DiamondElement::bottom(k);
  if (s == "1") return DiamondElement::top(k);
  if (s.size() >= 2 && s[0] == 'a') {
    char* end = nullptr;
    long idx = std::strtol(s.c_str() + 1, &end, 10);
    if (end && *end == '\0' && idx >= 1 && idx <= k)
      return DiamondElement::atom(k, static_cast<int>(idx));
  }
  throw Error("bad element literal: \"" + s + "\"");
}

LatticeTuple LatticeTuple::unit(int n, int k, int i, int atom) {
  if (i < 0 || i >= n) throw Error("unit: coordinate out of range");
  LatticeTuple t = all_bottom(n, k);
  t.codes[static_cast<size_t>(i)] = DiamondElement::atom(k, atom).code;
  return t;
}

LatticeTuple meet(const LatticeTuple& s, const LatticeTuple& t) {
  check_same_k(s.k, t.k);
  if (s.n() != t.n()) throw Error("tuple length mismatch");
  LatticeTuple r = s;
  for (int i = 0; i < s.n(); ++i) r.codes[static_cast<size_t>(i)] = meet(s.at(i), t.at(i)).code;
  return r;
}

LatticeTuple join(const LatticeTuple& s, const LatticeTuple& t) {
  check_same_k(s.k, t.k);
  if (s.n() != t.n()) throw Error("tuple length mismatch");
  LatticeTuple r = s;
  for (int i = 0; i < s.n(); ++i) r.codes[static_cast<size_t>(i)] = join(s.at(i), t.at(i)).code;
  return r;
}

bool leq(const LatticeTuple& s, const LatticeTuple& t) {
  check_same_k(s.k, t.k);
  if (s.n() != t.n()) throw Error("tuple length mismatch");
  for (int i = 0; i < s.n(); ++i)
    if (!leq(s.at(i), t.at(i))) return false;
  return true;
}

int rank(const LatticeTuple& t) {
  int r = 0;
  for (int i = 0; i < t.n(); ++i) r += t.at(i).rank();
  return r;
}

LatticeTuple chain_prefix(int n, int k, int i) {
  if (i < 0 || i > n) throw Error("chain_prefix: i out of range");
  LatticeTuple t = LatticeTuple::all_bottom(n, k);
  for (int j = 0; j < i; ++j) t.codes[static_cast<size_t>(j)] = k + 1;
  return t;
}

std::string tuple_to_string(const LatticeTuple& t) {
  std::string s;
  for (int i = 0; i < t.n(); ++i) {
    if (i) s += ',';
    s += element_to_string(t.at(i));
  }
  return s;
}

LatticeTuple tuple_from_string(const std::string& s, int n, int k) {
  LatticeTuple t{k, {}};
  size_t pos = 0;
  while (true) {
    size_t comma = s.find(',', pos);
    std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    t.codes.push_back(element_from_string(part, k).code);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (t.n() != n) throw Error("tuple \"" + s + "\" has wrong length");
  return t;
}

// Enumeration order: the LAST coordinate varies fastest, element order
// Bottom < Atom(1) < ... < Atom(k) < Top (i.e. mixed-radix with the first
// coordinate most significant).
std::uint64_t tuple_index(const LatticeTuple& t) {
  std::uint64_t idx = 0;
  const std::uint64_t base = static_cast<std::uint64_t>(t.k) + 2;
  for (int i = 0; i < t.n(); ++i) idx = idx * base + static_cast<std::uint64_t>(t.codes[static_cast<size_t>(i)]);
  return idx;
}

LatticeTuple tuple_at(std::uint64_t idx, int n, int k) {
  LatticeTuple t{k, std::vector<int>(static_cast<size_t>(n), 0)};
  const std::uint64_t base = static_cast<std::uint64_t>(k) + 2;
  for (int i = n - 1; i >= 0; --i) {
    t.codes[static_cast<size_t>(i)] = static_cast<int>(idx % base);
    idx /= base;
  }
  if (idx != 0) throw Error("tuple_at: index out of range");
  return t;
}

std::uint64_t tuple_space_size(int n, int k) {
  check_k(k);
  if (n < 1) throw Error("n must be >= 1");
  std::uint64_t sz = 1;
  const std::uint64_t base = static_cast<std::uint64_t>(k) + 2;
  for (int i = 0; i < n; ++i) {
    if (sz > UINT64_MAX / base) throw Error("tuple space size overflow");
    sz *= base;
  }
  return sz;
}

void enumerate_tuples(int n, int k, const std::function<void(const LatticeTuple&)>& fn,
                      std::uint64_t budget) {
  std::uint64_t sz = tuple_space_size(n, k);
  if (budget && sz > budget) throw Error("enumeration budget exceeded");
  LatticeTuple t = LatticeTuple::all_bottom(n, k);
  for (std::uint64_t idx = 0;; ++idx) {
    fn(t);
    // mixed-radix increment, last coordinate fastest
    int i = n - 1;
    while (i >= 0 && t.codes[static_cast<size_t>(i)] == k + 1) {
      t.codes[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++t.codes[static_cast<size_t>(i)];
    (void)idx;
  }
}

void interval(const LatticeTuple& a, const LatticeTuple& b,
              const std::function<void(const LatticeTuple&)>& fn) {
  if (!leq(a, b)) throw Error("interval: a is not <= b");
  const int n = a.n();
  const int k = a.k;
  // per-coordinate choice lists [a(i), b(i)]
  std::vector<std::vector<int>> choices(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int lo = a.codes[static_cast<size_t>(i)];
    const int hi = b.codes[static_cast<size_t>(i)];
    auto& c = choices[static_cast<size_t>(i)];
    if (lo == hi) {
      c.push_back(lo);
    } else if (lo == 0 && hi == k + 1) {
      for (int e = 0; e <= k + 1; ++e) c.push_back(e);
    } else if (lo == 0) {  // hi is an atom
      c.push_back(0);
      c.push_back(hi);
    } else {  // lo an atom, hi Top
      c.push_back(lo);
      c.push_back(k + 1);
    }
  }
  LatticeTuple t = a;
  std::vector<size_t> pos(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) t.codes[static_cast<size_t>(i)] = choices[static_cast<size_t>(i)][0];
  while (true) {
    fn(t);
    int i = n - 1;
    while (i >= 0 && pos[static_cast<size_t>(i)] + 1 == choices[static_cast<size_t>(i)].size()) {
      pos[static_cast<size_t>(i)] = 0;
      t.codes[static_cast<size_t>(i)] = choices[static_cast<size_t>(i)][0];
      --i;
    }
    if (i < 0) break;
    ++pos[static_cast<size_t>(i)];
    t.codes[static_cast<size_t>(i)] = choices[static_cast<size_t>(i)][pos[static_cast<size_t>(i)]];
  }
}

}  // namespace sfm
