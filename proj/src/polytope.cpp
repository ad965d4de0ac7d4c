// SPDX-License-Identifier: Apache-2.0
#include "sfm/polytope.hpp"

#include <algorithm>

namespace sfm {

PVector PVector::neg_part() const {
  PVector y = *this;
  for (Rat& e : y.entries)
    if (e > 0) e = 0;
  return y;
}

bool PVector::nonpositive() const {
  for (const Rat& e : entries)
    if (e > 0) return false;
  return true;
}

QVec AtomPairSelector::row() const {
  QVec r(static_cast<size_t>(n) * k, Rat(0));
  for (int i = 0; i < n; ++i) {
    const SelCoord& c = coords[static_cast<size_t>(i)];
    if (c.type == 1) {
      r[static_cast<size_t>(i) * k + (c.a1 - 1)] = 1;
    } else if (c.type == 2) {
      r[static_cast<size_t>(i) * k + (c.a1 - 1)] = 1;
      r[static_cast<size_t>(i) * k + (c.a2 - 1)] = 1;
    }
  }
  return r;
}

Rat AtomPairSelector::value(const PVector& x) const {
  if (x.n != n || x.k != k) throw Error("selector: dimension mismatch");
  Rat s = 0;
  for (int i = 0; i < n; ++i) {
    const SelCoord& c = coords[static_cast<size_t>(i)];
    if (c.type == 1)
      s += x.at(i, c.a1);
    else if (c.type == 2)
      s += x.at(i, c.a1) + x.at(i, c.a2);
  }
  return s;
}

static void check_dims(const PVector& x, const LatticeTuple& t) {
  if (x.n != t.n() || x.k != t.k) throw Error("vector/tuple dimension mismatch");
}

Rat apply(const PVector& x, const LatticeTuple& t) {
  check_dims(x, t);
  Rat s = 0;
  for (int i = 0; i < x.n; ++i) {
    const int c = t.codes[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (c <= x.k) {
      s += x.at(i, c);
    } else {
      // best pair: two largest entries
      const Rat* best = &x.at(i, 1);
      const Rat* second = nullptr;
      for (int a = 2; a <= x.k; ++a) {
        const Rat* e = &x.at(i, a);
        if (*e > *best) {
          second = best;
          best = e;
        } else if (!second || *e > *second) {
          second = e;
        }
      }
      s += *best + *second;
    }
  }
  return s;
}

AtomPairSelector max_selector(const PVector& x, const LatticeTuple& t) {
  check_dims(x, t);
  AtomPairSelector e(x.n, x.k);
  for (int i = 0; i < x.n; ++i) {
    const int c = t.codes[static_cast<size_t>(i)];
    SelCoord& sc = e.coords[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (c <= x.k) {
      sc = {1, c, 0};
    } else {
      int b1 = 1, b2 = 2;  // indices of two largest entries, lowest-index ties
      if (x.at(i, 2) > x.at(i, 1)) std::swap(b1, b2);
      for (int a = 3; a <= x.k; ++a) {
        if (x.at(i, a) > x.at(i, b1)) {
          b2 = b1;
          b1 = a;
        } else if (x.at(i, a) > x.at(i, b2)) {
          b2 = a;
        }
      }
      sc = {2, std::min(b1, b2), std::max(b1, b2)};
    }
  }
  return e;
}

std::pair<AtomPairSelector, Rat> max_tight_selector_against(
    const PVector& x, const LatticeTuple& t, const QVec& z) {
  check_dims(x, t);
  if (static_cast<int>(z.size()) != x.dim()) throw Error("selector: z dimension mismatch");
  AtomPairSelector e(x.n, x.k);
  Rat zval = 0;
  auto zat = [&](int i, int a) -> const Rat& {
    return z[static_cast<size_t>(i) * x.k + (a - 1)];
  };
  for (int i = 0; i < x.n; ++i) {
    const int c = t.codes[static_cast<size_t>(i)];
    SelCoord& sc = e.coords[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (c <= x.k) {
      sc = {1, c, 0};
      zval += zat(i, c);
      continue;
    }
    // max x-pair value at this coordinate
    Rat xmax;
    bool first = true;
    for (int a = 1; a <= x.k; ++a)
      for (int b = a + 1; b <= x.k; ++b) {
        Rat v = x.at(i, a) + x.at(i, b);
        if (first || v > xmax) {
          xmax = v;
          first = false;
        }
      }
    // among x-max pairs, maximize z
    bool have = false;
    Rat bestz;
    for (int a = 1; a <= x.k; ++a)
      for (int b = a + 1; b <= x.k; ++b) {
        if (x.at(i, a) + x.at(i, b) != xmax) continue;
        Rat v = zat(i, a) + zat(i, b);
        if (!have || v > bestz) {
          bestz = v;
          sc = {2, a, b};
          have = true;
        }
      }
    zval += bestz;
  }
  return {e, zval};
}

void enumerate_ineqs(const LatticeTuple& t,
                     const std::function<void(const AtomPairSelector&)>& fn,
                     std::uint64_t budget) {
  const int n = t.n(), k = t.k;
  std::vector<int> tops;
  for (int i = 0; i < n; ++i)
    if (t.codes[static_cast<size_t>(i)] == k + 1) tops.push_back(i);
  const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1) / 2;
  std::uint64_t count = 1;
  for (size_t i = 0; i < tops.size(); ++i) {
    if (budget && count > budget / pairs) throw Error("enumerate_ineqs: budget exceeded");
    count *= pairs;
  }
  if (budget && count > budget) throw Error("enumerate_ineqs: budget exceeded");

  AtomPairSelector e(n, k);
  for (int i = 0; i < n; ++i) {
    const int c = t.codes[static_cast<size_t>(i)];
    if (c >= 1 && c <= k) e.coords[static_cast<size_t>(i)] = {1, c, 0};
  }
  // odometer over pairs at Top coordinates
  std::vector<std::pair<int, int>> pair_list;
  for (int a = 1; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b) pair_list.push_back({a, b});
  std::vector<size_t> pos(tops.size(), 0);
  while (true) {
    for (size_t j = 0; j < tops.size(); ++j) {
      auto [a, b] = pair_list[pos[j]];
      e.coords[static_cast<size_t>(tops[j])] = {2, a, b};
    }
    fn(e);
    size_t j = tops.size();
    while (j > 0 && pos[j - 1] + 1 == pair_list.size()) {
      pos[j - 1] = 0;
      --j;
    }
    if (j == 0) break;
    ++pos[j - 1];
  }
}

MembershipReport is_member_dense(const PVector& x, const OracleFunction& f,
                                 std::uint64_t budget) {
  if (x.n != f.n() || x.k != f.k()) throw Error("is_member_dense: dimension mismatch");
  MembershipReport rep;
  rep.member = true;
  try {
    enumerate_tuples(f.n(), f.k(), [&](const LatticeTuple& t) {
      if (rep.member && apply(x, t) > rat_of(f(t))) {
        rep.member = false;
        rep.violated = t;
      }
    }, budget);
  } catch (const Error&) {
    throw;
  }
  return rep;
}

bool is_unified(const PVector& x) {
  for (int i = 0; i < x.n; ++i) {
    // some atom p holds the max, all others equal
    bool ok = false;
    for (int p = 1; p <= x.k && !ok; ++p) {
      bool good = true;
      const Rat* common = nullptr;
      for (int a = 1; a <= x.k; ++a) {
        if (a == p) continue;
        if (!common)
          common = &x.at(i, a);
        else if (x.at(i, a) != *common)
          good = false;
      }
      if (good && x.at(i, p) >= *common) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

PVector unify(const PVector& x) {
  PVector z = x;
  for (int i = 0; i < x.n; ++i) {
    int p = 1;
    Rat mn = x.at(i, 1);
    for (int a = 2; a <= x.k; ++a) {
      if (x.at(i, a) > x.at(i, p)) p = a;
      if (x.at(i, a) < mn) mn = x.at(i, a);
    }
    for (int a = 1; a <= x.k; ++a)
      if (a != p) z.at(i, a) = mn;
  }
  return z;
}

Rat s_value(const PVector& x) {
  Rat s = 0;
  for (int i = 0; i < x.n; ++i) {
    Rat mn = x.at(i, 1), mx = x.at(i, 1);
    for (int a = 2; a <= x.k; ++a) {
      mn = std::min(mn, x.at(i, a));
      mx = std::max(mx, x.at(i, a));
    }
    s += mn + mx;
  }
  return s;
}

std::vector<LatticeTuple> tight_tuples_dense(const PVector& x, const OracleFunction& f,
                                             std::uint64_t budget) {
  std::vector<LatticeTuple> out;
  bool member = true;
  LatticeTuple bad = LatticeTuple::all_bottom(f.n(), f.k());
  enumerate_tuples(f.n(), f.k(), [&](const LatticeTuple& t) {
    Rat v = apply(x, t);
    Rat fv = rat_of(f(t));
    if (v > fv) {
      member = false;
      bad = t;
    } else if (v == fv) {
      out.push_back(t);
    }
  }, budget);
  if (!member) throw Error("tight_tuples_dense: x is not in P_M(f), violated at " + tuple_to_string(bad));
  return out;
}

}  // namespace sfm
