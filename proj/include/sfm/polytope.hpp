// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sfm/oracle.hpp"

namespace sfm {

// Vector over [n] x A with exact rational entries; atoms are 1-based.
struct PVector {
  int n = 0;
  int k = 0;
  QVec entries;  // index (i, a) -> i*k + (a-1), i 0-based

  PVector() = default;
  PVector(int n_, int k_) : n(n_), k(k_), entries(static_cast<size_t>(n_) * k_, Rat(0)) {}

  Rat& at(int i, int a) { return entries[static_cast<size_t>(i) * k + (a - 1)]; }
  const Rat& at(int i, int a) const { return entries[static_cast<size_t>(i) * k + (a - 1)]; }

  int dim() const { return n * k; }

  bool operator==(const PVector& o) const {
    return n == o.n && k == o.k && entries == o.entries;
  }
  bool operator!=(const PVector& o) const { return !(*this == o); }
  bool operator<(const PVector& o) const { return entries < o.entries; }

  // x^-: entrywise min with 0
  PVector neg_part() const;
  bool nonpositive() const;
};

// One member e of I(t): per Top coordinate an unordered atom pair, per atom
// coordinate that atom, nothing at Bottom coordinates.
struct SelCoord {
  int type = 0;  // 0 = none, 1 = atom, 2 = pair
  int a1 = 0, a2 = 0;  // pair stored with a1 < a2

  bool operator==(const SelCoord& o) const {
    return type == o.type && a1 == o.a1 && a2 == o.a2;
  }
};

struct AtomPairSelector {
  int n = 0;
  int k = 0;
  std::vector<SelCoord> coords;

  AtomPairSelector() = default;
  AtomPairSelector(int n_, int k_) : n(n_), k(k_), coords(static_cast<size_t>(n_)) {}

  QVec row() const;  // 0/1 coefficient vector in R^{nk}
  Rat value(const PVector& x) const;

  bool operator==(const AtomPairSelector& o) const {
    return n == o.n && k == o.k && coords == o.coords;
  }
};

// x(t) via g: Bottom -> 0, atom -> entry, Top -> best distinct-atom pair sum
Rat apply(const PVector& x, const LatticeTuple& t);

// the selector achieving apply(x,t), deterministic (lowest atom indices)
AtomPairSelector max_selector(const PVector& x, const LatticeTuple& t);

// Among selectors of I(t) that are tight for x at t (achieve apply(x,t)),
// one maximizing <e, z>; returns it with its z-value.
std::pair<AtomPairSelector, Rat> max_tight_selector_against(
    const PVector& x, const LatticeTuple& t, const QVec& z);

// all of I(t); count C(k,2)^{#Top}
void enumerate_ineqs(const LatticeTuple& t,
                     const std::function<void(const AtomPairSelector&)>& fn,
                     std::uint64_t budget = kDefaultEnumBudget);

struct MembershipReport {
  bool member = false;
  std::optional<LatticeTuple> violated;  // some t with apply(x,t) > f(t)
};

MembershipReport is_member_dense(const PVector& x, const OracleFunction& f,
                                 std::uint64_t budget = kDefaultEnumBudget);

bool is_unified(const PVector& x);
PVector unify(const PVector& x);
Rat s_value(const PVector& x);

// all t with apply(x,t) = f(t); requires x in P_M(f)
std::vector<LatticeTuple> tight_tuples_dense(const PVector& x, const OracleFunction& f,
                                             std::uint64_t budget = kDefaultEnumBudget);

}  // namespace sfm
