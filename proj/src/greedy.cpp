// SPDX-License-Identifier: Apache-2.0
#include "sfm/greedy.hpp"

#include <algorithm>

namespace sfm {

GreedyResult greedy_base(const OracleFunction& f) {
  const int n = f.n(), k = f.k();
  GreedyResult res;
  res.vector = PVector(n, k);
  LatticeTuple v = LatticeTuple::all_bottom(n, k);  // v_i
  res.tight_chain.push_back(v);
  long long fv = f(v);
  if (fv < 0) throw Error("greedy_base: f(0) must be >= 0");
  for (int i = 0; i < n; ++i) {
    // p_{i+1} maximizes f(v_i[i+1 = a]), lowest atom index on ties
    int p = 1;
    long long best = f(v.with(i, 1));
    for (int a = 2; a <= k; ++a) {
      long long val = f(v.with(i, a));
      if (val > best) {
        best = val;
        p = a;
      }
    }
    res.top_atoms.push_back(p);
    LatticeTuple vp = v.with(i, p);
    LatticeTuple vnext = v.with(i, k + 1);
    const long long f_vp = best;
    const long long f_vnext = f(vnext);
    // the first step absorbs f(v_0) so that v_0[1=p_1] is tight even
    // when f(0) > 0 (with normalized f this is the displayed formula)
    res.vector.at(i, p) = (i == 0) ? Rat(static_cast<long>(f_vp))
                                   : Rat(static_cast<long>(f_vp - fv));
    for (int a = 1; a <= k; ++a)
      if (a != p) res.vector.at(i, a) = Rat(static_cast<long>(f_vnext - f_vp));
    res.tight_chain.push_back(vp);
    res.tight_chain.push_back(vnext);
    v = vnext;
    fv = f_vnext;
  }
  return res;
}

long long dual_lower_bound(const OracleFunction& f) {
  GreedyResult g = greedy_base(f);
  Rat v = apply(g.vector.neg_part(), LatticeTuple::all_top(f.n(), f.k()));
  if (!is_integer(v)) throw Error("dual_lower_bound: non-integer value");
  return static_cast<long long>(v.get_num().get_si());
}

// sup { alpha >= 0 : x + alpha * w_i in P_M(f) } for a direction supported on
// coordinate i with nonnegative per-atom weights w (w_a in {0,1}); dense.
static Rat sup_step(const PVector& x, const OracleFunction& f, int i,
                    const std::vector<int>& w, std::uint64_t budget) {
  const int k = x.k;
  bool bounded = false;
  Rat best;
  enumerate_tuples(x.n, k, [&](const LatticeTuple& t) {
    const int c = t.codes[static_cast<size_t>(i)];
    if (c == 0) return;
    // evaluation = rest + coordinate-i term; the latter is a max of lines
    // v0 + slope * alpha
    Rat rest = apply(x, t.with(i, 0));
    Rat cap = Rat(static_cast<long>(f(t))) - rest;
    auto consider = [&](const Rat& v0, int slope) {
      if (slope <= 0) return;
      Rat bound = (cap - v0) / slope;
      if (!bounded || bound < best) {
        bounded = true;
        best = bound;
      }
    };
    if (c <= k) {
      consider(x.at(i, c), w[static_cast<size_t>(c)]);
    } else {
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
          consider(x.at(i, a) + x.at(i, b),
                   w[static_cast<size_t>(a)] + w[static_cast<size_t>(b)]);
    }
  }, budget);
  if (!bounded) throw Error("lift_to_base: unbounded step");  // cannot happen
  return best;
}

PVector lift_to_base(const PVector& z, const OracleFunction& f, std::uint64_t budget) {
  if (z.n != f.n() || z.k != f.k()) throw Error("lift_to_base: dimension mismatch");
  if (!z.nonpositive()) throw Error("lift_to_base: z must be <= 0");
  if (!is_unified(z)) throw Error("lift_to_base: z must be unified");
  if (!is_member_dense(z, f, budget).member) throw Error("lift_to_base: z not in P_M(f)");

  const int n = z.n, k = z.k;
  PVector x = z;
  const std::uint64_t cap = 4 * static_cast<std::uint64_t>(n) * k * tuple_space_size(n, k) + 16;
  for (std::uint64_t iter = 0; iter < cap; ++iter) {
    bool progressed = false;
    // step 1: raise a maxarg atom alone
    for (int i = 0; i < n && !progressed; ++i) {
      Rat mx = x.at(i, 1);
      for (int a = 2; a <= k; ++a) mx = std::max(mx, x.at(i, a));
      for (int p = 1; p <= k && !progressed; ++p) {
        if (x.at(i, p) != mx) continue;
        std::vector<int> w(static_cast<size_t>(k) + 1, 0);
        w[static_cast<size_t>(p)] = 1;
        Rat alpha = sup_step(x, f, i, w, budget);
        if (alpha > 0) {
          x.at(i, p) += alpha;
          progressed = true;
        }
      }
    }
    if (progressed) continue;
    // step 2: raise all non-max atoms together, up to the max level
    for (int i = 0; i < n && !progressed; ++i) {
      int p = 1;
      for (int a = 2; a <= k; ++a)
        if (x.at(i, a) > x.at(i, p)) p = a;
      const int other = (p == 1) ? 2 : 1;
      Rat gap = x.at(i, p) - x.at(i, other);
      if (gap == 0) continue;
      std::vector<int> w(static_cast<size_t>(k) + 1, 1);
      w[0] = 0;
      w[static_cast<size_t>(p)] = 0;
      Rat alpha = sup_step(x, f, i, w, budget);
      Rat m = std::min(alpha, gap);
      if (m > 0) {
        for (int a = 1; a <= k; ++a)
          if (a != p) x.at(i, a) += m;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  Rat top = apply(x, LatticeTuple::all_top(n, k));
  if (top != Rat(static_cast<long>(f(LatticeTuple::all_top(n, k)))))
    throw Error("lift_to_base: fixed point not in B_M(f)");
  return x;
}

}  // namespace sfm
