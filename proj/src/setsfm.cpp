// SPDX-License-Identifier: Apache-2.0
#include "sfm/setsfm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "sfm/linalg.hpp"

namespace sfm {

static void check_ground(const SetOracle& g, int max_bits) {
  if (g.ground_size < 0 || g.ground_size > max_bits)
    throw Error("set oracle ground set exceeds budget");
}

static SetOracle normalized(const SetOracle& g, Rat& offset) {
  offset = g(0);
  if (offset == 0) return g;
  SetOracle gn;
  gn.ground_size = g.ground_size;
  Rat off = offset;
  gn.eval = [g, off](Subset s) { return g(s) - off; };
  return gn;
}

// Edmonds greedy vertex of B(gn) for the given ordering (gn(0) = 0)
static QVec greedy_vertex(const SetOracle& gn, const std::vector<int>& order) {
  QVec q(static_cast<size_t>(gn.ground_size), Rat(0));
  Subset prefix = 0;
  Rat prev = 0;
  for (int v : order) {
    prefix |= Subset(1) << v;
    Rat cur = gn(prefix);
    q[static_cast<size_t>(v)] = cur - prev;
    prev = cur;
  }
  return q;
}

// argmin over B(gn) of <w, q>: greedy in ascending w (index tie-break)
static QVec linear_min_vertex(const SetOracle& gn, const QVec& w) {
  std::vector<int> order(static_cast<size_t>(gn.ground_size));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w[static_cast<size_t>(a)] < w[static_cast<size_t>(b)]; });
  return greedy_vertex(gn, order);
}

static Rat norm2(const QVec& x) { return dot(x, x); }

// Wolfe's minimum-norm-point algorithm over B(gn), exact arithmetic.
static QVec wolfe_min_norm(const SetOracle& gn) {
  const int m = gn.ground_size;
  std::vector<int> id(static_cast<size_t>(m));
  std::iota(id.begin(), id.end(), 0);
  std::vector<QVec> S{greedy_vertex(gn, id)};
  QVec lambda{Rat(1)};
  QVec x = S[0];

  auto combine = [&]() {
    QVec y(static_cast<size_t>(m), Rat(0));
    for (size_t i = 0; i < S.size(); ++i)
      for (int v = 0; v < m; ++v) y[static_cast<size_t>(v)] += lambda[i] * S[i][static_cast<size_t>(v)];
    return y;
  };

  // drop a point using an affine dependence (keeps x and sum of coeffs)
  auto drop_dependent = [&]() {
    QMat M(static_cast<size_t>(m) + 1, QVec(S.size(), Rat(0)));
    for (size_t i = 0; i < S.size(); ++i) {
      for (int v = 0; v < m; ++v) M[static_cast<size_t>(v)][i] = S[i][static_cast<size_t>(v)];
      M[static_cast<size_t>(m)][i] = 1;
    }
    auto gamma = nullspace_vector(M, static_cast<int>(S.size()));
    if (!gamma) return false;
    bool has_pos = false;
    for (const Rat& gi : *gamma)
      if (gi > 0) has_pos = true;
    if (!has_pos)
      for (Rat& gi : *gamma) gi = -gi;
    bool first = true;
    Rat tau;
    for (size_t i = 0; i < S.size(); ++i) {
      if ((*gamma)[i] > 0) {
        Rat t = lambda[i] / (*gamma)[i];
        if (first || t < tau) {
          tau = t;
          first = false;
        }
      }
    }
    for (size_t i = 0; i < S.size(); ++i) lambda[i] -= tau * (*gamma)[i];
    for (size_t i = S.size(); i-- > 0;) {
      if (lambda[i] == 0) {
        S.erase(S.begin() + static_cast<long>(i));
        lambda.erase(lambda.begin() + static_cast<long>(i));
      }
    }
    return true;
  };

  for (int major = 0; major < 100000; ++major) {
    QVec q = linear_min_vertex(gn, x);
    if (dot(x, q) >= norm2(x)) return x;  // optimality: <x, q - x> >= 0
    S.push_back(q);
    lambda.push_back(Rat(0));
    for (int minor = 0; minor < 100000; ++minor) {
      // affine minimizer over aff(S): [Gram 1; 1^T 0] [mu; nu] = [0; 1]
      const size_t s = S.size();
      QMat A(s + 1, QVec(s + 1, Rat(0)));
      QVec b(s + 1, Rat(0));
      for (size_t i = 0; i < s; ++i) {
        for (size_t j = 0; j < s; ++j) A[i][j] = dot(S[i], S[j]);
        A[i][s] = 1;
        A[s][i] = 1;
      }
      b[s] = 1;
      QMat chk(static_cast<size_t>(m) + 1, QVec(s, Rat(0)));
      for (size_t i = 0; i < s; ++i) {
        for (int v = 0; v < m; ++v) chk[static_cast<size_t>(v)][i] = S[i][static_cast<size_t>(v)];
        chk[static_cast<size_t>(m)][i] = 1;
      }
      if (matrix_rank(chk) < static_cast<int>(s)) {
        if (!drop_dependent()) throw Error("min_norm: dependence resolution failed");
        x = combine();
        continue;
      }
      auto sol = gaussian_solve(A, b);
      if (!sol) throw Error("min_norm: affine system unsolvable");
      QVec mu(sol->begin(), sol->begin() + static_cast<long>(s));
      bool interior = true;
      for (const Rat& mi : mu)
        if (mi < 0) interior = false;
      if (interior) {
        lambda = mu;
        for (size_t i = S.size(); i-- > 0;) {
          if (lambda[i] == 0) {
            S.erase(S.begin() + static_cast<long>(i));
            lambda.erase(lambda.begin() + static_cast<long>(i));
          }
        }
        x = combine();
        break;
      }
      // move x toward y until a coefficient hits zero
      bool first = true;
      Rat theta;
      for (size_t i = 0; i < s; ++i) {
        if (mu[i] < 0) {
          Rat t = lambda[i] / (lambda[i] - mu[i]);
          if (first || t < theta) {
            theta = t;
            first = false;
          }
        }
      }
      if (first) throw Error("min_norm: no blocking coefficient");
      for (size_t i = 0; i < s; ++i) lambda[i] += theta * (mu[i] - lambda[i]);
      for (size_t i = S.size(); i-- > 0;) {
        if (lambda[i] == 0) {
          S.erase(S.begin() + static_cast<long>(i));
          lambda.erase(lambda.begin() + static_cast<long>(i));
        }
      }
      x = combine();
    }
  }
  throw Error("min_norm: iteration cap exceeded (non-submodular input?)");
}

QVec min_norm_point(const SetOracle& g) {
  check_ground(g, 24);
  Rat off;
  SetOracle gn = normalized(g, off);
  return wolfe_min_norm(gn);
}

std::pair<Subset, Rat> min_set(const SetOracle& g, SetBackend backend) {
  if (g.ground_size == 0) return {0, g(0)};
  if (backend == SetBackend::exhaustive) {
    check_ground(g, 20);
    Subset best_s = 0;
    Rat best = g(0);
    const Subset full = g.full();
    for (Subset s = 1; s <= full; ++s) {
      Rat v = g(s);
      if (v < best) {
        best = v;
        best_s = s;
      }
    }
    return {best_s, best};
  }
  check_ground(g, 24);
  Rat off;
  SetOracle gn = normalized(g, off);
  QVec x = wolfe_min_norm(gn);
  Subset arg = 0;
  Rat val = 0;
  for (int v = 0; v < g.ground_size; ++v) {
    if (x[static_cast<size_t>(v)] < 0) {
      arg |= Subset(1) << v;
      val += x[static_cast<size_t>(v)];
    }
  }
  return {arg, val + off};
}

std::pair<Subset, Rat> min_over_interval(const SetOracle& g, Subset A, Subset B,
                                         SetBackend backend) {
  if ((A & ~B) != 0) throw Error("min_over_interval: A is not a subset of B");
  std::vector<int> free_bits;
  for (int v = 0; v < g.ground_size; ++v) {
    Subset bit = Subset(1) << v;
    if ((B & bit) && !(A & bit)) free_bits.push_back(v);
  }
  SetOracle sub;
  sub.ground_size = static_cast<int>(free_bits.size());
  sub.eval = [g, A, free_bits](Subset y) {
    Subset s = A;
    for (size_t j = 0; j < free_bits.size(); ++j)
      if (y & (Subset(1) << j)) s |= Subset(1) << free_bits[j];
    return g(s);
  };
  auto [y, val] = min_set(sub, backend);
  Subset s = A;
  for (size_t j = 0; j < free_bits.size(); ++j)
    if (y & (Subset(1) << j)) s |= Subset(1) << free_bits[j];
  return {s, val};
}

std::vector<Subset> all_minimizers(const SetOracle& g, Subset A, Subset B,
                                   SetBackend backend, std::uint64_t cap) {
  auto [m0, val] = min_over_interval(g, A, B, backend);
  std::set<Subset> out;
  std::set<std::pair<Subset, Subset>> seen;
  std::vector<std::pair<Subset, Subset>> stack{{A, B}};
  std::uint64_t work = 0;
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (!seen.insert({a, b}).second) continue;
    if (++work > cap) throw Error("all_minimizers: interval cap exceeded");
    auto [mi, v] = min_over_interval(g, a, b, backend);
    if (v > val) continue;
    out.insert(mi);
    for (int x = 0; x < g.ground_size; ++x) {
      Subset bit = Subset(1) << x;
      if ((mi & bit) && !(a & bit)) stack.push_back({a, b & ~bit});
      if ((b & bit) && !(mi & bit)) stack.push_back({a | bit, b});
    }
  }
  return {out.begin(), out.end()};
}

bool edmonds_check(const SetOracle& g) {
  check_ground(g, 12);
  Rat off;
  SetOracle gn = normalized(g, off);
  Rat best = 0;
  const Subset full = g.ground_size ? g.full() : 0;
  for (Subset s = 1; s != 0 && s <= full; ++s) best = std::min(best, gn(s));
  QVec x = wolfe_min_norm(gn);
  Rat neg = 0;
  for (const Rat& v : x)
    if (v < 0) neg += v;
  if (neg != best) return false;  // strong duality via the min-norm point
  if (g.ground_size <= 6 && g.ground_size >= 1) {
    std::vector<int> order(static_cast<size_t>(g.ground_size));
    std::iota(order.begin(), order.end(), 0);
    do {
      QVec q = greedy_vertex(gn, order);
      Rat qn = 0;
      for (const Rat& v : q)
        if (v < 0) qn += v;
      if (qn > best) return false;  // weak duality must hold for every vertex
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return true;
}

}  // namespace sfm
