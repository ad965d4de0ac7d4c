// SPDX-License-Identifier: Apache-2.0
#include "sfm/minimize.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace sfm {

int segment_jump(const LatticeTuple& a, const LatticeTuple& b) {
  if (a.k != b.k || a.n() != b.n()) throw Error("segment_jump: dimension mismatch");
  int c = 0;
  for (int i = 0; i < a.n(); ++i)
    if (a.codes[static_cast<size_t>(i)] == 0 && b.codes[static_cast<size_t>(i)] == a.k + 1) ++c;
  return c;
}

namespace {

constexpr std::uint64_t kJumpBudget = 4096;  // (k+2)^jump per segment

// assignments for the Bottom->Top coordinates of one segment
struct Segment {
  LatticeTuple a, b;
  std::vector<int> I;  // Bottom -> Top coordinates
  std::vector<int> J;  // other changed coordinates
};

Segment make_segment(const LatticeTuple& a, const LatticeTuple& b) {
  Segment s{a, b, {}, {}};
  const int k = a.k;
  for (int i = 0; i < a.n(); ++i) {
    const int ca = a.codes[static_cast<size_t>(i)], cb = b.codes[static_cast<size_t>(i)];
    if (ca == cb) continue;
    if (!leq(a.at(i), b.at(i))) throw Error("segment: tuples not comparable");
    if (ca == 0 && cb == k + 1)
      s.I.push_back(i);
    else
      s.J.push_back(i);
  }
  std::uint64_t combos = 1;
  for (size_t j = 0; j < s.I.size(); ++j) {
    combos *= static_cast<std::uint64_t>(k) + 2;
    if (combos > kJumpBudget) throw Error("chain segment jump too large for the oracle budget");
  }
  return s;
}

// d(Y) = f(u) - x(u) over subsets of J, with the I coordinates pinned
LatticeTuple segment_tuple(const Segment& s, const std::vector<int>& zcodes, Subset Y) {
  LatticeTuple u = s.a;
  for (size_t j = 0; j < s.I.size(); ++j)
    u.codes[static_cast<size_t>(s.I[j])] = zcodes[j];
  for (size_t j = 0; j < s.J.size(); ++j)
    if (Y & (Subset(1) << j))
      u.codes[static_cast<size_t>(s.J[j])] = s.b.codes[static_cast<size_t>(s.J[j])];
  return u;
}

SetBackend pick_backend(SetBackend requested, size_t ground) {
  if (ground > 20) return SetBackend::minnorm;
  return requested;
}

// run fn(zcodes) for every assignment of the I coordinates
void for_each_assignment(const Segment& s, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> z(s.I.size(), 0);
  while (true) {
    if (!fn(z)) return;
    size_t j = z.size();
    while (j > 0 && z[j - 1] == k + 1) {
      z[j - 1] = 0;
      --j;
    }
    if (j == 0) return;
    ++z[j - 1];
  }
}

}  // namespace

SeparationResult chain_separate(const PVector& x, const OracleFunction& f,
                                const TightChain& chain, SetBackend backend) {
  const int n = f.n(), k = f.k();
  if (x.n != n || x.k != k) throw Error("chain_separate: dimension mismatch");
  if (chain.tuples.empty()) throw Error("chain_separate: empty chain");
  if (chain.tuples.front() != LatticeTuple::all_bottom(n, k))
    throw Error("chain_separate: chain must start at the bottom tuple");

  SeparationResult res;
  const LatticeTuple bottom = LatticeTuple::all_bottom(n, k);
  if (f(bottom) < 0) {  // apply(x, 0) = 0 > f(0)
    res.member = false;
    res.tuple = bottom;
    res.selector = max_selector(x, bottom);
    return res;
  }

  // every tuple but the last must be tight; a strictly violated one is itself
  // a separating witness, slack is a caller contract violation
  for (size_t s = 0; s + 1 < chain.tuples.size(); ++s) {
    const LatticeTuple& t = chain.tuples[s];
    const Rat av = apply(x, t);
    if (av > rat_of(f(t))) {
      res.member = false;
      res.tuple = t;
      res.selector = max_selector(x, t);
      return res;
    }
    if (av < rat_of(f(t)))
      throw Error("chain_separate: chain tuple not tight: " + tuple_to_string(t));
  }

  for (size_t s = 0; s + 1 < chain.tuples.size(); ++s) {
    const LatticeTuple& a = chain.tuples[s];
    const LatticeTuple& b = chain.tuples[s + 1];
    if (a == b) continue;
    if (!leq(a, b)) throw Error("chain_separate: chain not increasing");
    Segment seg = make_segment(a, b);
    if (chain.jump_bound > 0 && static_cast<int>(seg.I.size()) > chain.jump_bound)
      throw Error("chain_separate: jump bound exceeded");

    bool violated = false;
    for_each_assignment(seg, k, [&](const std::vector<int>& z) {
      SetOracle g;
      g.ground_size = static_cast<int>(seg.J.size());
      g.eval = [&](Subset Y) -> Rat {
        LatticeTuple u = segment_tuple(seg, z, Y);
        return rat_of(f(u)) - apply(x, u);
      };
      Subset argmin = 0;
      Rat val;
      if (g.ground_size == 0) {
        val = g(0);
      } else {
        auto [mY, mv] = min_set(g, pick_backend(backend, seg.J.size()));
        argmin = mY;
        val = mv;
      }
      if (val < 0) {
        LatticeTuple u = segment_tuple(seg, z, argmin);
        res.member = false;
        res.tuple = u;
        res.selector = max_selector(x, u);
        violated = true;
        return false;
      }
      return true;
    });
    if (violated) return res;
  }
  res.member = true;
  return res;
}

namespace {

struct RayHit {
  Rat step;  // largest feasible step along w
  QVec row;  // selector row that becomes tight, with row.w > 0
};

// Largest delta >= 0 keeping max_tight_selector_against(x, t, z + delta w) <= 0.
// The envelope is convex piecewise linear and coordinate-decomposable, so
// Newton iteration from above terminates after finitely many active pieces.
// nullopt when every admissible selector has nonpositive velocity along w
// (the tuple never blocks the ray).
std::optional<RayHit> tuple_ray_step(const PVector& x, const LatticeTuple& t,
                                     const QVec& z, const QVec& w) {
  auto [sw, vw] = max_tight_selector_against(x, t, w);
  if (vw <= 0) return std::nullopt;
  QVec row = sw.row();
  Rat delta = -dot(row, z) / vw;  // row.z <= 0, so delta >= 0
  const int guard_max = 64 * static_cast<int>(z.size()) + 64;
  for (int guard = 0;; ++guard) {
    if (guard > guard_max) throw Error("tuple_ray_step: envelope iteration diverged");
    QVec p(z);
    for (size_t j = 0; j < p.size(); ++j) p[j] += delta * w[j];
    auto [s, val] = max_tight_selector_against(x, t, p);
    if (val < 0) throw Error("tuple_ray_step: overshot the envelope root");
    if (val == 0) return RayHit{delta, row};
    QVec r2 = s.row();
    const Rat slope = dot(r2, w);
    if (slope <= 0) throw Error("tuple_ray_step: active piece lost positive slope");
    row = r2;
    delta = -dot(row, z) / slope;
  }
}

// Move z inside {e.z <= 0 for tight selectors} along null directions of the
// accumulated tight rows until those rows plus c have full rank. <c,z> is
// preserved throughout, so z becomes a vertex optimum of eq. (increasing);
// Lemma no-large-gap then bounds the Bottom->Top gaps of the surviving
// tight chain by two.
void purify_direction(const VertexState& v, const QVec& c, QVec& z) {
  const int d = static_cast<int>(z.size());
  QMat rows;
  rows.push_back(c);
  for (int round = 0; round < d + 1; ++round) {
    std::optional<QVec> w = nullspace_vector(rows, d);
    if (!w) return;  // rank d: done
    std::optional<RayHit> best;
    bool flipped = false;
    for (int sign = 0; sign < 2 && !best; ++sign) {
      if (sign == 1) {
        for (Rat& e : *w) e = -e;
        flipped = true;
      }
      for (const LatticeTuple& t : v.tight) {
        std::optional<RayHit> h = tuple_ray_step(v.x, t, z, *w);
        if (h && (!best || h->step < best->step)) best = h;
      }
    }
    (void)flipped;
    if (!best) return;  // degenerate vertex: keep z as computed
    for (size_t j = 0; j < z.size(); ++j) z[j] += best->step * (*w)[j];
    rows.push_back(best->row);
  }
  throw Error("purify_direction: rank did not close");
}

}  // namespace

Direction improving_direction(const VertexState& v, const OracleFunction& f_strict,
                              const QVec& c, PipelineStats* stats, DirectionCache* cache) {
  (void)f_strict;
  const int d = v.x.dim();
  if (static_cast<int>(c.size()) != d) throw Error("improving_direction: dimension mismatch");
  if (stats) ++stats->direction_lps;

  // maximize <c,z> over {z : <e,z> <= 0 for every tight selector, <c,z> <= 1};
  // the optimum is 0 (x already optimal) or 1 (improving direction exists)
  OracleLp lp;
  lp.dim = d;
  lp.pool.push_back({c, 'L', Rat(1)});
  // warm start: cuts from earlier steps that are still valid at this vertex
  std::vector<std::pair<LatticeTuple, QVec>> kept;
  if (cache) {
    for (const auto& [t, row] : cache->rows) {
      const auto it = std::find(v.tight.begin(), v.tight.end(), t);
      if (it == v.tight.end()) continue;
      if (dot(row, v.x.entries) != apply(v.x, t)) continue;  // no longer a max selector
      lp.pool.push_back({row, 'L', Rat(0)});
      kept.emplace_back(t, row);
    }
  }
  auto sep = [&](const QVec& z) -> std::optional<Row> {
    for (const LatticeTuple& t : v.tight) {
      auto [e, zv] = max_tight_selector_against(v.x, t, z);
      if (zv > 0) {
        QVec row = e.row();
        kept.emplace_back(t, row);
        return Row{row, 'L', Rat(0)};
      }
    }
    return std::nullopt;
  };
  lp.separate_point = sep;
  lp.separate_ray = sep;  // rays violating no selector cannot improve past cz <= 1

  OracleLpOutcome out = oracle_lp_maximize(lp, c);
  if (out.unbounded) throw Error("improving_direction: unexpected unbounded LP");
  if (cache) {
    const size_t cap = 8 * static_cast<size_t>(d);
    if (kept.size() > cap) kept.erase(kept.begin(), kept.end() - static_cast<long>(cap));
    cache->rows = std::move(kept);
  }
  Direction dir;
  if (out.value <= 0) {
    if (out.value < 0) throw Error("improving_direction: negative optimum (z=0 feasible)");
    dir.value = 0;
    dir.z.assign(static_cast<size_t>(d), Rat(0));
    return dir;
  }
  if (out.value != 1) throw Error("improving_direction: optimum is neither 0 nor 1");
  dir.value = 1;
  dir.z = out.point;
  // slide z off the non-selector constraints until d independent tight
  // selector rows pin it; only then does the no-large-gap bound apply to T'
  purify_direction(v, c, dir.z);
  return dir;
}

PVector face_optimize(const QVec& c, const PVector& x, const OracleFunction& f,
                      const std::vector<LatticeTuple>& face_tuples, const QVec* z,
                      SetBackend backend) {
  const int n = f.n(), k = f.k(), d = n * k;
  if (static_cast<int>(c.size()) != d) throw Error("face_optimize: dimension mismatch");
  for (const Rat& ci : c)
    if (ci < 0) throw Error("face_optimize: objective must be nonnegative");

  OracleLp lp;
  lp.dim = d;
  // unit rows chi_{ia} . y <= f(t_{ia}) keep every relaxation bounded
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= k; ++a) {
      QVec row(static_cast<size_t>(d), Rat(0));
      row[static_cast<size_t>(i) * k + (a - 1)] = 1;
      lp.pool.push_back({row, 'L', rat_of(f(LatticeTuple::unit(n, k, i, a)))});
    }

  // equality rows: per face tuple, the allowed tight selectors stay at f(t).
  // Encoded as pair-difference rows plus one sum row per tuple.
  for (const LatticeTuple& t : face_tuples) {
    if (rank(t) == 0) continue;
    QVec sum(static_cast<size_t>(d), Rat(0));
    for (int i = 0; i < n; ++i) {
      const int code = t.codes[static_cast<size_t>(i)];
      if (code == 0) continue;
      if (code <= k) {
        sum[static_cast<size_t>(i) * k + (code - 1)] += 1;
        continue;
      }
      // Top coordinate: x-maximal pairs, optionally narrowed to z-maximal
      Rat xmax;
      bool first = true;
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b) {
          Rat v = x.at(i, a) + x.at(i, b);
          if (first || v > xmax) { xmax = v; first = false; }
        }
      std::vector<std::pair<int, int>> allowed;
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
          if (x.at(i, a) + x.at(i, b) == xmax) allowed.push_back({a, b});
      if (z) {
        auto zat = [&](int a) { return (*z)[static_cast<size_t>(i) * k + (a - 1)]; };
        Rat zbest;
        bool zfirst = true;
        for (auto [a, b] : allowed) {
          Rat v = zat(a) + zat(b);
          if (zfirst || v > zbest) { zbest = v; zfirst = false; }
        }
        std::vector<std::pair<int, int>> narrowed;
        for (auto [a, b] : allowed)
          if (zat(a) + zat(b) == zbest) narrowed.push_back({a, b});
        allowed = narrowed;
      }
      auto [ra, rb] = allowed.front();
      sum[static_cast<size_t>(i) * k + (ra - 1)] += 1;
      sum[static_cast<size_t>(i) * k + (rb - 1)] += 1;
      for (size_t p = 1; p < allowed.size(); ++p) {
        QVec diff(static_cast<size_t>(d), Rat(0));
        diff[static_cast<size_t>(i) * k + (allowed[p].first - 1)] += 1;
        diff[static_cast<size_t>(i) * k + (allowed[p].second - 1)] += 1;
        diff[static_cast<size_t>(i) * k + (ra - 1)] -= 1;
        diff[static_cast<size_t>(i) * k + (rb - 1)] -= 1;
        lp.pool.push_back({diff, 'E', Rat(0)});
      }
    }
    lp.pool.push_back({sum, 'E', rat_of(f(t))});
  }

  // separation chain: the face tuples (sorted, starting at 0) plus the top
  TightChain chain;
  chain.jump_bound = 0;  // gaps bounded by the oracle budget, not a fixed jump
  chain.tuples = face_tuples;
  std::sort(chain.tuples.begin(), chain.tuples.end(),
            [](const LatticeTuple& a, const LatticeTuple& b) {
              int ra = rank(a), rb = rank(b);
              return ra != rb ? ra < rb : a < b;
            });
  if (chain.tuples.empty() || chain.tuples.front() != LatticeTuple::all_bottom(n, k))
    throw Error("face_optimize: face must contain the bottom tuple");
  if (chain.tuples.back() != LatticeTuple::all_top(n, k))
    chain.tuples.push_back(LatticeTuple::all_top(n, k));

  lp.separate_point = [&, chain](const QVec& yv) -> std::optional<Row> {
    PVector y(n, k);
    y.entries = yv;
    // the face tuples satisfy apply >= f through the equality rows; a strict
    // excess anywhere on the chain yields a cut, after which every chain
    // tuple except possibly the top is tight and chain_separate applies
    for (const LatticeTuple& t : chain.tuples) {
      if (rank(t) == 0) continue;
      if (apply(y, t) > rat_of(f(t))) return Row{max_selector(y, t).row(), 'L', rat_of(f(t))};
    }
    SeparationResult sr = chain_separate(y, f, chain, backend);
    if (!sr.member) return Row{sr.selector->row(), 'L', rat_of(f(*sr.tuple))};
    return std::nullopt;
  };
  lp.separate_ray = [&](const QVec& r) -> std::optional<Row> {
    for (int j = 0; j < d; ++j)
      if (r[static_cast<size_t>(j)] > 0) return lp.pool[static_cast<size_t>(j)];
    return std::nullopt;
  };
  // ray rows above index by (i,a) = j only because unit rows were pushed first
  // in that order; keep that invariant.
  OracleLpOutcome out = oracle_lp_maximize(lp, c);
  if (out.unbounded) throw Error("face_optimize: unexpected unbounded LP");
  QVec vy = oracle_lp_vertexify(lp, c, out.point);
  PVector res(n, k);
  res.entries = vy;
  return res;
}

namespace {

// every tight tuple of y strictly inside segment (a, b), via interval set-SFM
void recover_segment_tight(const PVector& y, const OracleFunction& f,
                           const LatticeTuple& a, const LatticeTuple& b,
                           SetBackend backend, std::set<LatticeTuple>& out) {
  Segment seg = make_segment(a, b);
  const int k = f.k();
  for_each_assignment(seg, k, [&](const std::vector<int>& z) {
    SetOracle g;
    g.ground_size = static_cast<int>(seg.J.size());
    g.eval = [&](Subset Y) -> Rat {
      LatticeTuple u = segment_tuple(seg, z, Y);
      return rat_of(f(u)) - apply(y, u);
    };
    if (g.ground_size == 0) {
      Rat v = g(0);
      if (v < 0) throw Error("tight recovery: point not in P_M(f)");
      if (v == 0) out.insert(segment_tuple(seg, z, 0));
      return true;
    }
    SetBackend bk = pick_backend(backend, seg.J.size());
    auto [mY, mv] = min_set(g, bk);
    if (mv < 0) throw Error("tight recovery: point not in P_M(f)");
    if (mv == 0) {
      for (Subset Y : all_minimizers(g, 0, g.full(), bk))
        out.insert(segment_tuple(seg, z, Y));
    }
    (void)mY;
    return true;
  });
}

std::vector<LatticeTuple> sort_chain(std::set<LatticeTuple>&& s) {
  std::vector<LatticeTuple> v(s.begin(), s.end());
  std::sort(v.begin(), v.end(), [](const LatticeTuple& a, const LatticeTuple& b) {
    int ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (!leq(v[i], v[i + 1]))
      throw Error("tight set is not a chain (function not strictly submodular?)");
  return v;
}

}  // namespace

std::optional<VertexState> improve_vertex(const VertexState& v, const OracleFunction& f_strict,
                                          const QVec& c, PipelineStats* stats,
                                          DirectionCache* cache) {
  const int n = f_strict.n(), k = f_strict.k();
  Direction dir = improving_direction(v, f_strict, c, stats, cache);
  if (dir.value == 0) return std::nullopt;

  // T': tight tuples whose best tight selector is orthogonal to z
  std::vector<LatticeTuple> tprime;
  for (const LatticeTuple& t : v.tight) {
    auto [e, zv] = max_tight_selector_against(v.x, t, dir.z);
    (void)e;
    if (zv > 0) throw Error("improve_vertex: direction violates a tight selector");
    if (zv == 0) tprime.push_back(t);
  }
  std::sort(tprime.begin(), tprime.end(), [](const LatticeTuple& a, const LatticeTuple& b) {
    int ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  if (tprime.empty() || rank(tprime.front()) != 0)
    throw Error("improve_vertex: bottom tuple left the face");
  {
    std::vector<LatticeTuple> walk = tprime;
    if (walk.back() != LatticeTuple::all_top(n, k)) walk.push_back(LatticeTuple::all_top(n, k));
    for (size_t i = 0; i + 1 < walk.size(); ++i) {
      int j = segment_jump(walk[i], walk[i + 1]);
      if (stats && j > stats->max_gap_jump) stats->max_gap_jump = j;
    }
  }

  PVector y = face_optimize(c, v.x, f_strict, tprime, &dir.z, SetBackend::exhaustive);

  Rat gain = dot(c, y.entries) - dot(c, v.x.entries);
  bool integral_obj = true;
  for (const Rat& ci : c)
    if (!is_integer(ci)) integral_obj = false;
  if (integral_obj && gain < Rat(1, 2)) {
    if (stats) stats->progress_ok = false;
    throw Error("improve_vertex: step gained less than 1/2 (got " + format_rat(gain) + ")");
  }
  if (gain <= 0) throw Error("improve_vertex: no strict progress");
  if (stats) ++stats->improve_steps;
  if (stats && stats->trace) {
    *stats->trace << "improve step " << stats->improve_steps << ": gain " << format_rat(gain)
                  << ", vertex";
    for (const Rat& e : y.entries) *stats->trace << ' ' << format_rat(e);
    *stats->trace << "\n  face chain:";
    for (const LatticeTuple& t : tprime) *stats->trace << ' ' << tuple_to_string(t);
    *stats->trace << '\n';
  }

  // full tight set of the new vertex
  std::set<LatticeTuple> tight(tprime.begin(), tprime.end());
  const LatticeTuple top = LatticeTuple::all_top(n, k);
  for (const LatticeTuple& t : tprime)
    if (apply(y, t) != rat_of(f_strict(t)))
      throw Error("improve_vertex: face tuple lost tightness");
  if (apply(y, top) != rat_of(f_strict(top)))
    throw Error("improve_vertex: top tuple not tight at the new vertex");
  tight.insert(top);
  std::vector<LatticeTuple> walk(tight.begin(), tight.end());
  std::sort(walk.begin(), walk.end(), [](const LatticeTuple& a, const LatticeTuple& b) {
    int ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  for (size_t i = 0; i + 1 < walk.size(); ++i)
    recover_segment_tight(y, f_strict, walk[i], walk[i + 1], SetBackend::exhaustive, tight);

  VertexState next;
  next.x = y;
  next.tight = sort_chain(std::move(tight));
  return next;
}

LpOptimal optimize_vertex_strict(const OracleFunction& f_strict, const QVec& c,
                                 PipelineStats* stats) {
  const int n = f_strict.n(), k = f_strict.k(), d = n * k;
  if (static_cast<int>(c.size()) != d) throw Error("optimize_vertex_strict: dimension mismatch");
  for (const Rat& ci : c)
    if (ci < 0) throw Error("optimize_vertex_strict: objective must be nonnegative");
  if (f_strict(LatticeTuple::all_bottom(n, k)) != 0)
    throw Error("optimize_vertex_strict: f(0) must be 0");

  // integral objective: progress per step is >= 1/2 in these units
  mpz_class scale = 1;
  for (const Rat& ci : c) scale = lcm(scale, ci.get_den());
  QVec cs(c);
  for (Rat& ci : cs) {
    ci *= Rat(scale);
    ci.canonicalize();
  }

  GreedyResult g = greedy_base(f_strict);
  VertexState state{g.vector, g.tight_chain};
  for (const LatticeTuple& t : state.tight)
    if (apply(state.x, t) != rat_of(f_strict(t)))
      throw Error("optimize_vertex_strict: greedy chain tuple not tight");

  bool zero = true;
  for (const Rat& ci : cs)
    if (ci != 0) zero = false;
  if (!zero) {
    // step cap from the unit-row upper bound on the optimum
    Rat upper = 0;
    for (int i = 0; i < n; ++i)
      for (int a = 1; a <= k; ++a)
        upper += cs[static_cast<size_t>(i) * k + (a - 1)] *
                 rat_of(f_strict(LatticeTuple::unit(n, k, i, a)));
    Rat gap = upper - dot(cs, state.x.entries);
    if (gap < 0) throw Error("optimize_vertex_strict: greedy point above the unit bound");
    long long steps = 0;
    Rat cap_r = Rat(2) * gap + 8;
    DirectionCache cache;
    while (true) {
      auto next = improve_vertex(state, f_strict, cs, stats, &cache);
      if (!next) break;
      state = *next;
      if (Rat(static_cast<long>(++steps)) > cap_r)
        throw Error("optimize_vertex_strict: step cap exceeded");
    }
  }
  return LpOptimal{state.x.entries, dot(c, state.x.entries)};
}

namespace {

OracleFunction make_f_theta(const OracleFunction& F, long long theta_p) {
  const int n = F.n(), k = F.k();
  return OracleFunction(n, k, [F, theta_p](const LatticeTuple& t) -> long long {
    if (rank(t) == 0) return 0;
    return F(t) - theta_p;
  });
}

// engine = ellipsoid: answer each polar query with the ellipsoid method over
// a dense separation oracle, certify the rounded point exactly, and fall back
// to the exact pipeline when rounding misses the optimum. Dense; desk scale.
LpOptimal ellipsoid_query(const OracleFunction& H, const QVec& c, const MinimizeOptions& opt) {
  const int n = H.n(), k = H.k(), d = n * k;
  const long long M = H.max_abs(opt.dense_budget);
  const Rat R = rat_of(4LL * n * k * M + 1);
  SeparationOracle sep = [&](const QVec& q) -> SepVerdict {
    PVector y(n, k);
    y.entries = q;
    MembershipReport rep = is_member_dense(y, H, opt.dense_budget);
    if (rep.member) return {true, std::nullopt};
    const LatticeTuple& t = *rep.violated;
    return {false, Row{max_selector(y, t).row(), 'L', rat_of(H(t))}};
  };
  OptimizeOutcome out = oracle_optimize(sep, c, R, Engine::ellipsoid, d);
  if (!out.empty) {
    QVec cand = round_to_half_grid(out.point);
    PVector y(n, k);
    y.entries = cand;
    if (is_member_dense(y, H, opt.dense_budget).member) {
      VertexState st{y, tight_tuples_dense(y, H, opt.dense_budget)};
      Direction dir = improving_direction(st, H, c, opt.stats);
      if (dir.value == 0) return LpOptimal{cand, dot(c, cand)};
    }
  }
  if (opt.stats) ++opt.stats->ellipsoid_fallbacks;
  return optimize_vertex_strict(H, c, opt.stats);
}

}  // namespace

bool min_ge(const OracleFunction& g, long long theta, const MinimizeOptions& opt) {
  const int n = g.n(), k = g.k(), d = n * k;
  const long long g0 = g(LatticeTuple::all_bottom(n, k));
  const long long theta_p = theta - g0;
  if (theta_p > 0) return false;  // the bottom tuple already beats theta
  OracleFunction F = normalize(g);
  OracleFunction Ft = make_f_theta(F, theta_p);

  // cheap NO: sampled tuples below theta
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= k; ++a)
      if (Ft(LatticeTuple::unit(n, k, i, a)) < 0) return false;
  if (Ft(LatticeTuple::all_top(n, k)) < 0) return false;

  // cheap YES: the greedy dual bound already certifies min >= 0
  if (dual_lower_bound(Ft) >= 0) return true;

  if (opt.stats) ++opt.stats->decisions;
  OracleFunction H = strictify(Ft);
  OptimizationOracle oracle;
  if (opt.engine == Engine::ellipsoid) {
    if (tuple_space_size(n, k) > opt.dense_budget)
      throw Error("ellipsoid engine is dense; instance exceeds the budget");
    oracle = [&](const QVec& c) { return ellipsoid_query(H, c, opt); };
  } else {
    oracle = [&](const QVec& c) { return optimize_vertex_strict(H, c, opt.stats); };
  }
  return membership_from_optimization(oracle, d).inside;
}

ZeroSep separate_zero(const OracleFunction& f, const MinimizeOptions& opt) {
  const int n = f.n(), k = f.k();
  ZeroSep res;
  if (f(LatticeTuple::all_bottom(n, k)) < 0) {
    res.inside = false;
    res.violated = LatticeTuple::all_bottom(n, k);
    return res;
  }
  if (min_ge(f, 0, opt)) {
    res.inside = true;
    return res;
  }
  // fix coordinates left to right, first element keeping a negative value
  std::vector<int> fixed;
  for (int i = 0; i < n; ++i) {
    int chosen = -1;
    for (int code = 0; code <= k + 1 && chosen < 0; ++code) {
      if (i == n - 1) {
        LatticeTuple t{k, fixed};
        t.codes.push_back(code);
        if (f(t) < 0) chosen = code;
        continue;
      }
      std::vector<int> prefix = fixed;
      prefix.push_back(code);
      OracleFunction rest(n - i - 1, k, [f, prefix, k](const LatticeTuple& t) {
        LatticeTuple full{k, prefix};
        full.codes.insert(full.codes.end(), t.codes.begin(), t.codes.end());
        return f(full);
      });
      if (!min_ge(rest, 0, opt)) chosen = code;
    }
    if (chosen < 0) throw Error("separate_zero: descent failed (oracle not submodular?)");
    fixed.push_back(chosen);
  }
  res.inside = false;
  res.violated = LatticeTuple{k, fixed};
  return res;
}

MinimizeResult minimize(const OracleFunction& f, const MinimizeOptions& opt) {
  const int n = f.n(), k = f.k();
  if (n < 1 || k < 3) throw Error("minimize: need n >= 1, k >= 3");
  const long long off = f(LatticeTuple::all_bottom(n, k));
  OracleFunction F = normalize(f);

  long long lb = dual_lower_bound(F);
  long long ub = 0;  // F(0) = 0
  if (lb > ub) throw Error("minimize: dual bound above f(0) (oracle not submodular?)");
  while (lb < ub) {
    const long long theta = lb + (ub - lb + 1) / 2;
    if (min_ge(F, theta, opt))
      lb = theta;
    else
      ub = theta - 1;
  }
  const long long m = lb;

  // argmin: fix coordinates left to right, first element preserving the min
  std::vector<int> fixed;
  for (int i = 0; i < n; ++i) {
    int chosen = -1;
    for (int code = 0; code <= k + 1 && chosen < 0; ++code) {
      if (i == n - 1) {
        LatticeTuple t{k, fixed};
        t.codes.push_back(code);
        if (F(t) == m) chosen = code;
        continue;
      }
      std::vector<int> prefix = fixed;
      prefix.push_back(code);
      OracleFunction rest(n - i - 1, k, [F, prefix, k](const LatticeTuple& t) {
        LatticeTuple full{k, prefix};
        full.codes.insert(full.codes.end(), t.codes.begin(), t.codes.end());
        return F(full);
      });
      if (!min_ge(rest, m + 1, opt)) chosen = code;
    }
    if (chosen < 0) throw Error("minimize: argmin recovery failed (oracle not submodular?)");
    fixed.push_back(chosen);
  }

  MinimizeResult res;
  res.min = m + off;
  res.argmin = LatticeTuple{k, fixed};
  if (opt.emit_dual) {
    if (tuple_space_size(n, k) > opt.dense_budget)
      throw Error("dual witness emission is dense; instance exceeds the budget");
    OracleFunction closure = monotone_closure(F, opt.dense_budget);
    res.dual = greedy_base(closure).vector;
  }
  return res;
}

std::pair<Rat, PVector> optimize_P(const QVec& c, const OracleFunction& f,
                                   const MinimizeOptions& opt) {
  const int n = f.n(), k = f.k(), d = n * k;
  if (static_cast<int>(c.size()) != d) throw Error("optimize_P: dimension mismatch");
  for (const Rat& ci : c)
    if (ci < 0) throw Error("optimize_P: objective must be nonnegative");
  if (f(LatticeTuple::all_bottom(n, k)) < 0) throw Error("optimize_P: P_M(f) is empty");

  MinimizeOptions inner = opt;
  inner.emit_dual = false;

  OracleLp lp;
  lp.dim = d;
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= k; ++a) {
      QVec row(static_cast<size_t>(d), Rat(0));
      row[static_cast<size_t>(i) * k + (a - 1)] = 1;
      lp.pool.push_back({row, 'L', rat_of(f(LatticeTuple::unit(n, k, i, a)))});
    }
  lp.separate_point = [&](const QVec& yv) -> std::optional<Row> {
    PVector y(n, k);
    y.entries = yv;
    // y in P_M(f) iff min_t (f(t) - y(t)) >= 0; scale to an integer oracle
    mpz_class den = 1;
    for (const Rat& e : yv) den = lcm(den, e.get_den());
    const Rat D(den);
    OracleFunction gap(n, k, [f, y, D](const LatticeTuple& t) {
      return rat_to_ll(D * rat_of(f(t)) - D * apply(y, t));
    });
    ZeroSep zs = separate_zero(gap, inner);
    if (zs.inside) return std::nullopt;
    const LatticeTuple& t = *zs.violated;
    return Row{max_selector(y, t).row(), 'L', rat_of(f(t))};
  };
  lp.separate_ray = [&](const QVec& r) -> std::optional<Row> {
    for (int j = 0; j < d; ++j)
      if (r[static_cast<size_t>(j)] > 0) return lp.pool[static_cast<size_t>(j)];
    return std::nullopt;
  };
  OracleLpOutcome out = oracle_lp_maximize(lp, c);
  if (out.unbounded) throw Error("optimize_P: unexpected unbounded LP");
  QVec vy = oracle_lp_vertexify(lp, c, out.point);
  PVector res(n, k);
  res.entries = vy;
  return {dot(c, vy), res};
}

}  // namespace sfm
