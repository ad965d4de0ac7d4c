// SPDX-License-Identifier: Apache-2.0
#include "sfm/lpengine.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace sfm {

namespace {

// Dense tableau simplex over the standard-form system M y = b, y >= 0 built
// from free variables (split), slacks and artificials. Bland's rule.
class Tableau {
 public:
  Tableau(const LinearSystem& sys) : dim_(sys.dim) {
    const size_t m = sys.rows.size();
    nslack_ = 0;
    for (const Row& r : sys.rows)
      if (r.rel == 'L') ++nslack_;
    nstruct_ = 2 * static_cast<size_t>(dim_) + nslack_;
    ncols_ = nstruct_ + m;  // artificials at the end
    T_.assign(m, QVec(ncols_, Rat(0)));
    rhs_.assign(m, Rat(0));
    basis_.assign(m, 0);
    active_.assign(m, true);
    size_t slack_idx = 0;
    for (size_t i = 0; i < m; ++i) {
      const Row& r = sys.rows[i];
      if (static_cast<int>(r.a.size()) != dim_) throw Error("simplex: row dimension mismatch");
      const bool flip = r.b < 0;
      const Rat sgn = flip ? Rat(-1) : Rat(1);
      for (int j = 0; j < dim_; ++j) {
        T_[i][static_cast<size_t>(j)] = sgn * r.a[static_cast<size_t>(j)];
        T_[i][static_cast<size_t>(dim_ + j)] = -sgn * r.a[static_cast<size_t>(j)];
      }
      if (r.rel == 'L') {
        T_[i][2 * static_cast<size_t>(dim_) + slack_idx] = sgn;
        slack_col_[i] = 2 * static_cast<size_t>(dim_) + slack_idx;
        ++slack_idx;
      }
      rhs_[i] = sgn * r.b;
      row_sgn_.push_back(sgn);
      // artificial column; replaced by the slack as basis when usable
      T_[i][nstruct_ + i] = 1;
      if (r.rel == 'L' && !flip) {
        basis_[i] = slack_col_[i];
      } else {
        basis_[i] = nstruct_ + i;
        has_artificial_basis_ = true;
      }
    }
  }

  // returns true if a feasible basis was found (phase 1)
  bool phase1() {
    if (!has_artificial_basis_) return true;
    QVec c(ncols_, Rat(0));
    for (size_t j = nstruct_; j < ncols_; ++j) c[j] = -1;
    run(c, /*allow_artificial=*/true);
    Rat v = objective_value(c);
    if (v < 0) {
      phase1_value_ = v;
      return false;
    }
    // drive artificials out of the basis
    for (size_t i = 0; i < T_.size(); ++i) {
      if (!active_[i] || basis_[i] < nstruct_) continue;
      size_t j = 0;
      for (; j < nstruct_; ++j)
        if (T_[i][j] != 0) break;
      if (j < nstruct_) {
        pivot(i, j);
      } else {
        active_[i] = false;  // redundant row
      }
    }
    return true;
  }

  // phase 2; objective over the x-space (size dim). Returns ray on
  // unboundedness.
  std::optional<QVec> phase2(const QVec& obj_x) {
    QVec c(ncols_, Rat(0));
    for (int j = 0; j < dim_; ++j) {
      c[static_cast<size_t>(j)] = obj_x[static_cast<size_t>(j)];
      c[static_cast<size_t>(dim_ + j)] = -obj_x[static_cast<size_t>(j)];
    }
    return run(c, /*allow_artificial=*/false);
  }

  QVec solution_x() const {
    QVec y(ncols_, Rat(0));
    for (size_t i = 0; i < T_.size(); ++i)
      if (active_[i]) y[basis_[i]] = rhs_[i];
    QVec x(static_cast<size_t>(dim_), Rat(0));
    for (int j = 0; j < dim_; ++j)
      x[static_cast<size_t>(j)] = y[static_cast<size_t>(j)] - y[static_cast<size_t>(dim_ + j)];
    return x;
  }

  QVec farkas() const {
    // phase-1 duals read off the artificial columns, mapped back through the
    // per-row sign flips so the certificate refers to the original rows
    QVec y(T_.size(), Rat(0));
    for (size_t r = 0; r < T_.size(); ++r) {
      Rat s = 0;
      for (size_t i = 0; i < T_.size(); ++i) {
        if (!active_[i] || basis_[i] < nstruct_) continue;
        s += -T_[i][nstruct_ + r];
      }
      y[r] = row_sgn_[r] * s;
    }
    return y;
  }

 private:
  Rat objective_value(const QVec& c) const {
    Rat v = 0;
    for (size_t i = 0; i < T_.size(); ++i)
      if (active_[i]) v += c[basis_[i]] * rhs_[i];
    return v;
  }

  void pivot(size_t row, size_t col) {
    const Rat p = T_[row][col];
    if (p != 1) {
      for (size_t j = 0; j < ncols_; ++j)
        if (T_[row][j] != 0) T_[row][j] /= p;
      rhs_[row] /= p;
    }
    for (size_t i = 0; i < T_.size(); ++i) {
      if (i == row || !active_[i] || T_[i][col] == 0) continue;
      const Rat m = T_[i][col];
      for (size_t j = 0; j < ncols_; ++j)
        if (T_[row][j] != 0) T_[i][j] -= m * T_[row][j];
      rhs_[i] -= m * rhs_[row];
    }
    basis_[row] = col;
  }

  // Primal simplex maximizing c: Dantzig's rule with a Bland tail for
  // termination. Returns a ray (x-space) when unbounded, nullopt at
  // optimality.
  std::optional<QVec> run(const QVec& c, bool allow_artificial) {
    const size_t jmax = allow_artificial ? ncols_ : nstruct_;
    const long long bland_after = 200 + 20 * static_cast<long long>(T_.size() + ncols_);
    long long iters = 0;
    while (true) {
      const bool dantzig = ++iters <= bland_after;
      std::vector<char> is_basic(ncols_, 0);
      std::vector<std::pair<size_t, const Rat*>> cb;  // rows with nonzero basic cost
      for (size_t i = 0; i < T_.size(); ++i) {
        if (!active_[i]) continue;
        is_basic[basis_[i]] = 1;
        if (c[basis_[i]] != 0) cb.emplace_back(i, &c[basis_[i]]);
      }
      size_t enter = ncols_;
      Rat best_rc;
      for (size_t j = 0; j < jmax; ++j) {
        if (is_basic[j]) continue;
        Rat rc = c[j];
        for (const auto& [i, cbi] : cb) {
          const Rat& tij = T_[i][j];
          if (tij != 0) rc -= *cbi * tij;
        }
        if (rc > 0) {
          if (!dantzig) {
            enter = j;
            break;  // Bland: lowest index
          }
          if (enter == ncols_ || rc > best_rc) {
            enter = j;
            best_rc = rc;
          }
        }
      }
      if (enter == ncols_) return std::nullopt;
      // ratio test
      size_t leave = SIZE_MAX;
      Rat best_ratio;
      for (size_t i = 0; i < T_.size(); ++i) {
        if (!active_[i] || T_[i][enter] <= 0) continue;
        Rat ratio = rhs_[i] / T_[i][enter];
        if (leave == SIZE_MAX || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == SIZE_MAX) {
        // unbounded: build the ray in x-space
        QVec ray(static_cast<size_t>(dim_), Rat(0));
        auto add = [&](size_t col, const Rat& val) {
          if (col < static_cast<size_t>(dim_))
            ray[col] += val;
          else if (col < 2 * static_cast<size_t>(dim_))
            ray[col - static_cast<size_t>(dim_)] -= val;
        };
        add(enter, Rat(1));
        for (size_t i = 0; i < T_.size(); ++i)
          if (active_[i]) add(basis_[i], -T_[i][enter]);
        return ray;
      }
      pivot(leave, enter);
    }
  }

  int dim_;
  size_t nslack_ = 0, nstruct_ = 0, ncols_ = 0;
  QMat T_;
  QVec rhs_;
  std::vector<size_t> basis_;
  std::vector<bool> active_;
  std::map<size_t, size_t> slack_col_;
  QVec row_sgn_;
  bool has_artificial_basis_ = false;
  Rat phase1_value_;
};

}  // namespace

LpResult solve_lp_dense(const LinearSystem& sys, const QVec& objective) {
  if (static_cast<int>(objective.size()) != sys.dim)
    throw Error("solve_lp_dense: objective dimension mismatch");
  Tableau t(sys);
  if (!t.phase1()) return LpInfeasible{t.farkas()};
  auto ray = t.phase2(objective);
  if (ray) return LpUnbounded{*ray};
  QVec x = t.solution_x();
  return LpOptimal{x, dot(objective, x)};
}

std::optional<QVec> feasibility(const LinearSystem& sys) {
  Tableau t(sys);
  if (!t.phase1()) return std::nullopt;
  return t.solution_x();
}

std::vector<QVec> vertices_dense(const LinearSystem& sys, const Rat& box_radius) {
  const int d = sys.dim;
  if (d < 1 || d > 10) throw Error("vertices_dense: dimension budget exceeded");
  const Rat R = box_radius;
  std::vector<Row> rows;
  for (int j = 0; j < d; ++j) {
    QVec a(static_cast<size_t>(d), Rat(0));
    a[static_cast<size_t>(j)] = 1;
    rows.push_back({a, 'L', R});
    a[static_cast<size_t>(j)] = -1;
    rows.push_back({a, 'L', R});
  }
  for (const Row& r : sys.rows) {
    if (r.rel == 'L') {
      rows.push_back(r);
    } else {
      rows.push_back({r.a, 'L', r.b});
      QVec neg = r.a;
      for (Rat& v : neg) v = -v;
      rows.push_back({neg, 'L', -r.b});
    }
  }

  // start from the box corners, then clip one halfspace at a time, keeping
  // the exact vertex set of the intersection processed so far
  std::set<QVec> V;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
    QVec p(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      p[static_cast<size_t>(j)] = (mask >> j) & 1 ? R : -R;
    V.insert(p);
  }

  std::vector<Row> processed;
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    const Row& row = rows[ri];
    if (ri < 2 * static_cast<size_t>(d)) {
      processed.push_back(row);
      continue;  // box corners already exact
    }
    std::vector<QVec> inside, outside;
    for (const QVec& p : V) {
      if (dot(row.a, p) <= row.b)
        inside.push_back(p);
      else
        outside.push_back(p);
    }
    processed.push_back(row);
    if (outside.empty()) continue;
    std::set<QVec> next(inside.begin(), inside.end());
    for (const QVec& p : inside) {
      const Rat ap = dot(row.a, p);
      for (const QVec& q : outside) {
        const Rat aq = dot(row.a, q);
        const Rat tau = (row.b - ap) / (aq - ap);
        QVec w(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j)
          w[static_cast<size_t>(j)] =
              p[static_cast<size_t>(j)] +
              tau * (q[static_cast<size_t>(j)] - p[static_cast<size_t>(j)]);
        // keep only true vertices of the processed intersection
        QMat tight;
        bool feas = true;
        for (const Row& pr : processed) {
          const Rat v = dot(pr.a, w);
          if (v > pr.b) {
            feas = false;
            break;
          }
          if (v == pr.b) tight.push_back(pr.a);
        }
        if (feas && matrix_rank(tight) == d) next.insert(w);
      }
    }
    V = std::move(next);
  }

  std::vector<QVec> out;
  for (const QVec& p : V) {
    bool on_box = false;
    for (const Rat& c : p)
      if (c == R || c == -R) on_box = true;
    if (!on_box) out.push_back(p);
  }
  return out;
}

OracleLpOutcome oracle_lp_maximize(OracleLp& lp, const QVec& objective) {
  for (int iter = 0; iter < 100000; ++iter) {
    LpResult res = solve_lp_dense({lp.dim, lp.pool}, objective);
    if (std::holds_alternative<LpInfeasible>(res))
      throw Error("oracle_lp: relaxation infeasible (region empty?)");
    if (auto* ub = std::get_if<LpUnbounded>(&res)) {
      auto cut = lp.separate_ray(ub->ray);
      if (!cut) return {true, ub->ray, Rat(0)};
      if (dot(cut->a, ub->ray) <= 0) throw Error("oracle_lp: ray cut does not cut");
      lp.pool.push_back(*cut);
      continue;
    }
    const auto& opt = std::get<LpOptimal>(res);
    auto cut = lp.separate_point(opt.point);
    if (!cut) return {false, opt.point, opt.value};
    if (dot(cut->a, opt.point) <= cut->b) throw Error("oracle_lp: point cut does not cut");
    lp.pool.push_back(*cut);
  }
  throw Error("oracle_lp: iteration cap exceeded");
}

QVec oracle_lp_vertexify(OracleLp& lp, const QVec& objective, const QVec& start,
                         std::vector<Row>* tight_rows_out) {
  const int d = lp.dim;
  QVec current = start;
  std::vector<Row> fixed;
  fixed.push_back({objective, 'E', dot(objective, current)});

  auto pinned = [&]() {
    QMat tight;
    for (const Row& r : lp.pool)
      if (dot(r.a, current) == r.b) tight.push_back(r.a);
    for (const Row& r : fixed) tight.push_back(r.a);
    return matrix_rank(tight) >= d;
  };

  for (int j = 0; j < d && !pinned(); ++j) {
    QVec e(static_cast<size_t>(d), Rat(0));
    e[static_cast<size_t>(j)] = 1;
    for (int sign = 0; sign < 2; ++sign) {
      // maximize +-e_j over region cut to the fixed equalities
      bool done = false;
      for (int iter = 0; iter < 100000 && !done; ++iter) {
        std::vector<Row> rows = lp.pool;
        rows.insert(rows.end(), fixed.begin(), fixed.end());
        LpResult res = solve_lp_dense({d, rows}, e);
        if (std::holds_alternative<LpInfeasible>(res))
          throw Error("vertexify: sub-face relaxation infeasible");
        if (auto* ub = std::get_if<LpUnbounded>(&res)) {
          auto cut = lp.separate_ray(ub->ray);
          if (cut) {
            if (dot(cut->a, ub->ray) <= 0) throw Error("vertexify: ray cut does not cut");
            lp.pool.push_back(*cut);
            continue;
          }
          // genuinely unbounded in this direction: try the other sign
          break;
        }
        const auto& opt = std::get<LpOptimal>(res);
        auto cut = lp.separate_point(opt.point);
        if (cut) {
          if (dot(cut->a, opt.point) <= cut->b) throw Error("vertexify: point cut does not cut");
          lp.pool.push_back(*cut);
          continue;
        }
        fixed.push_back({e, 'E', opt.value});
        current = opt.point;
        done = true;
      }
      if (done) break;
      if (sign == 1) throw Error("vertexify: line in region (cannot happen for pointed regions)");
      for (Rat& v : e) v = -v;
    }
  }

  if (tight_rows_out) {
    tight_rows_out->clear();
    for (const Row& r : lp.pool)
      if (dot(r.a, current) == r.b) tight_rows_out->push_back(r);
  }
  return current;
}

QVec round_to_half_grid(const QVec& x) {
  QVec y = x;
  for (Rat& v : y) {
    // nearest multiple of 1/2 (ties toward -inf)
    mpz_class num = v.get_num() * 4 + v.get_den();  // floor((2v + 1/2) ... )
    mpz_class den = v.get_den() * 2;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    v = Rat(q, 2);
    v.canonicalize();
  }
  return y;
}

static OptimizeOutcome cuttingplane_optimize(const SeparationOracle& sep,
                                             const QVec& objective, const Rat& R, int dim) {
  OracleLp lp;
  lp.dim = dim;
  for (int j = 0; j < dim; ++j) {
    QVec a(static_cast<size_t>(dim), Rat(0));
    a[static_cast<size_t>(j)] = 1;
    lp.pool.push_back({a, 'L', R});
    a[static_cast<size_t>(j)] = -1;
    lp.pool.push_back({a, 'L', R});
  }
  for (int iter = 0; iter < 100000; ++iter) {
    LpResult res = solve_lp_dense({dim, lp.pool}, objective);
    if (std::holds_alternative<LpInfeasible>(res))
      return {true, {}, Rat(0)};  // cuts contradict within the box: empty
    if (std::holds_alternative<LpUnbounded>(res))
      throw Error("oracle_optimize: boxed region cannot be unbounded");
    const auto& opt = std::get<LpOptimal>(res);
    SepVerdict v = sep(opt.point);
    if (v.inside) return {false, opt.point, opt.value};
    if (!v.cut) throw Error("oracle_optimize: separation returned no cut");
    if (dot(v.cut->a, opt.point) <= v.cut->b)
      throw Error("oracle_optimize: cut does not cut");
    lp.pool.push_back(*v.cut);
  }
  throw Error("oracle_optimize: iteration cap exceeded");
}

static OptimizeOutcome ellipsoid_optimize(const SeparationOracle& sep,
                                          const QVec& objective, const Rat& R, int dim) {
  using F = mpf_class;
  const int prec = 256;
  const size_t d = static_cast<size_t>(dim);
  std::vector<std::vector<F>> A(d, std::vector<F>(d, F(0, prec)));
  std::vector<F> z(d, F(0, prec));
  F R2(0, prec);
  R2 = F(R.get_d(), prec);
  for (size_t i = 0; i < d; ++i) A[i][i] = R2 * R2 * static_cast<int>(d);

  bool have_best = false;
  QVec best;
  Rat best_val;
  const int iters = 1200 + 220 * dim * dim;
  for (int it = 0; it < iters; ++it) {
    // exact rational query point from the floating center
    QVec zq(d);
    for (size_t i = 0; i < d; ++i) zq[i] = Rat(z[i].get_d());
    QVec cutrow;
    Rat cutrhs;
    bool boxed = false;
    for (size_t i = 0; i < d && !boxed; ++i) {
      if (zq[i] > R || zq[i] < -R) {
        cutrow.assign(d, Rat(0));
        cutrow[i] = zq[i] > R ? 1 : -1;
        cutrhs = R;
        boxed = true;
      }
    }
    if (!boxed) {
      SepVerdict v = sep(zq);
      if (v.inside) {
        Rat val = dot(objective, zq);
        if (!have_best || val > best_val) {
          have_best = true;
          best = zq;
          best_val = val;
        }
        // sliding objective: require improvement
        cutrow.assign(d, Rat(0));
        for (size_t i = 0; i < d; ++i) cutrow[i] = -objective[i];
        cutrhs = -best_val;
      } else {
        cutrow = v.cut->a;
        cutrhs = v.cut->b;
      }
    }
    // central-cut ellipsoid update with row `cutrow`
    std::vector<F> a(d, F(0, prec)), Aa(d, F(0, prec));
    for (size_t i = 0; i < d; ++i) a[i] = F(cutrow[i].get_d(), prec);
    F quad(0, prec);
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) Aa[i] += A[i][j] * a[j];
    }
    for (size_t i = 0; i < d; ++i) quad += a[i] * Aa[i];
    if (quad <= 0) break;  // ellipsoid collapsed
    F denom(0, prec);
    denom = sqrt(quad);
    const F nd(static_cast<double>(dim), prec);
    for (size_t i = 0; i < d; ++i) z[i] -= Aa[i] / (denom * (nd + 1));
    const F factor = nd * nd / (nd * nd - 1);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        A[i][j] = factor * (A[i][j] - (2 / (nd + 1)) * Aa[i] * Aa[j] / quad);
  }
  if (!have_best) return {true, {}, Rat(0)};
  return {false, best, best_val};
}

MembershipVerdict membership_from_optimization(const OptimizationOracle& opt, int dim) {
  const size_t d = static_cast<size_t>(dim);
  std::vector<QVec> pool;  // vertices discovered so far
  QVec c(d, Rat(1));
  for (int iter = 0; iter < 100000; ++iter) {
    // only the sign of the optimum matters: clear denominators so the inner
    // optimizer works with an integral objective
    QVec ci(c);
    mpz_class den = 1;
    for (const Rat& e : ci) den = lcm(den, e.get_den());
    if (den != 1)
      for (Rat& e : ci) e *= Rat(den);
    LpOptimal r = opt(ci);
    if (r.value < 0) return {false, c, r};
    pool.push_back(r.point);
    // master: min tau s.t. <v, c> <= tau for found v, 0 <= c <= 1
    LinearSystem master;
    master.dim = dim + 1;  // c then tau
    for (const QVec& v : pool) {
      QVec a(d + 1, Rat(0));
      for (size_t j = 0; j < d; ++j) a[j] = v[j];
      a[d] = -1;
      master.rows.push_back({a, 'L', Rat(0)});
    }
    for (size_t j = 0; j < d; ++j) {
      QVec a(d + 1, Rat(0));
      a[j] = 1;
      master.rows.push_back({a, 'L', Rat(1)});
      a[j] = -1;
      master.rows.push_back({a, 'L', Rat(0)});
    }
    QVec obj(d + 1, Rat(0));
    obj[d] = -1;  // maximize -tau
    LpResult res = solve_lp_dense(master, obj);
    const auto* optm = std::get_if<LpOptimal>(&res);
    if (!optm) throw Error("membership: master LP not optimal");
    if (-optm->value >= 0) return {true, std::nullopt, r};  // min tau >= 0
    c.assign(optm->point.begin(), optm->point.begin() + static_cast<long>(d));
  }
  throw Error("membership: iteration cap exceeded");
}

OptimizeOutcome oracle_optimize(const SeparationOracle& sep, const QVec& objective,
                                const Rat& box_radius, Engine engine, int dim) {
  if (static_cast<int>(objective.size()) != dim)
    throw Error("oracle_optimize: objective dimension mismatch");
  if (engine == Engine::cuttingplane)
    return cuttingplane_optimize(sep, objective, box_radius, dim);
  return ellipsoid_optimize(sep, objective, box_radius, dim);
}

}  // namespace sfm
