// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "sfm/lpengine.hpp"
#include "sfm/polytope.hpp"

using namespace sfm;

namespace {

OracleFunction e1() {
  return OracleFunction(1, 3, [](const LatticeTuple& t) { return rank(t) == 0 ? 0LL : 1LL; });
}

// dense inequality system of P_M(f)
LinearSystem dense_system(const OracleFunction& f) {
  LinearSystem sys;
  sys.dim = f.n() * f.k();
  enumerate_tuples(f.n(), f.k(), [&](const LatticeTuple& t) {
    if (rank(t) == 0) return;
    enumerate_ineqs(t, [&](const AtomPairSelector& e) {
      sys.rows.push_back({e.row(), 'L', rat_of(f(t))});
    });
  });
  return sys;
}

QVec qvec(std::initializer_list<Rat> xs) { return QVec(xs); }

}  // namespace

TEST_CASE("solve_lp_dense") {
  LinearSystem sys = dense_system(e1());
  LpResult r = solve_lp_dense(sys, qvec({1, 1, 1}));
  REQUIRE(std::holds_alternative<LpOptimal>(r));
  const LpOptimal& opt = std::get<LpOptimal>(r);
  CHECK(opt.value == Rat(3, 2));
  CHECK(opt.point == qvec({Rat(1, 2), Rat(1, 2), Rat(1, 2)}));

  LpResult z = solve_lp_dense(sys, qvec({0, 0, 0}));
  REQUIRE(std::holds_alternative<LpOptimal>(z));
  CHECK(std::get<LpOptimal>(z).value == 0);

  LinearSystem one;
  one.dim = 1;
  one.rows.push_back({qvec({1}), 'L', Rat(0)});
  LpResult m = solve_lp_dense(one, qvec({1}));
  REQUIRE(std::holds_alternative<LpOptimal>(m));
  CHECK(std::get<LpOptimal>(m).value == 0);

  LinearSystem inf;
  inf.dim = 1;
  inf.rows.push_back({qvec({1}), 'L', Rat(-1)});
  inf.rows.push_back({qvec({-1}), 'L', Rat(0)});
  LpResult i = solve_lp_dense(inf, qvec({1}));
  REQUIRE(std::holds_alternative<LpInfeasible>(i));
  // Farkas certificate: y >= 0 on inequality rows, sum y_r a_r = 0,
  // sum y_r b_r < 0
  auto check_farkas = [](const LinearSystem& s, const QVec& y) {
    REQUIRE(y.size() == s.rows.size());
    QVec comb(static_cast<size_t>(s.dim), Rat(0));
    Rat rhs = 0;
    for (size_t r = 0; r < s.rows.size(); ++r) {
      if (s.rows[r].rel == 'L') CHECK(y[r] >= 0);
      for (int j = 0; j < s.dim; ++j)
        comb[static_cast<size_t>(j)] += y[r] * s.rows[r].a[static_cast<size_t>(j)];
      rhs += y[r] * s.rows[r].b;
    }
    for (const Rat& cval : comb) CHECK(cval == 0);
    CHECK(rhs < 0);
  };
  check_farkas(inf, std::get<LpInfeasible>(i).farkas);

  // infeasible system with an equality row
  LinearSystem inf2;
  inf2.dim = 2;
  inf2.rows.push_back({qvec({1, 1}), 'E', Rat(2)});
  inf2.rows.push_back({qvec({1, 0}), 'L', Rat(0)});
  inf2.rows.push_back({qvec({0, 1}), 'L', Rat(1)});
  LpResult i2 = solve_lp_dense(inf2, qvec({0, 0}));
  REQUIRE(std::holds_alternative<LpInfeasible>(i2));
  check_farkas(inf2, std::get<LpInfeasible>(i2).farkas);

  LinearSystem ub;
  ub.dim = 2;
  ub.rows.push_back({qvec({0, 1}), 'L', Rat(0)});
  LpResult u = solve_lp_dense(ub, qvec({1, 0}));
  REQUIRE(std::holds_alternative<LpUnbounded>(u));
  CHECK(dot(std::get<LpUnbounded>(u).ray, qvec({1, 0})) > 0);
}

TEST_CASE("feasibility") {
  LinearSystem sys;
  sys.dim = 2;
  sys.rows.push_back({qvec({1, 1}), 'E', Rat(1)});
  sys.rows.push_back({qvec({-1, 0}), 'L', Rat(0)});
  sys.rows.push_back({qvec({0, -1}), 'L', Rat(0)});
  auto p = feasibility(sys);
  REQUIRE(p.has_value());
  CHECK((*p)[0] + (*p)[1] == 1);
  CHECK((*p)[0] >= 0);
  CHECK((*p)[1] >= 0);

  LinearSystem bad;
  bad.dim = 1;
  bad.rows.push_back({qvec({1}), 'L', Rat(-1)});
  bad.rows.push_back({qvec({-1}), 'L', Rat(0)});
  CHECK(!feasibility(bad).has_value());
}

TEST_CASE("vertices_dense") {
  std::vector<QVec> vs = vertices_dense(dense_system(e1()), Rat(100));
  std::set<QVec> vset(vs.begin(), vs.end());
  CHECK(vset.count(qvec({1, 0, 0})) == 1);
  CHECK(vset.count(qvec({0, 1, 0})) == 1);
  CHECK(vset.count(qvec({0, 0, 1})) == 1);
  CHECK(vset.count(qvec({Rat(1, 2), Rat(1, 2), Rat(1, 2)})) == 1);
  for (const QVec& v : vs)
    for (const Rat& e : v) CHECK(is_half_integral(e));

  LinearSystem one;
  one.dim = 1;
  one.rows.push_back({qvec({1}), 'L', Rat(0)});
  std::vector<QVec> v1 = vertices_dense(one, Rat(10));
  REQUIRE(v1.size() == 1);
  CHECK(v1[0] == qvec({0}));

  LinearSystem sq;
  sq.dim = 2;
  sq.rows.push_back({qvec({1, 0}), 'L', Rat(1)});
  sq.rows.push_back({qvec({-1, 0}), 'L', Rat(0)});
  sq.rows.push_back({qvec({0, 1}), 'L', Rat(1)});
  sq.rows.push_back({qvec({0, -1}), 'L', Rat(0)});
  CHECK(vertices_dense(sq, Rat(10)).size() == 4);
}

TEST_CASE("oracle_optimize both engines") {
  // P = {x <= 0}^3
  SeparationOracle nonpos = [](const QVec& x) {
    SepVerdict v;
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i] > 0) {
        QVec row(x.size(), Rat(0));
        row[i] = 1;
        v.cut = Row{row, 'L', Rat(0)};
        return v;
      }
    }
    v.inside = true;
    return v;
  };
  for (Engine eng : {Engine::cuttingplane, Engine::ellipsoid}) {
    OptimizeOutcome out = oracle_optimize(nonpos, qvec({1, 1, 1}), Rat(10), eng, 3);
    REQUIRE(!out.empty);
    QVec pt = eng == Engine::ellipsoid ? round_to_half_grid(out.point) : out.point;
    CHECK(pt == qvec({0, 0, 0}));
  }

  // E1's P_M(f) with dense-membership separation
  OracleFunction f = e1();
  SeparationOracle sep = [&f](const QVec& q) {
    PVector x(1, 3);
    x.entries = q;
    MembershipReport r = is_member_dense(x, f);
    SepVerdict v;
    if (r.member) {
      v.inside = true;
      return v;
    }
    AtomPairSelector e = max_selector(x, *r.violated);
    v.cut = Row{e.row(), 'L', rat_of(f(*r.violated))};
    return v;
  };
  for (Engine eng : {Engine::cuttingplane, Engine::ellipsoid}) {
    OptimizeOutcome out = oracle_optimize(sep, qvec({1, 1, 1}), Rat(13), eng, 3);
    REQUIRE(!out.empty);
    QVec pt = round_to_half_grid(out.point);
    CHECK(pt == qvec({Rat(1, 2), Rat(1, 2), Rat(1, 2)}));
  }
}

TEST_CASE("membership_from_optimization") {
  OracleFunction f = e1();
  auto make_opt = [](const OracleFunction& g) {
    LinearSystem sys = dense_system(g);
    return [sys](const QVec& c) {
      LpResult r = solve_lp_dense(sys, c);
      if (!std::holds_alternative<LpOptimal>(r))
        throw Error("unexpected LP outcome in test oracle");
      return std::get<LpOptimal>(r);
    };
  };
  MembershipVerdict in = membership_from_optimization(make_opt(f), 3);
  CHECK(in.inside);

  // E2 has negative values, so 0 is outside P_M(E2)
  OracleFunction neg(1, 3, [](const LatticeTuple& t) {
    return static_cast<long long>(-rank(t));
  });
  MembershipVerdict out = membership_from_optimization(make_opt(neg), 3);
  CHECK(!out.inside);
  REQUIRE(out.separator.has_value());
  // c >= 0 in the unit box, with max over the region < 0
  for (const Rat& e : *out.separator) {
    CHECK(e >= 0);
    CHECK(e <= 1);
  }
  CHECK(out.last.value < 0);

  OracleFunction zero(1, 3, [](const LatticeTuple&) { return 0LL; });
  CHECK(membership_from_optimization(make_opt(zero), 3).inside);
}

TEST_CASE("round_to_half_grid") {
  CHECK(round_to_half_grid(qvec({Rat(49, 100), Rat(-26, 100), Rat(3)})) ==
        qvec({Rat(1, 2), Rat(-1, 2), Rat(3)}));
}

TEST_CASE("linalg helpers") {
  QMat A = {qvec({1, 1}), qvec({1, -1})};
  auto x = gaussian_solve(A, qvec({3, 1}));
  REQUIRE(x.has_value());
  CHECK(*x == qvec({2, 1}));

  QMat S = {qvec({1, 2}), qvec({2, 4})};
  CHECK(!gaussian_solve(S, qvec({1, 3})).has_value());
  CHECK(matrix_rank(S) == 1);

  auto w = nullspace_vector(S, 2);
  REQUIRE(w.has_value());
  CHECK((*w)[0] * 1 + (*w)[1] * 2 == 0);
  CHECK(!(w->at(0) == 0 && w->at(1) == 0));

  QMat full = {qvec({1, 0}), qvec({0, 1})};
  CHECK(!nullspace_vector(full, 2).has_value());
}
