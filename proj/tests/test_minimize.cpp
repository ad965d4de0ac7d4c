// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "sfm/minimize.hpp"

using namespace sfm;

namespace {

OracleFunction e1() {
  return OracleFunction(1, 3, [](const LatticeTuple& t) { return rank(t) == 0 ? 0LL : 1LL; });
}

OracleFunction e2() {
  return OracleFunction(1, 3, [](const LatticeTuple& t) {
    return static_cast<long long>(-rank(t));
  });
}

PVector vec1(const Rat& a, const Rat& b, const Rat& c) {
  PVector x(1, 3);
  x.at(0, 1) = a;
  x.at(0, 2) = b;
  x.at(0, 3) = c;
  return x;
}

Rat dense_opt_value(const OracleFunction& f, const QVec& c) {
  LinearSystem sys;
  sys.dim = f.n() * f.k();
  enumerate_tuples(f.n(), f.k(), [&](const LatticeTuple& t) {
    if (rank(t) == 0) return;
    enumerate_ineqs(t, [&](const AtomPairSelector& e) {
      sys.rows.push_back({e.row(), 'L', rat_of(f(t))});
    });
  });
  LpResult r = solve_lp_dense(sys, c);
  return std::get<LpOptimal>(r).value;
}

}  // namespace

TEST_CASE("chain_separate examples") {
  GreedyResult g = greedy_base(e1());
  TightChain chain{g.tight_chain, 2};
  CHECK(chain_separate(g.vector, e1(), chain).member);

  // x = (1,1,0) is tight on 0 and a but violates at Top
  TightChain c2{{LatticeTuple::all_bottom(1, 3), LatticeTuple{3, {1}},
                 LatticeTuple::all_top(1, 3)},
                2};
  SeparationResult r = chain_separate(vec1(1, 1, 0), e1(), c2);
  CHECK(!r.member);
  REQUIRE(r.tuple.has_value());
  CHECK(*r.tuple == LatticeTuple::all_top(1, 3));
  REQUIRE(r.selector.has_value());
  CHECK(r.selector->value(vec1(1, 1, 0)) > rat_of(e1()(*r.tuple)));

  TightChain triv{{LatticeTuple::all_bottom(1, 3), LatticeTuple::all_top(1, 3)}, 2};
  CHECK(chain_separate(PVector(1, 3), e1(), triv).member);
}

TEST_CASE("chain_separate agrees with dense membership") {
  std::mt19937_64 rng(3);
  int done = 0;
  for (std::uint64_t seed = 1; done < 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2), k = 3;
    OracleFunction f = normalize(random_submodular(n, k, 8, seed).oracle());
    // start from the greedy vector (member) and randomly perturb entries
    PVector x = greedy_base(f).vector;
    std::uniform_int_distribution<int> d(-2, 2);
    for (auto& e : x.entries)
      if (rng() % 2) e += d(rng);
    // trivial chain: only 0 must be tight, which always holds
    TightChain chain{{LatticeTuple::all_bottom(n, k), LatticeTuple::all_top(n, k)}, n};
    SeparationResult cs = chain_separate(x, f, chain);
    MembershipReport dm = is_member_dense(x, f);
    CHECK(cs.member == dm.member);
    if (!cs.member) {
      REQUIRE(cs.tuple.has_value());
      CHECK(apply(x, *cs.tuple) > rat_of(f(*cs.tuple)));
    }
    ++done;
  }
}

TEST_CASE("chain_separate rejects an untight chain tuple") {
  // (0,0,0) is not tight at Top for E1 (0 < 1): contract violation
  TightChain chain{{LatticeTuple::all_bottom(1, 3), LatticeTuple::all_top(1, 3),
                    LatticeTuple::all_top(1, 3)},
                   2};
  CHECK_THROWS_AS(chain_separate(PVector(1, 3), e1(), chain), Error);
}

TEST_CASE("improving_direction") {
  OracleFunction fs = strictify(e1());
  GreedyResult g = greedy_base(fs);
  VertexState v{g.vector, tight_tuples_dense(g.vector, fs)};

  QVec ones(3, Rat(1));
  Direction d = improving_direction(v, fs, ones);
  const Rat greedy_val = dot(ones, g.vector.entries);
  const Rat opt_val = dense_opt_value(fs, ones);
  REQUIRE(greedy_val < opt_val);  // greedy does not solve the LP
  CHECK(d.value == 1);
  // z improves and respects the tight cone
  CHECK(dot(ones, d.z) > 0);
  for (const LatticeTuple& t : v.tight) {
    auto [sel, zv] = max_tight_selector_against(v.x, t, d.z);
    (void)sel;
    CHECK(zv <= 0);
  }

  // c = 0: nothing to improve
  Direction d0 = improving_direction(v, fs, QVec(3, Rat(0)));
  CHECK(d0.value == 0);

  // at the dense optimum vertex the direction LP is 0
  LpOptimal opt = optimize_vertex_strict(fs, ones);
  VertexState vo{PVector(1, 3), {}};
  vo.x.entries = opt.point;
  vo.tight = tight_tuples_dense(vo.x, fs);
  Direction dopt = improving_direction(vo, fs, ones);
  CHECK(dopt.value == 0);
}

TEST_CASE("face_optimize") {
  QVec ones(3, Rat(1));
  // E1, face fixing tightness at 0 and Top: optimum (1/2,1/2,1/2)
  PVector x = vec1(Rat(1, 2), Rat(1, 2), Rat(1, 2));
  PVector y = face_optimize(ones, x, e1(),
                            {LatticeTuple::all_bottom(1, 3), LatticeTuple::all_top(1, 3)});
  CHECK(y == x);

  // face of the greedy vertex on E1 fixing {0, a, 1}: pinned to (1,0,0)
  GreedyResult g = greedy_base(e1());
  PVector yg = face_optimize(ones, g.vector, e1(), g.tight_chain);
  CHECK(yg == g.vector);
}

TEST_CASE("optimize_vertex_strict matches dense LP") {
  QVec ones(3, Rat(1));
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    OracleFunction f = normalize(random_submodular(1, 3, 6, seed).oracle());
    OracleFunction fs = strictify(f);
    PipelineStats st;
    LpOptimal got = optimize_vertex_strict(fs, ones, &st);
    CHECK(got.value == dense_opt_value(fs, ones));
    CHECK(st.progress_ok);
    CHECK(st.max_gap_jump <= 2);
  }
  OracleFunction fs1 = strictify(e1());
  CHECK(optimize_vertex_strict(fs1, ones).value == dense_opt_value(fs1, ones));
}

TEST_CASE("optimize_P") {
  QVec ones(3, Rat(1));
  auto [v1, y1] = optimize_P(ones, e1());
  CHECK(v1 == Rat(3, 2));
  CHECK(y1 == vec1(Rat(1, 2), Rat(1, 2), Rat(1, 2)));

  auto [v0, y0] = optimize_P(QVec(3, Rat(0)), e1());
  CHECK(v0 == 0);
  CHECK(is_member_dense(y0, e1()).member);

  auto [v2, y2] = optimize_P(ones, e2());
  CHECK(v2 == dense_opt_value(e2(), ones));
  CHECK(is_member_dense(y2, e2()).member);
  CHECK(dot(ones, y2.entries) == v2);

  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2), k = 3;
    OracleFunction f = normalize(random_submodular(n, k, 6, seed).oracle());
    QVec c(static_cast<size_t>(n * k));
    for (auto& e : c) e = Rat(static_cast<long>(rng() % 4));
    auto [v, y] = optimize_P(c, f);
    CHECK(v == dense_opt_value(f, c));
    CHECK(is_member_dense(y, f).member);
    CHECK(dot(c, y.entries) == v);
  }
}

TEST_CASE("separate_zero") {
  CHECK(separate_zero(e1()).inside);
  ZeroSep s = separate_zero(e2());
  CHECK(!s.inside);
  REQUIRE(s.violated.has_value());
  CHECK(e2()(*s.violated) < 0);
  OracleFunction zero(2, 3, [](const LatticeTuple&) { return 0LL; });
  CHECK(separate_zero(zero).inside);
}

TEST_CASE("min_ge") {
  CHECK(min_ge(e2(), -2));
  CHECK(!min_ge(e2(), -1));
  CHECK(min_ge(e1(), 0));
  CHECK(!min_ge(e1(), 1));
}

TEST_CASE("minimize examples") {
  MinimizeResult r1 = minimize(e1());
  CHECK(r1.min == 0);
  CHECK(r1.argmin == LatticeTuple::all_bottom(1, 3));

  MinimizeResult r2 = minimize(e2());
  CHECK(r2.min == -2);
  CHECK(r2.argmin == LatticeTuple::all_top(1, 3));

  OracleFunction c5(3, 3, [](const LatticeTuple&) { return 5LL; });
  MinimizeResult r3 = minimize(c5);
  CHECK(r3.min == 5);
  CHECK(r3.argmin == LatticeTuple::all_bottom(3, 3));
}

TEST_CASE("minimize agrees with brute force") {
  for (std::uint64_t seed = 20; seed < 32; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3), k = 3;
    OracleFunction f = random_submodular(n, k, 10, seed).oracle();
    auto [bm, bt] = brute_min(f);
    (void)bt;
    PipelineStats st;
    MinimizeOptions opt;
    opt.stats = &st;
    MinimizeResult r = minimize(f, opt);
    CHECK(r.min == bm);
    CHECK(f(r.argmin) == bm);
    CHECK(st.progress_ok);
    CHECK(st.max_gap_jump <= 2);
  }
}

TEST_CASE("dual witness properties") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2), k = 3;
    OracleFunction f0 = random_submodular(n, k, 8, seed).oracle();
    MinimizeOptions opt;
    opt.emit_dual = true;
    MinimizeResult r = minimize(f0, opt);
    REQUIRE(r.dual.has_value());
    // witness is for the normalized function
    OracleFunction fn = normalize(f0);
    const long long mn = r.min - f0(LatticeTuple::all_bottom(n, k));
    CHECK(is_member_dense(*r.dual, fn).member);
    CHECK(r.dual->nonpositive());
    CHECK(is_unified(*r.dual));
    CHECK(apply(*r.dual, LatticeTuple::all_top(n, k)) == rat_of(mn));
    CHECK(s_value(*r.dual) == rat_of(mn));
  }
}

TEST_CASE("ellipsoid engine agrees") {
  MinimizeOptions opt;
  opt.engine = Engine::ellipsoid;
  CHECK(minimize(e1(), opt).min == 0);
  CHECK(minimize(e2(), opt).min == -2);
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    OracleFunction f = random_submodular(2, 3, 8, seed).oracle();
    PipelineStats st;
    MinimizeOptions o;
    o.engine = Engine::ellipsoid;
    o.stats = &st;
    MinimizeResult r = minimize(f, o);
    CHECK(r.min == brute_min(f).first);
    CHECK(f(r.argmin) == r.min);
  }
}

TEST_CASE("segment_jump") {
  LatticeTuple a{3, {0, 0, 1}}, b{3, {4, 4, 4}};
  CHECK(segment_jump(a, b) == 2);  // two Bottom -> Top coords
  CHECK(segment_jump(a, a) == 0);
}
