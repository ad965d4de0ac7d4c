// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "sfm/certify.hpp"

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

}  // namespace

TEST_CASE("prove/verify round trips") {
  Certificate c2 = prove(e2());
  CHECK(c2.claimed_min == -2);
  CHECK(c2.witness == LatticeTuple::all_top(1, 3));
  VerifyResult v2 = verify(c2, e2());
  CHECK(v2.accept);

  Certificate c1 = prove(e1());
  CHECK(c1.claimed_min == 0);
  CHECK(c1.witness == LatticeTuple::all_bottom(1, 3));
  CHECK(verify(c1, e1()).accept);

  OracleFunction zero(1, 3, [](const LatticeTuple&) { return 0LL; });
  Certificate cz = prove(zero);
  CHECK(cz.claimed_min == 0);
  CHECK(cz.dual == PVector(1, 3));
  CHECK(verify(cz, zero).accept);

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2), k = 3;
    OracleFunction f = random_submodular(n, k, 8, seed).oracle();
    Certificate c = prove(f);
    // claimed_min refers to the normalized function
    CHECK(c.claimed_min == brute_min(f).first - f(LatticeTuple::all_bottom(n, k)));
    CHECK(verify(c, f).accept);
    // structural contract
    CHECK(c.vectors.size() == static_cast<size_t>(n * k + 1));
    CHECK(c.chains.size() == c.vectors.size());
    for (const auto& ch : c.chains) CHECK(ch.size() == static_cast<size_t>(2 * n));
  }
}

TEST_CASE("verifier normalizes f") {
  OracleFunction shifted(1, 3, [](const LatticeTuple& t) {
    return static_cast<long long>(-rank(t)) + 7;
  });
  Certificate c = prove(shifted);
  CHECK(c.claimed_min == -2);
  CHECK(verify(c, shifted).accept);
}

TEST_CASE("mutation classes are rejected") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2), k = 3;
    OracleFunction f = normalize(random_submodular(n, k, 8, seed).oracle());
    Certificate base = prove(f);
    REQUIRE(verify(base, f).accept);

    // (a) one vector entry perturbed upward
    Certificate m1 = base;
    m1.vectors[0].at(0, 1) += 1;
    VerifyResult r1 = verify(m1, f);
    CHECK(!r1.accept);

    // (b) two chain tuples swapped
    Certificate m2 = base;
    std::swap(m2.chains[0].front(), m2.chains[0].back());
    VerifyResult r2 = verify(m2, f);
    if (m2.chains[0] != base.chains[0]) CHECK(!r2.accept);

    // (c) wrong claimed minimum
    Certificate m3 = base;
    m3.claimed_min -= 1;
    VerifyResult r3 = verify(m3, f);
    CHECK(!r3.accept);
    CHECK(r3.failed_check == 5);

    // (d) de-unified dual
    Certificate m4 = base;
    m4.dual.at(0, 1) -= 3;
    m4.dual.at(0, 2) -= 1;
    VerifyResult r4 = verify(m4, f);
    CHECK(!r4.accept);

    // (e) dual perturbed out of lambda-feasibility
    Certificate m5 = base;
    m5.dual.at(0, 1) += 100;
    VerifyResult r5 = verify(m5, f);
    CHECK(!r5.accept);
    CHECK(r5.failed_check == 1);
  }
}

TEST_CASE("spec mutation examples on E2") {
  Certificate base = prove(e2());

  Certificate wrong_min = base;
  wrong_min.claimed_min = -3;
  VerifyResult r = verify(wrong_min, e2());
  CHECK(!r.accept);
  CHECK(r.failed_check == 5);

  // making a chain tuple non-tight rejects at check 3 (or earlier shape/syseq)
  Certificate untight = base;
  bool mutated = false;
  for (auto& ch : untight.chains) {
    // replace the first tuple by an atom tuple; stays increasing for n=1 but
    // breaks bottom-start shape or tightness
    if (!mutated && ch.size() >= 2) {
      ch[0] = LatticeTuple{3, {1}};
      mutated = true;
    }
  }
  REQUIRE(mutated);
  CHECK(!verify(untight, e2()).accept);
}

TEST_CASE("structural rejects") {
  Certificate base = prove(e2());

  Certificate short_vecs = base;
  short_vecs.vectors.pop_back();
  short_vecs.chains.pop_back();
  VerifyResult r = verify(short_vecs, e2());
  CHECK(!r.accept);
  CHECK(r.failed_check == 0);

  Certificate bad_dim = base;
  bad_dim.n = 2;
  VerifyResult r2 = verify(bad_dim, e2());
  CHECK(!r2.accept);
  CHECK(r2.failed_check == 0);

  Certificate frac = base;
  frac.dual.at(0, 1) = Rat(-1, 2);
  VerifyResult r3 = verify(frac, e2());
  CHECK(!r3.accept);
  CHECK(r3.failed_check == 0);  // dual must be integer
}

TEST_CASE("serialize round trip") {
  Certificate c = prove(e2());
  std::string text = serialize(c);
  Certificate back = deserialize(text);
  CHECK(back.version == c.version);
  CHECK(back.n == c.n);
  CHECK(back.k == c.k);
  CHECK(back.claimed_min == c.claimed_min);
  CHECK(back.witness == c.witness);
  CHECK(back.vectors == c.vectors);
  CHECK(back.chains == c.chains);
  CHECK(back.dual == c.dual);
  CHECK(verify(back, e2()).accept);

  // truncated input is a structural error
  CHECK_THROWS_AS(deserialize(text.substr(0, text.size() / 2)), Error);
  CHECK_THROWS_AS(deserialize("{}"), Error);

  // unknown schema version mentions the version
  std::string bumped = text;
  const std::string tag = "\"version\":";
  size_t pos = bumped.find(tag);
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, tag.size() + 1, "\"version\":9");
  try {
    (void)deserialize(bumped);
    FAIL("expected version error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
}

TEST_CASE("verifier oracle-call growth is moderate") {
  std::vector<std::uint64_t> calls;
  for (int n : {1, 2}) {
    OracleFunction f = normalize(random_submodular(n, 3, 6, 5).oracle());
    Certificate c = prove(f);
    f.reset_call_count();
    REQUIRE(verify(c, f).accept);
    calls.push_back(f.call_count());
  }
  CHECK(calls[0] > 0);
  // polynomial growth, not exponential: going n=1 -> n=2 stays within a
  // generous fixed polynomial factor
  CHECK(calls[1] <= 200 * calls[0]);
}
