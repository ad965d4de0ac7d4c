// SPDX-License-Identifier: Apache-2.0
#include "sfm/certify.hpp"

#include <algorithm>

#include <json.hpp>

#include "sfm/io.hpp"

namespace sfm {

using nlohmann::json;

namespace {

// eq. (syseq-verify): lambda >= 0, y <= 0, sum lambda_i x_i + y = c, sum = 1
std::optional<QVec> solve_syseq(const std::vector<PVector>& xs, const PVector& c) {
  const int d = c.dim();
  const int V = static_cast<int>(xs.size());
  LinearSystem sys;
  sys.dim = V + d;  // lambda then y
  for (int j = 0; j < d; ++j) {
    QVec row(static_cast<size_t>(V + d), Rat(0));
    for (int i = 0; i < V; ++i) row[static_cast<size_t>(i)] = xs[static_cast<size_t>(i)].entries[static_cast<size_t>(j)];
    row[static_cast<size_t>(V + j)] = 1;
    sys.rows.push_back({row, 'E', c.entries[static_cast<size_t>(j)]});
  }
  {
    QVec row(static_cast<size_t>(V + d), Rat(0));
    for (int i = 0; i < V; ++i) row[static_cast<size_t>(i)] = 1;
    sys.rows.push_back({row, 'E', Rat(1)});
  }
  for (int i = 0; i < V; ++i) {
    QVec row(static_cast<size_t>(V + d), Rat(0));
    row[static_cast<size_t>(i)] = -1;
    sys.rows.push_back({row, 'L', Rat(0)});
  }
  for (int j = 0; j < d; ++j) {
    QVec row(static_cast<size_t>(V + d), Rat(0));
    row[static_cast<size_t>(V + j)] = 1;
    sys.rows.push_back({row, 'L', Rat(0)});
  }
  return feasibility(sys);
}

bool chain_shape_ok(const std::vector<LatticeTuple>& chain, int n, int k, std::string* why) {
  if (chain.front() != LatticeTuple::all_bottom(n, k)) {
    *why = "chain does not start at the bottom tuple";
    return false;
  }
  if (chain.back() != LatticeTuple::all_top(n, k)) {
    *why = "chain does not end at the top tuple";
    return false;
  }
  for (size_t j = 0; j + 1 < chain.size(); ++j) {
    if (!leq(chain[j], chain[j + 1])) {
      *why = "chain not weakly increasing at step " + std::to_string(j);
      return false;
    }
    if (segment_jump(chain[j], chain[j + 1]) > 1) {
      *why = "more than one Bottom->Top jump at step " + std::to_string(j);
      return false;
    }
  }
  return true;
}

}  // namespace

VerifyResult verify(const Certificate& cert, const OracleFunction& f) {
  const int n = f.n(), k = f.k();
  const int N = n * k;
  auto structural = [](const std::string& msg) { return VerifyResult{false, 0, msg}; };

  if (cert.version != 1) return structural("unsupported certificate version");
  if (cert.n != n || cert.k != k) return structural("certificate dimensions do not match the instance");
  if (static_cast<int>(cert.vectors.size()) != N + 1)
    return structural("expected " + std::to_string(N + 1) + " vectors");
  if (cert.chains.size() != cert.vectors.size()) return structural("one chain per vector required");
  for (const auto& ch : cert.chains)
    if (static_cast<int>(ch.size()) != 2 * n)
      return structural("each chain must have exactly " + std::to_string(2 * n) + " tuples");
  if (cert.witness.n() != n || cert.witness.k != k) return structural("witness tuple has wrong shape");
  if (cert.dual.n != n || cert.dual.k != k) return structural("dual vector has wrong shape");
  for (const PVector& x : cert.vectors)
    if (x.n != n || x.k != k) return structural("vector has wrong shape");
  for (const Rat& e : cert.dual.entries)
    if (!is_integer(e)) return structural("dual vector must be integer-valued");
  for (const auto& ch : cert.chains)
    for (const LatticeTuple& t : ch)
      if (t.n() != n || t.k != k) return structural("chain tuple has wrong shape");

  OracleFunction Fn = normalize(f);

  // (1) feasibility of eq. (syseq-verify)
  if (!solve_syseq(cert.vectors, cert.dual))
    return {false, 1, "no convex decomposition of the dual vector exists"};

  // (2) chain shape
  for (size_t i = 0; i < cert.chains.size(); ++i) {
    std::string why;
    if (!chain_shape_ok(cert.chains[i], n, k, &why))
      return {false, 2, "chain " + std::to_string(i) + ": " + why};
  }

  // (3) chain tuples tight
  for (size_t i = 0; i < cert.chains.size(); ++i)
    for (const LatticeTuple& t : cert.chains[i])
      if (apply(cert.vectors[i], t) != rat_of(Fn(t)))
        return {false, 3, "chain " + std::to_string(i) + ": tuple " + tuple_to_string(t) + " is not tight"};

  // (4) membership via Lemma poly-verify, jump bound 1
  for (size_t i = 0; i < cert.vectors.size(); ++i) {
    TightChain chain;
    chain.tuples = cert.chains[i];
    chain.jump_bound = 1;
    try {
      SeparationResult sr = chain_separate(cert.vectors[i], Fn, chain, SetBackend::exhaustive);
      if (!sr.member)
        return {false, 4,
                "vector " + std::to_string(i) + " is outside P_M(f), violated at " +
                    tuple_to_string(*sr.tuple)};
    } catch (const Error& e) {
      return {false, 4, "vector " + std::to_string(i) + ": " + e.what()};
    }
  }

  // (5) dual vector conditions
  if (!cert.dual.nonpositive()) return {false, 5, "dual vector is not <= 0"};
  if (!is_unified(cert.dual)) return {false, 5, "dual vector is not unified"};
  const Rat c1 = apply(cert.dual, LatticeTuple::all_top(n, k));
  if (c1 != rat_of(cert.claimed_min))
    return {false, 5, "apply(c, 1) != claimed_min"};
  if (Fn(cert.witness) != cert.claimed_min)
    return {false, 5, "witness value != claimed_min"};

  return {true, 0, ""};
}

Certificate prove(const OracleFunction& f, std::uint64_t budget) {
  const int n = f.n(), k = f.k(), d = n * k;
  const int N = d;
  if (tuple_space_size(n, k) > budget) throw Error("prove: instance exceeds the dense budget");
  if (d > 10) throw Error("prove: dense vertex enumeration limited to n*k <= 10");

  OracleFunction Fn = normalize(f);
  OracleFunction closure = monotone_closure(Fn, budget);
  PVector c = greedy_base(closure).vector;
  const LatticeTuple top = LatticeTuple::all_top(n, k);
  const long long m = rat_to_ll(apply(c, top));
  auto [bm, witness] = brute_min(Fn, budget);
  if (bm != m) throw Error("prove: dual value disagrees with the brute-force minimum");

  // dense inequality description of P_M(Fn) and its vertices
  LinearSystem sys;
  sys.dim = d;
  enumerate_tuples(n, k, [&](const LatticeTuple& t) {
    if (rank(t) == 0) return;
    const Rat b = rat_of(Fn(t));
    enumerate_ineqs(t, [&](const AtomPairSelector& e) { sys.rows.push_back({e.row(), 'L', b}); });
  }, budget);
  const Rat R = rat_of(4LL * n * k * Fn.max_abs(budget) + 1);
  std::vector<QVec> verts = vertices_dense(sys, R);
  if (verts.empty()) throw Error("prove: no vertices found (internal)");

  std::vector<PVector> vxs;
  for (const QVec& v : verts) {
    PVector x(n, k);
    x.entries = v;
    vxs.push_back(x);
  }
  std::optional<QVec> sol = solve_syseq(vxs, c);
  if (!sol) throw Error("prove: Caratheodory system infeasible (internal)");
  const int V = static_cast<int>(verts.size());

  // conic Caratheodory reduction in R^{d+1}: generators (v_i, 1) with weight
  // lambda_i and (-e_j, 0) with weight -y_j; shrink support to <= d+1
  struct Gen {
    int vertex = -1;  // else coordinate ray
    int coord = -1;
    Rat w;
  };
  std::vector<Gen> gens;
  for (int i = 0; i < V; ++i)
    if ((*sol)[static_cast<size_t>(i)] > 0) gens.push_back({i, -1, (*sol)[static_cast<size_t>(i)]});
  for (int j = 0; j < d; ++j) {
    const Rat& yj = (*sol)[static_cast<size_t>(V + j)];
    if (yj < 0) gens.push_back({-1, j, -yj});
  }
  auto column = [&](const Gen& g) {
    QVec col(static_cast<size_t>(d + 1), Rat(0));
    if (g.vertex >= 0) {
      for (int j = 0; j < d; ++j) col[static_cast<size_t>(j)] = verts[static_cast<size_t>(g.vertex)][static_cast<size_t>(j)];
      col[static_cast<size_t>(d)] = 1;
    } else {
      col[static_cast<size_t>(g.coord)] = -1;
    }
    return col;
  };
  while (static_cast<int>(gens.size()) > d + 1) {
    QMat M(static_cast<size_t>(d + 1), QVec(gens.size(), Rat(0)));
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      QVec col = column(gens[gi]);
      for (int j = 0; j <= d; ++j) M[static_cast<size_t>(j)][gi] = col[static_cast<size_t>(j)];
    }
    std::optional<QVec> w = nullspace_vector(M, static_cast<int>(gens.size()));
    if (!w) throw Error("prove: expected a conic dependence (internal)");
    bool has_pos = false;
    for (const Rat& wi : *w)
      if (wi > 0) has_pos = true;
    if (!has_pos)
      for (Rat& wi : *w) wi = -wi;
    Rat tau;
    bool first = true;
    for (size_t gi = 0; gi < gens.size(); ++gi)
      if ((*w)[gi] > 0) {
        Rat cand = gens[gi].w / (*w)[gi];
        if (first || cand < tau) { tau = cand; first = false; }
      }
    std::vector<Gen> next;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      Gen g = gens[gi];
      g.w -= tau * (*w)[gi];
      if (g.w < 0) throw Error("prove: negative weight after reduction (internal)");
      if (g.w > 0) next.push_back(g);
    }
    if (next.size() >= gens.size()) throw Error("prove: reduction stalled (internal)");
    gens = std::move(next);
  }

  std::vector<int> selected;
  for (const Gen& g : gens)
    if (g.vertex >= 0) selected.push_back(g.vertex);
  if (selected.empty()) selected.push_back(0);
  while (static_cast<int>(selected.size()) < N + 1) selected.push_back(selected.front());

  Certificate cert;
  cert.n = n;
  cert.k = k;
  cert.claimed_min = m;
  cert.witness = witness;
  cert.dual = c;
  for (int idx : selected) {
    const PVector& x = vxs[static_cast<size_t>(idx)];
    std::vector<LatticeTuple> tight = tight_tuples_dense(x, Fn, budget);
    // maximal chain from 0 to 1 inside the tight lattice: repeatedly pick a
    // minimal-rank tight tuple above the current one (Lemma atmost-one-01
    // then bounds every step's jump by one)
    std::vector<LatticeTuple> chain;
    LatticeTuple cur = LatticeTuple::all_bottom(n, k);
    if (std::find(tight.begin(), tight.end(), cur) == tight.end())
      throw Error("prove: bottom tuple not tight (internal)");
    chain.push_back(cur);
    while (cur != top) {
      const LatticeTuple* best = nullptr;
      for (const LatticeTuple& t : tight) {
        if (t == cur || !leq(cur, t)) continue;
        if (!best || rank(t) < rank(*best) || (rank(t) == rank(*best) && t < *best)) best = &t;
      }
      if (!best) throw Error("prove: top tuple not reachable in the tight set (internal)");
      chain.push_back(*best);
      cur = *best;
    }
    for (size_t j = 0; j + 1 < chain.size(); ++j)
      if (segment_jump(chain[j], chain[j + 1]) > 1)
        throw Error("prove: maximal tight chain violates Lemma atmost-one-01 (internal)");
    // fit to exactly 2n tuples
    if (static_cast<int>(chain.size()) == 2 * n + 1) chain.erase(chain.begin() + 1);
    while (static_cast<int>(chain.size()) < 2 * n) chain.insert(chain.begin() + 1, chain.front());
    if (static_cast<int>(chain.size()) != 2 * n)
      throw Error("prove: cannot fit the tight chain into 2n slots (internal)");
    cert.vectors.push_back(x);
    cert.chains.push_back(std::move(chain));
  }
  return cert;
}

std::string serialize(const Certificate& cert) {
  json vectors = json::array();
  for (const PVector& x : cert.vectors) {
    json entries = json::array();
    for (int i = 0; i < x.n; ++i)
      for (int a = 1; a <= x.k; ++a)
        if (x.at(i, a) != 0)
          entries.push_back({i, "a" + std::to_string(a), format_rat(x.at(i, a))});
    vectors.push_back(entries);
  }
  json chains = json::array();
  for (const auto& ch : cert.chains) {
    json cj = json::array();
    for (const LatticeTuple& t : ch) cj.push_back(tuple_to_string(t));
    chains.push_back(cj);
  }
  json dual = json::array();
  for (int i = 0; i < cert.dual.n; ++i)
    for (int a = 1; a <= cert.dual.k; ++a)
      if (cert.dual.at(i, a) != 0)
        dual.push_back({i, "a" + std::to_string(a), format_rat(cert.dual.at(i, a))});
  json j = {{"version", cert.version}, {"n", cert.n},       {"k", cert.k},
            {"claimed_min", cert.claimed_min}, {"witness", tuple_to_string(cert.witness)},
            {"vectors", vectors},  {"chains", chains}, {"dual", dual}};
  return j.dump(2) + "\n";
}

Certificate deserialize(const std::string& bytes) {
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw Error("certificate: invalid JSON");
  if (!j.is_object()) throw Error("certificate: top level must be an object");
  for (const char* field : {"version", "n", "k", "claimed_min", "witness", "vectors", "chains", "dual"})
    if (!j.contains(field)) throw Error(std::string("certificate: missing field '") + field + "'");
  if (!j["version"].is_number_integer() || j["version"].get<long long>() != 1)
    throw Error("certificate: unsupported schema version");
  Certificate cert;
  if (!j["n"].is_number_integer() || !j["k"].is_number_integer() ||
      !j["claimed_min"].is_number_integer())
    throw Error("certificate: 'n', 'k' and 'claimed_min' must be integers");
  cert.n = j["n"].get<int>();
  cert.k = j["k"].get<int>();
  if (cert.n < 1 || cert.n > 16 || cert.k < 3 || cert.k > 64)
    throw Error("certificate: 'n' or 'k' out of range");
  cert.claimed_min = j["claimed_min"].get<long long>();
  if (!j["witness"].is_string()) throw Error("certificate: 'witness' must be a tuple string");
  cert.witness = tuple_from_string(j["witness"].get<std::string>(), cert.n, cert.k);

  auto read_entries = [&](const json& arr, const char* what) {
    if (!arr.is_array()) throw Error(std::string("certificate: '") + what + "' must be an array");
    PVector x(cert.n, cert.k);
    for (const json& e : arr) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_string() ||
          !e[2].is_string())
        throw Error(std::string("certificate: entries of '") + what + "' must be [i, \"a<j>\", \"p/q\"]");
      const long long i = e[0].get<long long>();
      if (i < 0 || i >= cert.n) throw Error(std::string("certificate: entry index out of range in '") + what + "'");
      DiamondElement a = element_from_string(e[1].get<std::string>(), cert.k);
      if (!a.is_atom()) throw Error(std::string("certificate: entry atom invalid in '") + what + "'");
      x.at(static_cast<int>(i), a.atom_index()) = parse_rat(e[2].get<std::string>());
    }
    return x;
  };
  if (!j["vectors"].is_array()) throw Error("certificate: 'vectors' must be an array");
  for (const json& v : j["vectors"]) cert.vectors.push_back(read_entries(v, "vectors"));
  if (!j["chains"].is_array()) throw Error("certificate: 'chains' must be an array");
  for (const json& cj : j["chains"]) {
    if (!cj.is_array()) throw Error("certificate: each chain must be an array of tuple strings");
    std::vector<LatticeTuple> ch;
    for (const json& t : cj) {
      if (!t.is_string()) throw Error("certificate: chain tuples must be strings");
      ch.push_back(tuple_from_string(t.get<std::string>(), cert.n, cert.k));
    }
    cert.chains.push_back(std::move(ch));
  }
  cert.dual = read_entries(j["dual"], "dual");
  return cert;
}

}  // namespace sfm
