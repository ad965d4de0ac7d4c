// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sfm/lattice.hpp"

namespace sfm {

inline constexpr std::uint64_t kDefaultEnumBudget = 20000;

// Integer-valued function on M_k^n behind an evaluation-only interface.
// Copies share the call counter (and the max|f| cache).
class OracleFunction {
 public:
  using EvalFn = std::function<long long(const LatticeTuple&)>;

  OracleFunction() = default;
  OracleFunction(int n, int k, EvalFn eval);

  int n() const { return n_; }
  int k() const { return k_; }

  long long operator()(const LatticeTuple& t) const;

  std::uint64_t call_count() const { return state_->calls.load(); }
  void reset_call_count() const { state_->calls.store(0); }

  // max over all tuples of |f(t)|; dense, cached
  long long max_abs(std::uint64_t budget = kDefaultEnumBudget) const;

 private:
  struct State {
    std::atomic<std::uint64_t> calls{0};
    std::atomic<long long> max_abs{-1};  // -1 = not computed
  };
  int n_ = 0;
  int k_ = 0;
  EvalFn eval_;
  std::shared_ptr<State> state_;
};

// Complete table over all (k+2)^n tuples; the file-format representation.
struct TabulatedFunction {
  int n = 0;
  int k = 0;
  std::vector<long long> values;  // indexed by tuple_index

  long long at(const LatticeTuple& t) const { return values[tuple_index(t)]; }
  OracleFunction oracle() const;
};

TabulatedFunction tabulate(const OracleFunction& f, std::uint64_t budget = kDefaultEnumBudget);

struct SubmodularityReport {
  bool submodular = false;
  bool strictly_submodular = false;      // strict on every incomparable pair
  std::optional<std::pair<LatticeTuple, LatticeTuple>> witness;  // violating pair
};

SubmodularityReport is_submodular(const OracleFunction& f,
                                  std::uint64_t budget = kDefaultEnumBudget);

// f - f(0); maps 0_{M^n} to 0
OracleFunction normalize(const OracleFunction& f);

// (n^2+1) f(t) + rho(t)(2n - rho(t)); strictly submodular, same minimizers
OracleFunction strictify(const OracleFunction& f);

// f'(x) = min_{y <= x} f(y); dense
OracleFunction monotone_closure(const OracleFunction& f,
                                std::uint64_t budget = kDefaultEnumBudget);

std::pair<long long, LatticeTuple> brute_min(const OracleFunction& f,
                                             std::uint64_t budget = kDefaultEnumBudget,
                                             int jobs = 1);

TabulatedFunction random_submodular(int n, int k, long long value_bound,
                                    std::uint64_t seed);

}  // namespace sfm
