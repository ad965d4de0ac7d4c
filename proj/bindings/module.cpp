// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sfm/certify.hpp"
#include "sfm/io.hpp"
#include "sfm/minimize.hpp"

namespace py = pybind11;
using namespace sfm;

namespace {

TabulatedFunction table_from_dict(int n, int k, const std::map<std::string, long long>& values) {
  TabulatedFunction f;
  f.n = n;
  f.k = k;
  const std::uint64_t sz = tuple_space_size(n, k);
  if (values.size() != sz) throw Error("values must have exactly (k+2)^n entries");
  f.values.assign(sz, 0);
  std::vector<bool> seen(sz, false);
  for (const auto& [key, v] : values) {
    const std::uint64_t idx = tuple_index(tuple_from_string(key, n, k));
    if (seen[idx]) throw Error("duplicate tuple key: " + key);
    seen[idx] = true;
    f.values[idx] = v;
  }
  return f;
}

std::map<std::string, std::string> vector_to_map(const PVector& x) {
  std::map<std::string, std::string> out;
  for (int i = 0; i < x.n; ++i)
    for (int a = 1; a <= x.k; ++a)
      if (x.at(i, a) != 0)
        out[std::to_string(i) + ",a" + std::to_string(a)] = format_rat(x.at(i, a));
  return out;
}

}  // namespace

PYBIND11_MODULE(_sfm_diamond, m) {
  m.doc() = "submodular function minimization over products of diamond lattices";

  py::register_exception<Error>(m, "SfmError");

  m.def("minimize",
        [](int n, int k, const std::map<std::string, long long>& values, const std::string& engine,
           bool emit_dual) {
          TabulatedFunction f = table_from_dict(n, k, values);
          MinimizeOptions opt;
          opt.engine = engine == "ellipsoid" ? Engine::ellipsoid : Engine::cuttingplane;
          opt.emit_dual = emit_dual;
          MinimizeResult res = minimize(f.oracle(), opt);
          py::dict out;
          out["min"] = res.min;
          out["argmin"] = tuple_to_string(res.argmin);
          if (res.dual) out["dual"] = vector_to_map(*res.dual);
          return out;
        },
        py::arg("n"), py::arg("k"), py::arg("values"), py::arg("engine") = "cuttingplane",
        py::arg("emit_dual") = false);

  m.def("brute_min", [](int n, int k, const std::map<std::string, long long>& values) {
    TabulatedFunction f = table_from_dict(n, k, values);
    auto [m_, t] = brute_min(f.oracle());
    return py::make_tuple(m_, tuple_to_string(t));
  });

  m.def("greedy_base", [](int n, int k, const std::map<std::string, long long>& values) {
    TabulatedFunction f = table_from_dict(n, k, values);
    return vector_to_map(greedy_base(f.oracle()).vector);
  });

  m.def("is_submodular", [](int n, int k, const std::map<std::string, long long>& values) {
    TabulatedFunction f = table_from_dict(n, k, values);
    return is_submodular(f.oracle()).submodular;
  });

  m.def("certify", [](int n, int k, const std::map<std::string, long long>& values) {
    TabulatedFunction f = table_from_dict(n, k, values);
    return serialize(prove(f.oracle()));
  });

  m.def("verify", [](int n, int k, const std::map<std::string, long long>& values,
                     const std::string& cert_json) {
    TabulatedFunction f = table_from_dict(n, k, values);
    VerifyResult vr = verify(deserialize(cert_json), f.oracle());
    py::dict out;
    out["accept"] = vr.accept;
    out["failed_check"] = vr.failed_check;
    out["reason"] = vr.reason;
    return out;
  });

  m.def("generate", [](int n, int k, long long bound, std::uint64_t seed) {
    TabulatedFunction f = random_submodular(n, k, bound, seed);
    std::map<std::string, long long> out;
    for (std::uint64_t i = 0; i < f.values.size(); ++i)
      out[tuple_to_string(tuple_at(i, n, k))] = f.values[i];
    return out;
  });
}
