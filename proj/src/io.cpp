// SPDX-License-Identifier: Apache-2.0
#include "sfm/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sfm {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("invalid JSON");
  return j;
}

int get_int_field(const json& j, const char* name, int lo, int hi) {
  if (!j.contains(name)) throw Error(std::string("missing field '") + name + "'");
  if (!j[name].is_number_integer()) throw Error(std::string("field '") + name + "' must be an integer");
  long long v = j[name].get<long long>();
  if (v < lo || v > hi) throw Error(std::string("field '") + name + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

TabulatedFunction instance_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw Error("instance: top level must be an object");
  TabulatedFunction f;
  f.n = get_int_field(j, "n", 1, 16);
  f.k = get_int_field(j, "k", 3, 64);
  if (!j.contains("values") || !j["values"].is_object())
    throw Error("instance: missing object field 'values'");
  const std::uint64_t sz = tuple_space_size(f.n, f.k);
  if (j["values"].size() != sz)
    throw Error("instance: 'values' must have exactly " + std::to_string(sz) + " keys");
  f.values.assign(sz, 0);
  std::vector<bool> seen(sz, false);
  for (auto it = j["values"].begin(); it != j["values"].end(); ++it) {
    LatticeTuple t = tuple_from_string(it.key(), f.n, f.k);
    if (!it.value().is_number_integer())
      throw Error("instance: value for '" + it.key() + "' must be an integer");
    const std::uint64_t idx = tuple_index(t);
    if (seen[idx]) throw Error("instance: duplicate tuple key '" + it.key() + "'");
    seen[idx] = true;
    f.values[idx] = it.value().get<long long>();
  }
  for (std::uint64_t i = 0; i < sz; ++i)
    if (!seen[i])
      throw Error("instance: missing tuple key '" + tuple_to_string(tuple_at(i, f.n, f.k)) + "'");
  return f;
}

std::string instance_to_json(const TabulatedFunction& f) {
  json values = json::object();
  const std::uint64_t sz = tuple_space_size(f.n, f.k);
  if (f.values.size() != sz) throw Error("instance_to_json: table size mismatch");
  for (std::uint64_t i = 0; i < sz; ++i)
    values[tuple_to_string(tuple_at(i, f.n, f.k))] = f.values[i];
  json j = {{"n", f.n}, {"k", f.k}, {"values", values}};
  return j.dump(2) + "\n";
}

PVector vector_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw Error("vector: top level must be an object");
  const int n = get_int_field(j, "n", 1, 16);
  const int k = get_int_field(j, "k", 3, 64);
  if (!j.contains("entries") || !j["entries"].is_array())
    throw Error("vector: missing array field 'entries'");
  PVector x(n, k);
  for (const json& e : j["entries"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_string() || !e[2].is_string())
      throw Error("vector: each entry must be [i, \"a<j>\", \"p/q\"]");
    const long long i = e[0].get<long long>();
    if (i < 0 || i >= n) throw Error("vector: entry index out of range");
    DiamondElement a = element_from_string(e[1].get<std::string>(), k);
    if (!a.is_atom()) throw Error("vector: entry atom must be a1..a" + std::to_string(k));
    x.at(static_cast<int>(i), a.atom_index()) = parse_rat(e[2].get<std::string>());
  }
  return x;
}

std::string vector_to_json(const PVector& x) {
  json entries = json::array();
  for (int i = 0; i < x.n; ++i)
    for (int a = 1; a <= x.k; ++a)
      if (x.at(i, a) != 0)
        entries.push_back({i, "a" + std::to_string(a), format_rat(x.at(i, a))});
  json j = {{"n", x.n}, {"k", x.k}, {"entries", entries}};
  return j.dump(2) + "\n";
}

TabulatedFunction load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

void save_instance(const TabulatedFunction& f, const std::string& path) {
  write_file(path, instance_to_json(f));
}

void save_vector(const PVector& x, const std::string& path) {
  write_file(path, vector_to_json(x));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

std::string digest_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sfm
