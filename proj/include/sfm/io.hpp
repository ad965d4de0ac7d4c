// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "sfm/oracle.hpp"
#include "sfm/polytope.hpp"

namespace sfm {

// Instance file: { "n", "k", "values": { "<tuple>": int, ... } }, all keys.
TabulatedFunction instance_from_json(const std::string& text);
std::string instance_to_json(const TabulatedFunction& f);
TabulatedFunction load_instance(const std::string& path);
void save_instance(const TabulatedFunction& f, const std::string& path);

// Vector file: { "n", "k", "entries": [[i, "a<j>", "p/q"], ...] }.
PVector vector_from_json(const std::string& text);
std::string vector_to_json(const PVector& x);
void save_vector(const PVector& x, const std::string& path);

std::string read_file(const std::string& path);   // throws Error
void write_file(const std::string& path, const std::string& text);

// FNV-1a over the canonical serialization; the RunReport instance digest.
std::string digest_hex(const std::string& text);

}  // namespace sfm
