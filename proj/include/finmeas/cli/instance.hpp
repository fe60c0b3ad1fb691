#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "finmeas/algebra.hpp"

namespace finmeas::cli {

struct NamedFamily {
  std::string name;
  std::vector<Element> sets;
  std::size_t line = 0;  // where declared; not part of equality

  friend bool operator==(const NamedFamily& a, const NamedFamily& b) {
    return a.name == b.name && a.sets == b.sets;
  }
};

struct NamedDecomposition {
  std::string name;
  std::vector<std::string> levels;  // family names, level 0 first
  std::size_t line = 0;

  friend bool operator==(const NamedDecomposition& a, const NamedDecomposition& b) {
    return a.name == b.name && a.levels == b.levels;
  }
};

/// Validated contents of an instance file.
struct InstanceFile {
  std::size_t atom_count = 0;
  std::vector<std::string> names;  // empty, or one label per atom
  std::vector<NamedFamily> families;
  std::vector<NamedDecomposition> decompositions;

  const NamedFamily& family(std::string_view name) const;
  /// As a Family; throws InputError when the named list has no sets.
  Family to_family(const NamedFamily& family) const;
  std::vector<Family> all_families() const;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

/// Line-oriented text format:
///
///     # comment
///     atoms 7
///     names p0 p1 p2 p3 p4 p5 p6      (optional)
///     family lines:
///       {0, 1, 3}                     (atom indices or names)
///       0110100                       (bitstring, character i is atom i)
///     decomposition chain:
///       level0 level1                 (family names, level 0 first)
///
/// Throws ParseError carrying the offending line number.
InstanceFile parse_instance(std::string_view text);

/// JSON model of the same structure:
///   {"atoms": 7, "names": [...], "families": [{"name": ..., "sets": [[0,1,3], "0110100"]}],
///    "decompositions": [{"name": ..., "levels": [...]}]}
InstanceFile parse_instance_json(std::string_view text);

/// Chooses the format by extension (".json" is JSON, anything else text).
InstanceFile load_instance(const std::filesystem::path& path);

std::string serialize_text(const InstanceFile& instance);
std::string serialize_json(const InstanceFile& instance);

}  // namespace finmeas::cli
