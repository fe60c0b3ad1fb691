#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "finmeas/algebra.hpp"
#include "finmeas/rational.hpp"

namespace finmeas {

struct LinkedResult {
  bool holds = true;
  std::vector<std::size_t> violating_subset;  // member indices with empty meet
};

/// Every at most n members share an atom. Throws InputError when n < 1.
LinkedResult is_n_linked(const Family& family, std::size_t n);

struct CenteredResult {
  bool holds = false;
  std::optional<std::size_t> common_atom;  // lowest atom in the total meet
};

CenteredResult is_centered(const Family& family);

/// Piece criteria for min_pieces.
struct NLinked {
  std::size_t n = 2;
};
struct IntAtLeast {
  Rational beta;
};
struct Centered {};
using PieceCriterion = std::variant<NLinked, IntAtLeast, Centered>;

/// Whether `piece` satisfies the criterion.
bool satisfies(const Family& piece, const PieceCriterion& criterion);

struct PiecePartition {
  std::size_t count = 0;
  /// Member indices per piece; each piece ascending, pieces ordered by
  /// their smallest member.
  std::vector<std::vector<std::size_t>> pieces;
  std::size_t lower_bound = 0;  // size of the pairwise-incompatible core
  std::size_t nodes = 0;        // search nodes expanded
};

/// Fewest pieces partitioning the family's members so that each piece
/// satisfies the criterion, by exact branch and bound. Throws InputError
/// for int_at_least with beta outside (0, 1] or n-linked with n < 1.
PiecePartition min_pieces(const Family& family, const PieceCriterion& criterion);

/// Materializes the pieces of a partition as families.
std::vector<Family> partition_families(const Family& family, const PiecePartition& partition);

struct LinkedRow {
  std::size_t n = 0;
  bool linked = false;
  Rational intersection_number;
};

/// One row per n = 1..n_max. The columns are reported side by side; no
/// relationship between them is implied.
std::vector<LinkedRow> linked_vs_int_report(const Family& family, std::size_t n_max);

}  // namespace finmeas
