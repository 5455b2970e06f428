#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shiftk/io.hpp"
#include "shiftk/shift.hpp"

namespace shiftk {

/// Each source symbol a ↦ (b_a, c_a) with b_a in the first target alphabet
/// and c_a in the second.
struct BipartiteExpression {
  std::map<std::string, std::pair<std::string, std::string>> f;
};

/// Named symbol correspondence: output symbol (or source symbol) ↦ word.
struct SymbolMap {
  std::string name;
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
};

struct TransformReport {
  std::string input_hash;
  Presentation output;
  Json descriptor;
  std::vector<SymbolMap> symbol_maps;
};

[[nodiscard]] Json to_json(const TransformReport& r);

/// N-block recoding over the alphabet 𝖫^N(X). SFT input gives an SFT (a
/// vertex SFT with overlap adjacency when the memory is at most N), sofic
/// input gives a sofic graph on paths of length N−1, finite input is mapped
/// point by point. Block names are concatenated when every symbol name is a
/// single character and joined with "." otherwise.
[[nodiscard]] TransformReport higher_block(const Presentation& p, std::size_t n,
                                           const Limits& limits = {});

/// Symbolic expansion a0 ↦ a0·star on a σ-surjective shift: every a0 is
/// immediately followed by star, and star occurs only after a0.
[[nodiscard]] TransformReport symbolic_expansion(const Presentation& p, const std::string& a0,
                                                 const std::string& star,
                                                 const Limits& limits = {});

struct SplitResult {
  /// Shift over the disjoint union of both target alphabets.
  TransformReport union_shift;
  /// Induced shift over the pair symbols c_a·b_{a'}.
  TransformReport second;
};

/// Letter splitting along a bipartite expression on a σ-surjective shift.
/// Pair symbols of the second shift are named "c+b".
[[nodiscard]] SplitResult split_letters(const Presentation& p, const BipartiteExpression& f,
                                        const Limits& limits = {});

/// Applies a move descriptor {"move":"higher_block","n":N} |
/// {"move":"expand","a0":..,"star":..} | {"move":"split","f":{..}}; split
/// returns the union shift and carries the second shift as an extra report.
[[nodiscard]] std::vector<TransformReport> apply_move(const Presentation& p, const Json& move,
                                                     const Limits& limits = {});

} // namespace shiftk
