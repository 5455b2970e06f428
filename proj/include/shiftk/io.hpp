#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "shiftk/abelian.hpp"
#include "shiftk/past.hpp"
#include "shiftk/shift.hpp"

namespace shiftk {

using Json = nlohmann::json;

/// Parses a presentation file. Syntax errors report "line L, column C";
/// schema errors report the JSON pointer of the offending value. Unknown
/// fields are rejected.
[[nodiscard]] Presentation parse_presentation(std::string_view text, const Limits& limits = {});
[[nodiscard]] Presentation presentation_from_json(const Json& j, const Limits& limits = {});

/// Canonical JSON: sorted keys, trimmed sofic graphs, minimal forbidden sets,
/// normalized points. Parsing the output yields an equal presentation.
[[nodiscard]] Json to_json(const Presentation& p);
[[nodiscard]] std::string canonical_text(const Presentation& p);

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view data);
/// SHA-256 of the canonical text.
[[nodiscard]] std::string content_hash(const Presentation& p);

/// Integers that fit in 64 bits are emitted as numbers, others as strings.
[[nodiscard]] Json to_json(const mpz_class& v);
[[nodiscard]] Json to_json(const IntMatrix& m);
[[nodiscard]] IntMatrix int_matrix_from_json(const Json& j);
[[nodiscard]] Json to_json(const FgAbelianGroup& g);
[[nodiscard]] FgAbelianGroup group_from_json(const Json& j);
[[nodiscard]] Json to_json(const StationarySystem& s);
[[nodiscard]] StationarySystem stationary_from_json(const Json& j);

/// Per-level classes (with signatures when `signatures` is set, elided past
/// the cap), matrices I_l and A_l per symbol, M-sets and the stabilization
/// record.
[[nodiscard]] Json chain_to_json(const PartitionChain& chain, bool signatures = true);

/// Reads a whole file; throws InvalidInput when it cannot be opened.
[[nodiscard]] std::string read_file(const std::string& path);

} // namespace shiftk
