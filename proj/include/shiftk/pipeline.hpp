#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftk/abelian.hpp"
#include "shiftk/io.hpp"
#include "shiftk/matrix_model.hpp"

namespace shiftk {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { Table, Json };

struct RunConfig {
  std::size_t lmax = 12;
  Limits limits;
  OutputFormat format = OutputFormat::Table;
  /// Empty disables the cache.
  std::string cache_dir;

  /// Throws InvalidInput for lmax = 0 or zero caps.
  void validate() const;
};

/// Everything the invariants pipeline produces for one presentation.
struct InvariantRecord {
  std::string hash;
  std::vector<std::size_t> m_sequence;
  std::optional<std::size_t> stable_at;
  /// Present only when the chain stabilized within lmax.
  std::optional<FgAbelianGroup> k0;
  std::optional<FgAbelianGroup> k1;
  std::optional<StationarySystem> triple;
  /// coker(B^l) and rank ker(B^l) at every level, stabilized or not.
  std::vector<LevelGroups> per_level;
  std::string tool_version = kToolVersion;

  bool operator==(const InvariantRecord& other) const;
};

[[nodiscard]] Json to_json(const InvariantRecord& r);
[[nodiscard]] InvariantRecord record_from_json(const Json& j);

/// realizable contexts → chain → K-groups → stationary system.
[[nodiscard]] InvariantRecord compute_invariants(const Presentation& p, const RunConfig& config);

/// Cache key: SHA-256 over canonical presentation, lmax, caps and version.
[[nodiscard]] std::string cache_key(const Presentation& p, const RunConfig& config);

/// Returns the cached record when present and written by this tool
/// version; otherwise computes and stores it (temp file then rename).
/// `hit` reports whether the cache served the request.
[[nodiscard]] InvariantRecord cached_invariants(const Presentation& p, const RunConfig& config,
                                                bool* hit = nullptr);

struct CompareResult {
  InvariantRecord left;
  InvariantRecord right;
  VerdictKind verdict = VerdictKind::Inconclusive;
  std::string witness;
  std::optional<TripleVerdict> triple;

  /// 0 nothing distinguishes and a certificate exists, 1 distinguished,
  /// 2 inconclusive.
  [[nodiscard]] int exit_code() const;
};

/// K₀, then K₁, then the stationary systems. Throws NotStabilized when
/// either chain fails to stabilize.
[[nodiscard]] CompareResult compare_records(const InvariantRecord& a, const InvariantRecord& b);

[[nodiscard]] Json to_json(const CompareResult& r);

[[nodiscard]] Json to_json(const VerifyReport& r);

} // namespace shiftk
