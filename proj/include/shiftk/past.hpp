#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shiftk/int_matrix.hpp"
#include "shiftk/shift.hpp"

namespace shiftk {

/// Graded predecessor sets (P_0, …, P_l) shared by every point of a class.
using Signature = std::vector<std::vector<Word>>;

/// The l-past equivalence classes E_1^l … E_{m(l)}^l over the context carrier.
struct PartitionLevel {
  std::size_t level = 0;
  /// Context indices per class, each list ascending.
  std::vector<std::vector<std::size_t>> classes;
  /// Class index of every context.
  std::vector<std::size_t> class_of;

  [[nodiscard]] std::size_t m() const { return classes.size(); }
  bool operator==(const PartitionLevel& other) const = default;
};

/// One of the maps I_k^l, A_k^l, δ_k^l written on the coordinates indexed by
/// the relevant M-sets (class indices, ascending).
struct RestrictedMap {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  IntMatrix matrix;
};

struct RestrictedMaps {
  RestrictedMap inclusion;             ///< I_k^l : Z^{M_k^l} → Z^{M_k^{l+1}}
  RestrictedMap action;                ///< A_k^l : Z^{M_k^l} → Z^{M_{k+1}^{l+1}}
  std::optional<RestrictedMap> delta;  ///< δ_k^l : Z^{M_k^l} → Z^{M_{k+1}^l}, only for k < l
};

/// Result of checking the commuting squares between consecutive levels.
struct CommutationReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// The tower of l-past partitions for l = 0…L together with I_l, the per-symbol
/// A_l, and the M-sets.
///
/// Level l+1 is obtained from level l by splitting each class according to,
/// for every symbol a, the level-l class of a·x (or the absence of a·x). This
/// is exactly equality of P_{l+1} on top of equality of P_0…P_l. Classes are
/// ordered by the key (parent class, successor class per symbol) with
/// "absent" sorting last, so once the partition stops refining the order is
/// preserved and I_l is the identity.
class PartitionChain {
public:
  /// Builds levels 0…depth; depth ≥ 1.
  static PartitionChain build(const Presentation& p, std::size_t depth, const Limits& limits = {});

  [[nodiscard]] const Presentation& presentation() const { return presentation_; }
  [[nodiscard]] const ContextCarrier& carrier() const { return carrier_; }
  [[nodiscard]] const Limits& limits() const { return limits_; }
  [[nodiscard]] std::size_t depth() const { return levels_.size() - 1; }
  [[nodiscard]] const PartitionLevel& level(std::size_t l) const;
  [[nodiscard]] std::vector<std::size_t> m_sequence() const;
  /// First l₀ whose partition equals that at l₀+1; nullopt when no such
  /// level exists within the depth.
  [[nodiscard]] std::optional<std::size_t> stable_at() const { return stable_at_; }

  /// Context index of a·x for x with context `c`, if a·x ∈ X.
  [[nodiscard]] std::optional<std::size_t> successor(std::size_t c, Symbol a) const;

  /// I_l, shape m(l+1) × m(l).
  [[nodiscard]] const IntMatrix& matrix_I(std::size_t l) const;
  /// A_l(·,·,a), shape m(l+1) × m(l).
  [[nodiscard]] const IntMatrix& matrix_A(std::size_t l, Symbol a) const;
  /// Σ_a A_l(·,·,a).
  [[nodiscard]] IntMatrix matrix_A_sum(std::size_t l) const;
  /// B^l = I_l − Σ_a A_l(·,·,a).
  [[nodiscard]] IntMatrix matrix_B(std::size_t l) const;

  /// Does every point of E_i^l have P_k ≠ ∅? Defined for k ≤ l.
  [[nodiscard]] bool predecessors_nonempty(std::size_t k, std::size_t l, std::size_t i) const;
  /// M_k^l, ascending class indices.
  [[nodiscard]] std::vector<std::size_t> index_set_M(std::size_t k, std::size_t l) const;
  [[nodiscard]] RestrictedMaps restricted_maps(std::size_t k, std::size_t l) const;

  /// (P_0, …, P_l) of class i at level l, or nullopt when the signature
  /// would exceed the signature word cap.
  [[nodiscard]] std::optional<Signature> signature(std::size_t l, std::size_t i) const;

private:
  PartitionChain(Presentation p, ContextCarrier carrier, Limits limits)
      : presentation_(std::move(p)), carrier_(std::move(carrier)), limits_(limits) {}

  void check_level(std::size_t l) const;

  Presentation presentation_;
  ContextCarrier carrier_;
  Limits limits_;
  std::vector<std::vector<std::optional<std::size_t>>> successor_;
  /// nonempty_[k][c]: P_k(x) ≠ ∅ for x with context c, k = 0…depth+1.
  std::vector<std::vector<char>> nonempty_;
  std::vector<PartitionLevel> levels_;
  std::vector<IntMatrix> inclusion_;
  std::vector<std::vector<IntMatrix>> action_;
  std::optional<std::size_t> stable_at_;
};

/// The level-l partition alone.
[[nodiscard]] PartitionLevel past_partition(const Presentation& p, std::size_t l,
                                            const Limits& limits = {});

/// Checks, for every admissible (k, l) of the chain, the squares
///   A_k^{l+1} I_k^l = I_{k+1}^{l+1} A_k^l,
///   I_{k+1}^l δ_k^l = δ_k^{l+1} I_k^l,
///   A_{k+1}^l δ_k^l = δ_{k+1}^{l+1} A_k^l,
///   B^{l+1} I_0^l = I_0^{l+1} B^l
/// as exact integer identities, restricted to l < `max_level` when given.
[[nodiscard]] CommutationReport check_commutation(const PartitionChain& chain,
                                                  std::optional<std::size_t> max_level = {});

} // namespace shiftk
