#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shiftk/int_matrix.hpp"
#include "shiftk/past.hpp"

namespace shiftk {

/// U·M·V = D with U, V unimodular and D diagonal, d₁ | d₂ | …, dᵢ ≥ 0.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  [[nodiscard]] std::size_t rank() const;
  [[nodiscard]] std::vector<mpz_class> diagonal() const;
};

[[nodiscard]] SmithForm smith_normal_form(const IntMatrix& m);

/// Z^r ⊕ Z/d₁ ⊕ … ⊕ Z/d_t with d₁ | d₂ | … and every dᵢ ≥ 2.
struct FgAbelianGroup {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;

  [[nodiscard]] bool trivial() const { return free_rank == 0 && torsion.empty(); }
  /// "0", "Z", "Z^2 + Z/2 + Z/6", ...
  [[nodiscard]] std::string str() const;
  bool operator==(const FgAbelianGroup& other) const = default;
};

/// Z^rows / im(M).
[[nodiscard]] FgAbelianGroup cokernel(const IntMatrix& m);

struct Kernel {
  std::size_t rank = 0;
  std::vector<std::vector<mpz_class>> basis;
};

/// An integral basis of ker(M) ⊆ Z^cols.
[[nodiscard]] Kernel kernel(const IntMatrix& m);

/// coker(B^l) and ker(B^l) at one level of a chain; at unstabilized levels this
/// is partial data, not the K-theory.
struct LevelGroups {
  std::size_t level = 0;
  FgAbelianGroup cokernel;
  std::size_t kernel_rank = 0;
};

struct KGroups {
  FgAbelianGroup k0;
  FgAbelianGroup k1;
  std::size_t stable_at = 0;
  std::vector<LevelGroups> per_level;
};

[[nodiscard]] std::vector<LevelGroups> level_groups(const PartitionChain& chain);

/// K₀ = coker(B), K₁ = ker(B) on the stabilized stage. Throws NotStabilized
/// when the chain has not stabilized within its depth, and ConsistencyError
/// when stabilized levels disagree.
[[nodiscard]] KGroups k_groups(const PartitionChain& chain);

/// Finite certificate for the dimension triple: the stationary system
/// Z^m --step_map--> Z^m on the stabilized classes with the coordinatewise
/// positive cone.
struct StationarySystem {
  std::size_t rank = 0;
  IntMatrix step_map;
  /// Coordinates in M_1 (classes whose points have a preimage).
  std::vector<std::size_t> delta_mask;
  /// Coordinates in M_k for every k (classes with arbitrarily long pasts);
  /// the limit group is lim(Z^core, step_map restricted to core).
  std::vector<std::size_t> core;

  [[nodiscard]] IntMatrix core_map() const { return step_map.select(core, core); }
};

[[nodiscard]] StationarySystem dimension_triple(const PartitionChain& chain);

enum class VerdictKind { EquivalentCertificate, Distinguished, Inconclusive };

struct TripleVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  /// Distinguishing invariant or description of the certificate.
  std::string witness;
  /// For certificates: R and S with core₁ = R·S and core₂ = S·R (a
  /// permutation conjugacy is the case S = R⁻¹).
  std::optional<IntMatrix> left;
  std::optional<IntMatrix> right;
};

[[nodiscard]] std::string to_string(VerdictKind k);

/// Integer characteristic polynomial det(xI − M), coefficients from x⁰ upward.
[[nodiscard]] std::vector<mpz_class> characteristic_polynomial(const IntMatrix& m);

/// Compares two stationary systems. Distinguished only through shift
/// equivalence invariants of the core maps (nonzero characteristic polynomial,
/// coker(I − Aⁿ) for n ≤ depth); equivalence only through an explicit
/// permutation conjugacy or elementary strong shift equivalence with small
/// nonnegative entries.
[[nodiscard]] TripleVerdict compare_triples(const StationarySystem& s1,
                                            const StationarySystem& s2, std::size_t depth = 3);

} // namespace shiftk
