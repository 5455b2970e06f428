#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "shiftk/shift.hpp"

namespace shiftk {

/// Dense matrix of exact rationals, row-major.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix diagonal(const std::vector<mpq_class>& d);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Conjugate transpose (entries are real).
  [[nodiscard]] RationalMatrix adjoint() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_diagonal() const;
  /// Gauss–Jordan inverse; nullopt when singular.
  [[nodiscard]] std::optional<RationalMatrix> inverse() const;
  [[nodiscard]] std::size_t rank() const;
  /// [[1,0],[0,1/2]]
  [[nodiscard]] std::string str() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

/// A function X → Q, one value per basis point.
using FunctionOnX = std::vector<mpq_class>;

/// ℓ²(X) for a finite shift space X with the orthonormal basis (e_x) in the
/// canonical point order.
class FiniteModel {
public:
  /// Throws Unsupported for non-finite presentations.
  explicit FiniteModel(Presentation p);

  [[nodiscard]] const Presentation& presentation() const { return p_; }
  [[nodiscard]] const Alphabet& alphabet() const { return p_.alphabet(); }
  [[nodiscard]] const std::vector<Point>& basis() const { return p_.finite_body().points; }
  [[nodiscard]] std::size_t n() const { return basis().size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(const Point& x) const;
  /// Indices y with σⁿ(y) = x.
  [[nodiscard]] std::vector<std::size_t> preimages(std::size_t x, std::size_t n) const;

private:
  Presentation p_;
};

/// T_u e_x = e_{ux} if ux ∈ X, else 0.
[[nodiscard]] RationalMatrix op_T(const FiniteModel& m, const Word& u);
/// φ(f) e_x = f(x) e_x.
[[nodiscard]] RationalMatrix op_phi(const FiniteModel& m, const FunctionOnX& f);
/// (Σ_a T_a)* x (Σ_b T_b).
[[nodiscard]] RationalMatrix op_lambda_X(const FiniteModel& m, const RationalMatrix& x);

[[nodiscard]] FunctionOnX fn_const(const FiniteModel& m, const mpq_class& c);
/// χ_{C(u,v)}, C(u,v) = {v·y ∈ X : y ∈ X, u·y ∈ X}.
[[nodiscard]] FunctionOnX fn_chi_C(const FiniteModel& m, const Word& u, const Word& v);
/// α(f) = f∘σ.
[[nodiscard]] FunctionOnX fn_alpha(const FiniteModel& m, const FunctionOnX& f);
[[nodiscard]] FunctionOnX fn_alpha_power(const FiniteModel& m, std::size_t n, const FunctionOnX& f);
/// 𝓛(f)(x) = mean of f over σ⁻¹(x), 0 when x ∉ σ(X).
[[nodiscard]] FunctionOnX fn_L(const FiniteModel& m, const FunctionOnX& f);
/// Mean of f over σ⁻ⁿ(x), 0 when x ∉ σⁿ(X). This is the operator the
/// 𝓛ⁿ formula of the representation produces.
[[nodiscard]] FunctionOnX fn_L_power(const FiniteModel& m, std::size_t n, const FunctionOnX& f);
/// 𝓛 applied n times; differs from fn_L_power when preimage counts vary
/// along a backward orbit.
[[nodiscard]] FunctionOnX fn_L_iterated(const FiniteModel& m, std::size_t n, const FunctionOnX& f);
/// λ_w(f)(x) = f(wx) if wx ∈ X, else 0.
[[nodiscard]] FunctionOnX fn_lambda(const FiniteModel& m, const Word& w, const FunctionOnX& f);
/// x ↦ #σ⁻ⁿ({σⁿ(x)}).
[[nodiscard]] FunctionOnX fn_preimage_count(const FiniteModel& m, std::size_t n);

/// Pass/fail tally for one identity family.
struct CheckReport {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_counterexample;
};

struct VerifyReport {
  std::string title;
  std::vector<CheckReport> checks;
  [[nodiscard]] bool ok() const;
};

/// T_u T_v = T_{uv} and φ(χ_{C(u,v)}) = T_v T_u* T_u T_v* for |u|,|v| ≤ L,
/// plus injectivity of φ.
[[nodiscard]] VerifyReport verify_representation(const FiniteModel& m, std::size_t L);

/// Unit, range and source projections (T_u T_u* = χ_{Z(u)}, T_u* T_u =
/// χ_{C(u,ε)}), partial isometries, and orthogonality for equal lengths.
[[nodiscard]] VerifyReport verify_structure(const FiniteModel& m, std::size_t L);

/// For n ≤ L, w ∈ 𝔞ⁿ and f in a test set of cylinder indicators and seeded
/// random rational functions: λ_w(f) = T_w* f T_w; T_w* f = λ_w(f) T_w*;
/// αⁿ(f) = Σ T_u f T_u*; T_w f = αⁿ(f) T_w; Σ T_u T_v* T_v T_u* =
/// #σ⁻ⁿ(σⁿ(·)) and is invertible; 𝓛ⁿ(f) = (ΣT_u)* D⁻¹ f (ΣT_u). Also the
/// auxiliary functions h, d, g_n, f_n and the reconstruction of χ_{C(u,v)}.
[[nodiscard]] VerifyReport verify_prop_structure(const FiniteModel& m, std::size_t L,
                                                 unsigned seed = 7);

/// Products of monomials T_u φ(f) T_v* are again such monomials (or zero),
/// checked against the explicit product formula.
[[nodiscard]] VerifyReport verify_monomial_closure(const FiniteModel& m, std::size_t L);

/// All words over the alphabet of length ≤ L, shortlex.
[[nodiscard]] std::vector<Word> words_up_to(std::size_t alphabet, std::size_t L);

} // namespace shiftk
