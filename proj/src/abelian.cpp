#include "shiftk/abelian.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>

namespace shiftk {

// ------------------------------------------------------------- Smith form

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (D(i, i) != 0) ++r;
  return r;
}

std::vector<mpz_class> SmithForm::diagonal() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

namespace {

struct Reducer {
  IntMatrix a, u, v;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < u.cols(); ++k) std::swap(u(i, k), u(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.rows(); ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < v.rows(); ++k) std::swap(v(k, i), v(k, j));
  }
  /// row_i += q·row_j
  void add_row(std::size_t i, std::size_t j, const mpz_class& q) {
    for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) += q * a(j, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(i, k) += q * u(j, k);
  }
  /// col_i += q·col_j
  void add_col(std::size_t i, std::size_t j, const mpz_class& q) {
    for (std::size_t k = 0; k < a.rows(); ++k) a(k, i) += q * a(k, j);
    for (std::size_t k = 0; k < v.rows(); ++k) v(k, i) += q * v(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) = -a(i, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(i, k) = -u(i, k);
  }
};

} // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  Reducer r{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (r.a(i, j) != 0 &&
              (!best || abs(r.a(i, j)) < abs(r.a(best->first, best->second))))
            best = {i, j};
      if (!best) return {std::move(r.u), std::move(r.a), std::move(r.v)};
      r.swap_rows(t, best->first);
      r.swap_cols(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (r.a(i, t) == 0) continue;
        mpz_class q = r.a(i, t) / r.a(t, t);
        r.add_row(i, t, -q);
        if (r.a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (r.a(t, j) == 0) continue;
        mpz_class q = r.a(t, j) / r.a(t, t);
        r.add_col(j, t, -q);
        if (r.a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility of the remaining block by the pivot.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < rows && !offender; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (r.a(i, j) % r.a(t, t) != 0) {
            offender = i;
            break;
          }
      if (offender) {
        r.add_row(t, *offender, 1);
        continue;
      }
      break;
    }
    if (r.a(t, t) < 0) r.negate_row(t);
  }
  return {std::move(r.u), std::move(r.a), std::move(r.v)};
}

// ---------------------------------------------------------- groups

std::string FgAbelianGroup::str() const {
  std::vector<std::string> parts;
  if (free_rank == 1) parts.emplace_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& d : torsion) parts.push_back("Z/" + d.get_str());
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

FgAbelianGroup cokernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  FgAbelianGroup g;
  std::size_t rank = 0;
  for (const auto& d : s.diagonal()) {
    if (d == 0) continue;
    ++rank;
    if (d > 1) g.torsion.push_back(d);
  }
  g.free_rank = m.rows() - rank;
  return g;
}

Kernel kernel(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  Kernel k;
  const std::size_t r = s.rank();
  k.rank = m.cols() - r;
  for (std::size_t j = r; j < m.cols(); ++j) {
    std::vector<mpz_class> col(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) col[i] = s.V(i, j);
    k.basis.push_back(std::move(col));
  }
  return k;
}

std::vector<LevelGroups> level_groups(const PartitionChain& chain) {
  std::vector<LevelGroups> out;
  for (std::size_t l = 0; l < chain.depth(); ++l) {
    IntMatrix b = chain.matrix_B(l);
    out.push_back({l, cokernel(b), kernel(b).rank});
  }
  return out;
}

KGroups k_groups(const PartitionChain& chain) {
  auto per_level = level_groups(chain);
  if (!chain.stable_at()) {
    std::string msg = "partition chain not stabilized within depth " +
                      std::to_string(chain.depth()) + "; per-level coker(B^l):";
    for (const auto& g : per_level) msg += " l=" + std::to_string(g.level) + ":" + g.cokernel.str();
    throw NotStabilized(msg);
  }
  const std::size_t l0 = *chain.stable_at();
  KGroups k;
  k.stable_at = l0;
  k.k0 = per_level[l0].cokernel;
  k.k1.free_rank = per_level[l0].kernel_rank;
  for (std::size_t l = l0 + 1; l < per_level.size(); ++l) {
    if (!(per_level[l].cokernel == k.k0) || per_level[l].kernel_rank != k.k1.free_rank)
      throw ConsistencyError("K-groups differ between stabilized levels " + std::to_string(l0) +
                             " and " + std::to_string(l));
  }
  k.per_level = std::move(per_level);
  return k;
}

StationarySystem dimension_triple(const PartitionChain& chain) {
  if (!chain.stable_at())
    throw NotStabilized("dimension triple needs a stabilized partition chain");
  const std::size_t l0 = *chain.stable_at();
  StationarySystem s;
  s.rank = chain.level(l0).m();
  s.step_map = chain.matrix_A_sum(l0);
  for (std::size_t l = l0 + 1; l < chain.depth(); ++l)
    if (!(chain.matrix_A_sum(l) == s.step_map))
      throw ConsistencyError("step map differs between stabilized levels");

  std::vector<char> in(s.rank, 1);
  std::vector<std::vector<std::size_t>> masks;
  for (;;) {
    std::vector<char> next(s.rank, 0);
    for (std::size_t i = 0; i < s.rank; ++i)
      for (std::size_t j = 0; j < s.rank; ++j)
        if (in[j] && s.step_map(i, j) != 0) next[i] = 1;
    std::vector<std::size_t> mask;
    for (std::size_t i = 0; i < s.rank; ++i)
      if (next[i]) mask.push_back(i);
    masks.push_back(mask);
    if (next == in) break;
    in = std::move(next);
  }
  s.delta_mask = masks.front();
  s.core = masks.back();
  if (s.delta_mask != chain.index_set_M(1, std::max<std::size_t>(l0, 1)))
    throw ConsistencyError("M_1 from the step map disagrees with the partition chain");
  return s;
}

std::string to_string(VerdictKind k) {
  switch (k) {
  case VerdictKind::EquivalentCertificate: return "EquivalentCertificate";
  case VerdictKind::Distinguished: return "Distinguished";
  case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<mpz_class> characteristic_polynomial(const IntMatrix& a) {
  // Faddeev–LeVerrier; the trace divisions are exact over Z.
  const std::size_t n = a.rows();
  std::vector<mpz_class> c(n + 1);
  c[n] = 1;
  IntMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    IntMatrix am = a * mk;
    mpz_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    mpz_class q = -tr;
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = q;
  }
  return c;
}

namespace {

std::string poly_str(const std::vector<mpz_class>& c) {
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += c[i] > 0 ? " + " : " - ";
    else if (c[i] < 0) s += "-";
    mpz_class mag = abs(c[i]);
    if (mag != 1 || i == 0) s += mag.get_str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

std::vector<mpz_class> nonzero_part(std::vector<mpz_class> c) {
  while (c.size() > 1 && c.front() == 0) c.erase(c.begin());
  return c;
}

std::optional<std::vector<std::size_t>> find_permutation(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t t = 0; t < n; ++t) {
      if (used[t]) continue;
      bool ok = a(i, i) == b(t, t);
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = a(i, j) == b(t, perm[j]) && a(j, i) == b(perm[j], t);
      if (!ok) continue;
      used[t] = 1;
      perm[i] = t;
      if (place(i + 1)) return true;
      used[t] = 0;
    }
    return false;
  };
  if (place(0)) return perm;
  return std::nullopt;
}

/// A = R·S, B = S·R with 0/1 entries, R of shape n×m.
std::optional<std::pair<IntMatrix, IntMatrix>> find_elementary_sse(const IntMatrix& a,
                                                                   const IntMatrix& b) {
  const std::size_t n = a.rows(), m = b.rows();
  if (n * m > 16 || n == 0 || m == 0) return std::nullopt;
  const std::size_t cells = n * m;
  std::size_t budget = 2'000'000;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
    IntMatrix r(n, m);
    for (std::size_t k = 0; k < cells; ++k) r(k / m, k % m) = (bits >> k) & 1u;
    // Candidate columns of S for each column of A.
    std::vector<std::vector<std::vector<int>>> options(n);
    bool feasible = true;
    for (std::size_t j = 0; j < n && feasible; ++j) {
      for (std::uint64_t sb = 0; sb < (std::uint64_t{1} << m); ++sb) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          long v = 0;
          for (std::size_t k = 0; k < m; ++k)
            if ((sb >> k) & 1u) v += r(i, k).get_si();
          ok = a(i, j) == v;
        }
        if (!ok) continue;
        std::vector<int> col(m);
        for (std::size_t k = 0; k < m; ++k) col[k] = static_cast<int>((sb >> k) & 1u);
        options[j].push_back(std::move(col));
      }
      feasible = !options[j].empty();
    }
    if (!feasible) continue;
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      if (budget-- == 0) return std::nullopt;
      IntMatrix s(m, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < m; ++k) s(k, j) = options[j][pick[j]][k];
      if (s * r == b) return std::make_pair(r, s);
      std::size_t j = 0;
      while (j < n && ++pick[j] == options[j].size()) pick[j++] = 0;
      if (j == n) break;
    }
  }
  return std::nullopt;
}

} // namespace

TripleVerdict compare_triples(const StationarySystem& s1, const StationarySystem& s2,
                              std::size_t depth) {
  TripleVerdict v;
  const IntMatrix a = s1.core_map();
  const IntMatrix b = s2.core_map();

  const auto p1 = nonzero_part(characteristic_polynomial(a));
  const auto p2 = nonzero_part(characteristic_polynomial(b));
  if (p1 != p2) {
    v.kind = VerdictKind::Distinguished;
    v.witness = "nonzero characteristic polynomial: " + poly_str(p1) + " vs " + poly_str(p2);
    return v;
  }
  for (unsigned n = 1; n <= depth; ++n) {
    auto g1 = cokernel(IntMatrix::identity(a.rows()) - a.power(n));
    auto g2 = cokernel(IntMatrix::identity(b.rows()) - b.power(n));
    if (!(g1 == g2)) {
      v.kind = VerdictKind::Distinguished;
      v.witness = "coker(I - A^" + std::to_string(n) + "): " + g1.str() + " vs " + g2.str();
      return v;
    }
  }

  if (a.rows() == b.rows()) {
    if (auto perm = find_permutation(a, b)) {
      const std::size_t n = a.rows();
      IntMatrix p(n, n);
      for (std::size_t i = 0; i < n; ++i) p((*perm)[i], i) = 1;
      // B = P·A·P⁻¹ = S·R with R = P⁻¹ = Pᵀ, S = P·A.
      v.kind = VerdictKind::EquivalentCertificate;
      v.witness = "permutation conjugacy of core step maps";
      v.left = p.transpose();
      v.right = p * a;
      return v;
    }
  }
  if (auto sse = find_elementary_sse(a, b)) {
    v.kind = VerdictKind::EquivalentCertificate;
    v.witness = "elementary strong shift equivalence of core step maps";
    v.left = sse->first;
    v.right = sse->second;
    return v;
  }
  v.kind = VerdictKind::Inconclusive;
  v.witness = "shift-equivalence invariants agree; no certificate within search bounds";
  return v;
}

} // namespace shiftk
