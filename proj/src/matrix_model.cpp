#include "shiftk/matrix_model.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>

namespace shiftk {

// ---------------------------------------------------------- RationalMatrix

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::diagonal(const std::vector<mpq_class>& d) {
  RationalMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RationalMatrix RationalMatrix::adjoint() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpq_class& v) { return v == 0; });
}

bool RationalMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

namespace {

/// Reduced row echelon form in place; returns the pivot count.
std::size_t row_reduce(RationalMatrix& a, RationalMatrix* companion) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    auto swap_rows = [&](RationalMatrix& m) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(pivot, k), m(rank, k));
    };
    swap_rows(a);
    if (companion) swap_rows(*companion);
    const mpq_class inv = 1 / a(rank, col);
    for (std::size_t k = 0; k < a.cols(); ++k) a(rank, k) *= inv;
    if (companion)
      for (std::size_t k = 0; k < companion->cols(); ++k) (*companion)(rank, k) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == rank || a(r, col) == 0) continue;
      const mpq_class factor = a(r, col);
      for (std::size_t k = 0; k < a.cols(); ++k) a(r, k) -= factor * a(rank, k);
      if (companion)
        for (std::size_t k = 0; k < companion->cols(); ++k)
          (*companion)(r, k) -= factor * (*companion)(rank, k);
    }
    ++rank;
  }
  return rank;
}

} // namespace

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
  RationalMatrix a = *this;
  RationalMatrix inv = identity(rows_);
  if (row_reduce(a, &inv) != rows_) return std::nullopt;
  return inv;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix a = *this;
  return row_reduce(a, nullptr);
}

std::string RationalMatrix::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).get_str();
    s += "]";
  }
  return s + "]";
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const mpq_class& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum mismatch");
  RationalMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix difference mismatch");
  RationalMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ------------------------------------------------------------ FiniteModel

FiniteModel::FiniteModel(Presentation p) : p_(std::move(p)) {
  if (p_.kind() != PresentationKind::Finite)
    throw Unsupported("the operator model is only exact for finite shift spaces");
}

std::optional<std::size_t> FiniteModel::index_of(const Point& x) const {
  const auto& b = basis();
  auto it = std::lower_bound(b.begin(), b.end(), x);
  if (it == b.end() || !(*it == x)) return std::nullopt;
  return static_cast<std::size_t>(it - b.begin());
}

std::vector<std::size_t> FiniteModel::preimages(std::size_t x, std::size_t n) const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < this->n(); ++y)
    if (basis()[y].drop(n) == basis()[x]) out.push_back(y);
  return out;
}

std::vector<Word> words_up_to(std::size_t alphabet, std::size_t L) {
  std::vector<Word> out{Word{}};
  std::size_t start = 0;
  for (std::size_t len = 1; len <= L; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (Symbol a = 0; a < alphabet; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    start = end;
  }
  return out;
}

namespace {

std::vector<Word> words_of_length(std::size_t alphabet, std::size_t n) {
  std::vector<Word> out;
  for (Word& w : words_up_to(alphabet, n))
    if (w.size() == n) out.push_back(std::move(w));
  return out;
}

} // namespace

// -------------------------------------------------------------- operators

RationalMatrix op_T(const FiniteModel& m, const Word& u) {
  m.alphabet().check(u);
  RationalMatrix t(m.n(), m.n());
  for (std::size_t x = 0; x < m.n(); ++x)
    if (auto y = m.index_of(m.basis()[x].prepend(u))) t(*y, x) = 1;
  return t;
}

RationalMatrix op_phi(const FiniteModel& m, const FunctionOnX& f) {
  if (f.size() != m.n()) throw std::invalid_argument("function length differs from the model");
  return RationalMatrix::diagonal(f);
}

RationalMatrix op_lambda_X(const FiniteModel& m, const RationalMatrix& x) {
  RationalMatrix s(m.n(), m.n());
  for (Symbol a = 0; a < m.alphabet().size(); ++a) s = s + op_T(m, {a});
  return s.adjoint() * x * s;
}

FunctionOnX fn_const(const FiniteModel& m, const mpq_class& c) { return FunctionOnX(m.n(), c); }

FunctionOnX fn_chi_C(const FiniteModel& m, const Word& u, const Word& v) {
  FunctionOnX f(m.n());
  for (std::size_t x = 0; x < m.n(); ++x)
    f[x] = cylinder_member(m.presentation(), u, v, m.basis()[x]) ? 1 : 0;
  return f;
}

FunctionOnX fn_alpha(const FiniteModel& m, const FunctionOnX& f) { return fn_alpha_power(m, 1, f); }

FunctionOnX fn_alpha_power(const FiniteModel& m, std::size_t n, const FunctionOnX& f) {
  FunctionOnX g(m.n());
  for (std::size_t x = 0; x < m.n(); ++x) g[x] = f[*m.index_of(m.basis()[x].drop(n))];
  return g;
}

FunctionOnX fn_L(const FiniteModel& m, const FunctionOnX& f) { return fn_L_power(m, 1, f); }

FunctionOnX fn_L_power(const FiniteModel& m, std::size_t n, const FunctionOnX& f) {
  FunctionOnX g(m.n());
  for (std::size_t x = 0; x < m.n(); ++x) {
    const auto pre = m.preimages(x, n);
    if (pre.empty()) continue;
    mpq_class sum = 0;
    for (std::size_t y : pre) sum += f[y];
    g[x] = sum / static_cast<long>(pre.size());
  }
  return g;
}

FunctionOnX fn_L_iterated(const FiniteModel& m, std::size_t n, const FunctionOnX& f) {
  FunctionOnX g = f;
  for (std::size_t i = 0; i < n; ++i) g = fn_L(m, g);
  return g;
}

FunctionOnX fn_lambda(const FiniteModel& m, const Word& w, const FunctionOnX& f) {
  FunctionOnX g(m.n());
  for (std::size_t x = 0; x < m.n(); ++x)
    if (auto y = m.index_of(m.basis()[x].prepend(w))) g[x] = f[*y];
  return g;
}

FunctionOnX fn_preimage_count(const FiniteModel& m, std::size_t n) {
  FunctionOnX g(m.n());
  for (std::size_t x = 0; x < m.n(); ++x) {
    auto image = *m.index_of(m.basis()[x].drop(n));
    g[x] = static_cast<long>(m.preimages(image, n).size());
  }
  return g;
}

// ------------------------------------------------------------ verification

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.failed == 0; });
}

namespace {

class Recorder {
public:
  explicit Recorder(std::string title) { report_.title = std::move(title); }

  void record(const std::string& name, bool ok, const std::function<std::string()>& detail) {
    CheckReport& c = slot(name);
    ++c.checked;
    if (ok) return;
    ++c.failed;
    if (!c.first_counterexample) c.first_counterexample = detail();
  }
  VerifyReport finish() { return std::move(report_); }

private:
  CheckReport& slot(const std::string& name) {
    for (auto& c : report_.checks)
      if (c.name == name) return c;
    report_.checks.push_back({name, 0, 0, std::nullopt});
    return report_.checks.back();
  }
  VerifyReport report_;
};

std::string w(const FiniteModel& m, const Word& u) { return m.alphabet().render(u); }

std::string fstr(const FunctionOnX& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i].get_str();
  return s + ")";
}

std::string mismatch(const RationalMatrix& lhs, const RationalMatrix& rhs) {
  return "lhs " + lhs.str() + " rhs " + rhs.str();
}

/// x ↦ #σ⁻ⁿ({x}).
FunctionOnX preimage_count_at(const FiniteModel& m, std::size_t n) {
  FunctionOnX g(m.n());
  for (std::size_t x = 0; x < m.n(); ++x) g[x] = static_cast<long>(m.preimages(x, n).size());
  return g;
}

FunctionOnX times(const FunctionOnX& a, const FunctionOnX& b) {
  FunctionOnX c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
  return c;
}

/// Cylinder indicators χ_{C(u,v)} for |u|,|v| ≤ L (deduplicated) plus a few
/// seeded random rational functions.
std::vector<std::pair<std::string, FunctionOnX>> test_functions(const FiniteModel& m, std::size_t L,
                                                                unsigned seed) {
  std::vector<std::pair<std::string, FunctionOnX>> out;
  const auto words = words_up_to(m.alphabet().size(), L);
  for (const Word& u : words)
    for (const Word& v : words) {
      FunctionOnX f = fn_chi_C(m, u, v);
      if (std::none_of(out.begin(), out.end(), [&](const auto& p) { return p.second == f; }))
        out.emplace_back("chi_C(" + w(m, u) + "," + w(m, v) + ")", std::move(f));
    }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int k = 0; k < 3; ++k) {
    FunctionOnX f(m.n());
    for (auto& v : f) {
      v = mpq_class(num(rng), den(rng));
      v.canonicalize();
    }
    out.emplace_back("random" + fstr(f), std::move(f));
  }
  return out;
}

} // namespace

VerifyReport verify_representation(const FiniteModel& m, std::size_t L) {
  Recorder r("representation");
  const auto words = words_up_to(m.alphabet().size(), L);
  std::vector<RationalMatrix> t;
  for (const Word& u : words) t.push_back(op_T(m, u));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      Word uv = words[i];
      uv.insert(uv.end(), words[j].begin(), words[j].end());
      const RationalMatrix lhs = t[i] * t[j];
      const RationalMatrix rhs = op_T(m, uv);
      r.record("T_u T_v = T_uv", lhs == rhs, [&] {
        return "u=" + w(m, words[i]) + " v=" + w(m, words[j]) + ": " + mismatch(lhs, rhs);
      });
      const RationalMatrix phi = op_phi(m, fn_chi_C(m, words[i], words[j]));
      const RationalMatrix prod = t[j] * t[i].adjoint() * t[i] * t[j].adjoint();
      r.record("phi(chi_C(u,v)) = T_v T_u* T_u T_v*", phi == prod, [&] {
        return "u=" + w(m, words[i]) + " v=" + w(m, words[j]) + ": " + mismatch(phi, prod);
      });
    }
  // φ is injective: the images of the point indicators are independent.
  RationalMatrix stacked(m.n(), m.n() * m.n());
  for (std::size_t x = 0; x < m.n(); ++x) {
    FunctionOnX e(m.n());
    e[x] = 1;
    const RationalMatrix img = op_phi(m, e);
    for (std::size_t i = 0; i < m.n(); ++i)
      for (std::size_t j = 0; j < m.n(); ++j) stacked(x, i * m.n() + j) = img(i, j);
  }
  r.record("phi injective", stacked.rank() == m.n(), [&] { return "rank " + std::to_string(stacked.rank()); });
  return r.finish();
}

VerifyReport verify_structure(const FiniteModel& m, std::size_t L) {
  Recorder r("structure");
  const std::size_t n = m.n();
  const RationalMatrix id = RationalMatrix::identity(n);
  const RationalMatrix te = op_T(m, {});
  r.record("T_e = T_e* = T_e^2 = 1", te == id && te.adjoint() == id && te * te == id &&
                                          op_phi(m, fn_chi_C(m, {}, {})) == id,
           [&] { return "T_e = " + te.str(); });
  const auto words = words_up_to(m.alphabet().size(), L);
  for (const Word& u : words) {
    const RationalMatrix t = op_T(m, u);
    const RationalMatrix ts = t.adjoint();
    const RationalMatrix range = t * ts, source = ts * t;
    const RationalMatrix z = op_phi(m, fn_chi_C(m, {}, u));
    const RationalMatrix c = op_phi(m, fn_chi_C(m, u, {}));
    r.record("T_u T_u* = chi_Z(u)", range == z, [&] { return "u=" + w(m, u) + ": " + mismatch(range, z); });
    r.record("T_u* T_u = chi_C(u,e)", source == c,
             [&] { return "u=" + w(m, u) + ": " + mismatch(source, c); });
    r.record("partial isometry", t * ts * t == t && ts * t * ts == ts,
             [&] { return "u=" + w(m, u) + ": T_u = " + t.str(); });
  }
  for (const Word& u : words)
    for (const Word& v : words) {
      if (u.size() != v.size()) continue;
      const RationalMatrix lhs = op_T(m, u).adjoint() * op_T(m, v);
      const RationalMatrix rhs = u == v ? op_phi(m, fn_chi_C(m, u, {})) : RationalMatrix(n, n);
      r.record("T_u* T_v for |u| = |v|", lhs == rhs,
               [&] { return "u=" + w(m, u) + " v=" + w(m, v) + ": " + mismatch(lhs, rhs); });
    }
  return r.finish();
}

VerifyReport verify_prop_structure(const FiniteModel& m, std::size_t L, unsigned seed) {
  Recorder r("structure of monomials");
  const std::size_t na = m.alphabet().size();
  const auto fns = test_functions(m, L, seed);
  const FunctionOnX one = fn_const(m, 1);
  for (std::size_t n = 0; n <= L; ++n) {
    const auto len_n = words_of_length(na, n);
    RationalMatrix sum_t(m.n(), m.n()), count(m.n(), m.n());
    for (const Word& u : len_n) sum_t = sum_t + op_T(m, u);
    for (const Word& u : len_n)
      for (const Word& v : len_n) {
        const RationalMatrix tu = op_T(m, u), tv = op_T(m, v);
        count = count + tu * tv.adjoint() * tv * tu.adjoint();
      }
    const RationalMatrix expected_count = op_phi(m, fn_preimage_count(m, n));
    const auto tag = [&](const std::string& what) { return "n=" + std::to_string(n) + " " + what; };
    r.record("sum T_u T_v* T_v T_u* = #preimages", count == expected_count,
             [&] { return tag(mismatch(count, expected_count)); });
    const auto inv = count.inverse();
    r.record("preimage count invertible", inv.has_value() && count.is_diagonal(),
             [&] { return tag("matrix " + count.str()); });

    for (const auto& [fname, f] : fns) {
      const RationalMatrix pf = op_phi(m, f);
      for (const Word& wd : len_n) {
        const RationalMatrix tw = op_T(m, wd);
        const RationalMatrix lam = op_phi(m, fn_lambda(m, wd, f));
        const RationalMatrix a = tw.adjoint() * pf * tw;
        r.record("lambda_w(f) = T_w* f T_w", lam == a,
                 [&] { return tag("w=" + w(m, wd) + " f=" + fname + ": " + mismatch(lam, a)); });
        const RationalMatrix b1 = tw.adjoint() * pf, b2 = lam * tw.adjoint();
        r.record("T_w* f = lambda_w(f) T_w*", b1 == b2,
                 [&] { return tag("w=" + w(m, wd) + " f=" + fname + ": " + mismatch(b1, b2)); });
        const RationalMatrix c1 = tw * pf, c2 = op_phi(m, fn_alpha_power(m, n, f)) * tw;
        r.record("T_w f = alpha^n(f) T_w", c1 == c2,
                 [&] { return tag("w=" + w(m, wd) + " f=" + fname + ": " + mismatch(c1, c2)); });
      }
      RationalMatrix conj(m.n(), m.n());
      for (const Word& u : len_n) conj = conj + op_T(m, u) * pf * op_T(m, u).adjoint();
      const RationalMatrix alpha = op_phi(m, fn_alpha_power(m, n, f));
      r.record("alpha^n(f) = sum T_u f T_u*", alpha == conj,
               [&] { return tag("f=" + fname + ": " + mismatch(alpha, conj)); });
      if (inv) {
        const RationalMatrix lhs = op_phi(m, fn_L_power(m, n, f));
        const RationalMatrix rhs = sum_t.adjoint() * *inv * pf * sum_t;
        r.record("L^n(f) = (sum T_u)* D^-1 f (sum T_u)", lhs == rhs,
                 [&] { return tag("f=" + fname + ": " + mismatch(lhs, rhs)); });
      }
    }

    // Auxiliary functions built from α and 𝓛.
    FunctionOnX sum_sq(m.n());
    for (const Word& u : len_n) {
      const FunctionOnX l = fn_L_power(m, n, fn_chi_C(m, {}, u));
      for (std::size_t x = 0; x < m.n(); ++x) sum_sq[x] += l[x] * l[x];
    }
    const FunctionOnX ln1 = fn_L_power(m, n, one);
    FunctionOnX g(m.n()), fcount(m.n()), expected_g(m.n()), expected_f(m.n());
    for (std::size_t x = 0; x < m.n(); ++x) {
      g[x] = 1 - ln1[x] + sum_sq[x];
      const auto pre = m.preimages(x, n).size();
      expected_g[x] = pre ? mpq_class(1, static_cast<unsigned long>(pre)) : mpq_class(1);
      expected_f[x] = static_cast<long>(pre);
      fcount[x] = g[x] == 0 ? mpq_class(0) : mpq_class(1 / g[x] + ln1[x] - 1);
    }
    r.record("g_n = 1/#preimages or 1", g == expected_g,
             [&] { return tag(fstr(g) + " vs " + fstr(expected_g)); });
    r.record("f_n = #preimages", fcount == expected_f,
             [&] { return tag(fstr(fcount) + " vs " + fstr(expected_f)); });
    if (n == 1) {
      FunctionOnX h(m.n()), d(m.n()), eh(m.n()), ed(m.n());
      const FunctionOnX image = fn_chi_C(m, {}, {});
      FunctionOnX in_sigma(m.n()), sum_c(m.n());
      for (Symbol a = 0; a < na; ++a) {
        const FunctionOnX c = fn_chi_C(m, {a}, {});
        for (std::size_t x = 0; x < m.n(); ++x) {
          sum_c[x] += c[x];
          if (c[x] != 0) in_sigma[x] = 1;
        }
      }
      for (std::size_t x = 0; x < m.n(); ++x) {
        h[x] = 1 - in_sigma[x] + sum_c[x];
        d[x] = in_sigma[x] - 1 + 1 / h[x];
        const auto pre = m.preimages(x, 1).size();
        eh[x] = pre ? static_cast<long>(pre) : 1;
        ed[x] = pre ? mpq_class(1, static_cast<unsigned long>(pre)) : mpq_class(0);
      }
      r.record("h = #preimages or 1", h == eh, [&] { return fstr(h) + " vs " + fstr(eh); });
      r.record("d = 1/#preimages or 0", d == ed, [&] { return fstr(d) + " vs " + fstr(ed); });
    }
  }

  // χ_{C(u,v)} = χ_{Z(v)} α^{|v|}(f_{|u|} 𝓛^{|u|}(χ_{Z(u)})).
  const auto words = words_up_to(na, L);
  for (const Word& u : words)
    for (const Word& v : words) {
      const FunctionOnX inner = times(preimage_count_at(m, u.size()), fn_L_power(m, u.size(), fn_chi_C(m, {}, u)));
      const FunctionOnX rebuilt = times(fn_chi_C(m, {}, v), fn_alpha_power(m, v.size(), inner));
      const FunctionOnX direct = fn_chi_C(m, u, v);
      r.record("chi_C(u,v) from Z, alpha, L", rebuilt == direct, [&] {
        return "u=" + w(m, u) + " v=" + w(m, v) + ": " + fstr(rebuilt) + " vs " + fstr(direct);
      });
    }
  return r.finish();
}

VerifyReport verify_monomial_closure(const FiniteModel& m, std::size_t L) {
  Recorder r("monomial closure");
  const auto words = words_up_to(m.alphabet().size(), std::min<std::size_t>(L, 2));
  std::vector<FunctionOnX> fns{fn_const(m, 1)};
  FunctionOnX ramp(m.n());
  for (std::size_t x = 0; x < m.n(); ++x) {
    ramp[x] = mpq_class(static_cast<long>(x) + 1, 2);
    ramp[x].canonicalize();
  }
  fns.push_back(ramp);
  if (!words.empty() && m.alphabet().size() > 0) fns.push_back(fn_chi_C(m, {0}, {}));

  auto monomial = [&](const Word& u, const FunctionOnX& f, const Word& v) {
    return op_T(m, u) * op_phi(m, f) * op_T(m, v).adjoint();
  };
  auto concat = [](Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  auto is_prefix = [](const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
  };
  for (const Word& u : words)
    for (const Word& v : words)
      for (const Word& u2 : words)
        for (const Word& v2 : words)
          for (const auto& f : fns)
            for (const auto& f2 : fns) {
              const RationalMatrix product = monomial(u, f, v) * monomial(u2, f2, v2);
              RationalMatrix expected(m.n(), m.n());
              if (is_prefix(u2, v)) {
                const Word rest(v.begin() + static_cast<std::ptrdiff_t>(u2.size()), v.end());
                const FunctionOnX g = times(f, fn_lambda(m, rest, times(fn_chi_C(m, u2, {}), f2)));
                expected = monomial(u, g, concat(v2, rest));
              } else if (is_prefix(v, u2)) {
                const Word rest(u2.begin() + static_cast<std::ptrdiff_t>(v.size()), u2.end());
                const FunctionOnX g = times(fn_lambda(m, rest, times(f, fn_chi_C(m, v, {}))), f2);
                expected = monomial(concat(u, rest), g, v2);
              }
              r.record("monomial product formula", product == expected, [&] {
                return "(" + w(m, u) + "," + w(m, v) + ")*(" + w(m, u2) + "," + w(m, v2) +
                       "): " + mismatch(product, expected);
              });
            }
  return r.finish();
}

} // namespace shiftk
