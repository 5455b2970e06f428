#pragma once

// Independent oracles shared by the unit and acceptance tests. None of them
// goes through contexts, the partition chain or the Smith reduction.

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "shiftk/abelian.hpp"
#include "shiftk/io.hpp"
#include "shiftk/past.hpp"
#include "shiftk/shift.hpp"

namespace shiftk::testing {

inline std::string data_path(const std::string& name) {
  return std::string(SHIFTK_TEST_DATA) + "/" + name;
}

inline Presentation load(const std::string& name) { return parse_presentation(read_file(data_path(name))); }

/// Every valid presentation in the test corpus, by file name.
inline std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(SHIFTK_TEST_DATA)) {
    const std::string n = e.path().filename().string();
    if (e.path().extension() == ".json" && n.rfind("malformed", 0) != 0) names.push_back(n);
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// All words of length exactly k, lexicographic.
inline std::vector<Word> all_words(std::size_t alphabet, std::size_t k) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Word> next;
    for (const Word& w : out)
      for (Symbol a = 0; a < alphabet; ++a) next.push_back(concat(w, {a}));
    out = std::move(next);
  }
  return out;
}

/// Does some path of g, started at any state, read the point x? Computed on
/// the product of g with the lasso of x by a greatest fixpoint.
inline bool graph_reads(const LabeledGraph& g, const Point& x) {
  const std::size_t len = x.lasso_length();
  const std::size_t loop_to = x.preperiod().size();
  const std::size_t n = g.states.size();
  std::vector<char> alive(n * len, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t i = 0; i < len; ++i) {
        if (!alive[q * len + i]) continue;
        const std::size_t next = i + 1 == len ? loop_to : i + 1;
        bool ok = false;
        for (const Edge& e : g.edges)
          if (e.from == q && e.label == x.at(i) && alive[e.to * len + next]) ok = true;
        if (!ok) {
          alive[q * len + i] = 0;
          changed = true;
        }
      }
  }
  for (std::size_t q = 0; q < n; ++q)
    if (alive[q * len]) return true;
  return false;
}

/// Membership straight from the presentation data.
inline bool oracle_contains(const Presentation& p, const Point& x) {
  for (std::size_t i = 0; i < x.lasso_length(); ++i)
    if (x.at(i) >= p.alphabet().size()) return false;
  switch (p.kind()) {
  case PresentationKind::Finite: {
    const auto& pts = p.finite_body().points;
    return std::any_of(pts.begin(), pts.end(), [&](const Point& y) {
      for (std::size_t i = 0; i < 2 * (x.lasso_length() + y.lasso_length()); ++i)
        if (x.at(i) != y.at(i)) return false;
      return true;
    });
  }
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    if (body.adjacency) {
      for (std::size_t i = 0; i < x.lasso_length(); ++i)
        if (!(*body.adjacency)[x.at(i)][x.at(i + 1)]) return false;
      return true;
    }
    for (const Word& f : body.forbidden)
      for (std::size_t i = 0; i < x.lasso_length(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < f.size() && hit; ++j) hit = x.at(i + j) == f[j];
        if (hit) return false;
      }
    return true;
  }
  case PresentationKind::Sofic: return graph_reads(p.sofic_body().graph, x);
  }
  return false;
}

/// {u ∈ 𝔞ᵏ : u·x ∈ X} by direct membership tests.
inline std::vector<Word> oracle_predecessors(const Presentation& p, const Point& x, std::size_t k) {
  std::vector<Word> out;
  for (const Word& u : all_words(p.alphabet().size(), k))
    if (oracle_contains(p, x.prepend(u))) out.push_back(u);
  return out;
}

/// Eventually periodic sequences with |pre| ≤ max_pre and |per| ≤ max_per
/// that lie in X, deduplicated.
inline std::vector<Point> sample_points(const Presentation& p, std::size_t max_pre, std::size_t max_per) {
  std::set<Point> out;
  const std::size_t n = p.alphabet().size();
  for (std::size_t lp = 0; lp <= max_pre; ++lp)
    for (std::size_t lq = 1; lq <= max_per; ++lq)
      for (const Word& pre : all_words(n, lp))
        for (const Word& per : all_words(n, lq)) {
          Point x(pre, per);
          if (oracle_contains(p, x)) out.insert(x);
        }
  return {out.begin(), out.end()};
}

/// Partition of the carrier's contexts by (P_0(x), …, P_l(x)) of their
/// witnesses, as a set of sorted index sets.
inline std::set<std::vector<std::size_t>> oracle_partition(const Presentation& p, const ContextCarrier& c,
                                                           std::size_t l) {
  std::map<std::vector<std::vector<Word>>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::vector<Word>> key;
    for (std::size_t k = 0; k <= l; ++k) key.push_back(oracle_predecessors(p, c.witnesses[i], k));
    groups[key].push_back(i);
  }
  std::set<std::vector<std::size_t>> out;
  for (auto& [key, members] : groups) out.insert(members);
  return out;
}

inline std::set<std::vector<std::size_t>> as_set(const PartitionLevel& lv) {
  return {lv.classes.begin(), lv.classes.end()};
}

/// Invariant factors from determinantal divisors: d_k = gcd of the k×k
/// minors, factor_k = d_k / d_{k-1}.
inline std::vector<mpz_class> oracle_invariant_factors(const IntMatrix& m) {
  const std::size_t r = std::min(m.rows(), m.cols());
  auto subsets = [](std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (cur.size() == k) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  };
  std::vector<mpz_class> d{1};
  for (std::size_t k = 1; k <= r; ++k) {
    mpz_class g = 0;
    for (const auto& rows : subsets(m.rows(), k))
      for (const auto& cols : subsets(m.cols(), k)) g = gcd(g, m.select(rows, cols).determinant());
    if (g == 0) break;
    d.push_back(g);
  }
  std::vector<mpz_class> factors;
  for (std::size_t k = 1; k < d.size(); ++k) factors.push_back(d[k] / d[k - 1]);
  return factors;
}

/// Cokernel from determinantal divisors.
inline FgAbelianGroup oracle_cokernel(const IntMatrix& m) {
  const auto f = oracle_invariant_factors(m);
  FgAbelianGroup g;
  g.free_rank = m.rows() - f.size();
  for (const auto& d : f)
    if (d != 1) g.torsion.push_back(abs(d));
  return g;
}

} // namespace shiftk::testing
