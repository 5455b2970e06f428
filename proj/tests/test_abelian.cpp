#include <random>

#include <doctest.h>

#include "support.hpp"

using namespace shiftk;
using namespace shiftk::testing;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

/// Product of random elementary operations.
IntMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> k(-3, 3);
  for (int step = 0; step < 6; ++step) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    IntMatrix e = IntMatrix::identity(n);
    e(i, j) = k(rng);
    u = e * u;
  }
  return u;
}

FgAbelianGroup group(std::size_t free_rank, std::vector<long> torsion) {
  FgAbelianGroup g;
  g.free_rank = free_rank;
  for (long t : torsion) g.torsion.emplace_back(t);
  return g;
}

bool is_unimodular(const IntMatrix& m) { return m.square() && abs(m.determinant()) == 1; }

void check_smith(const IntMatrix& m) {
  const SmithForm s = smith_normal_form(m);
  CHECK(s.U * m * s.V == s.D);
  CHECK(is_unimodular(s.U));
  CHECK(is_unimodular(s.V));
  const auto d = s.diagonal();
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) CHECK(s.D(i, j) == 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i] >= 0);
    if (i + 1 < d.size() && d[i] != 0) CHECK(d[i + 1] % d[i] == 0);
  }
}

} // namespace

TEST_CASE("Smith normal form of the worked examples") {
  CHECK(smith_normal_form(IntMatrix::identity(2)).D == IntMatrix::identity(2));
  CHECK(smith_normal_form(IntMatrix{{0, -1}, {-1, 1}}).D == IntMatrix::identity(2));
  CHECK(smith_normal_form(IntMatrix{{2, 0}, {0, 0}}).D == IntMatrix{{2, 0}, {0, 0}});
  CHECK(smith_normal_form(IntMatrix{{0, 0}, {0, 2}}).D == IntMatrix{{2, 0}, {0, 0}});
  CHECK(smith_normal_form(IntMatrix{{2, 0}, {0, 3}}).D == IntMatrix{{1, 0}, {0, 6}});
  check_smith(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  check_smith(IntMatrix(0, 3));
  check_smith(IntMatrix(2, 0));
}

TEST_CASE("Smith normal form agrees with determinantal divisors") {
  std::mt19937 rng(11);
  for (int t = 0; t < 150; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    const IntMatrix m = random_matrix(rng, dim(rng), dim(rng), -9, 9);
    CAPTURE(m.str());
    auto d = smith_normal_form(m).diagonal();
    std::vector<mpz_class> nonzero;
    for (const auto& x : d)
      if (x != 0) nonzero.push_back(x);
    CHECK(nonzero == oracle_invariant_factors(m));
    CHECK(cokernel(m) == oracle_cokernel(m));
  }
}

TEST_CASE("Smith normal form does not overflow") {
  IntMatrix m{{1000000007, 998244353}, {999999937, 1000000009}};
  m = m * m * m * m;
  check_smith(m);
  CHECK(cokernel(m) == oracle_cokernel(m));
}

TEST_CASE("cokernels and kernels") {
  for (long n = 2; n <= 6; ++n) {
    const FgAbelianGroup g = cokernel(IntMatrix{{1 - n}});
    CHECK(g == (n == 2 ? group(0, {}) : group(0, {n - 1})));
  }
  CHECK(cokernel(IntMatrix{{0, -1}, {-1, 1}}).trivial());
  CHECK(cokernel(IntMatrix{{0}}) == group(1, {}));

  CHECK(kernel(IntMatrix{{-1}}).rank == 0);
  const Kernel k0 = kernel(IntMatrix{{0}});
  CHECK(k0.rank == 1);
  CHECK(k0.basis == std::vector<std::vector<mpz_class>>{{1}});
  const Kernel k = kernel(IntMatrix{{0, 0}, {-1, 1}});
  REQUIRE(k.rank == 1);
  CHECK((k.basis[0] == std::vector<mpz_class>{1, 1} || k.basis[0] == std::vector<mpz_class>{-1, -1}));
}

TEST_CASE("group rendering") {
  CHECK(group(0, {}).str() == "0");
  CHECK(group(1, {}).str() == "Z");
  CHECK(group(2, {2, 6}).str() == "Z^2 + Z/2 + Z/6");
  CHECK(cokernel(IntMatrix{{2, 0, 0}, {0, 6, 0}, {0, 0, 12}}).str() == "Z/2 + Z/6 + Z/12");
  CHECK(cokernel(IntMatrix{{2, 0}, {0, 3}}).str() == "Z/6");
}

TEST_CASE("properties on 200 random matrices") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = dim(rng), c = dim(rng);
    const IntMatrix m = random_matrix(rng, r, c, -9, 9);
    CAPTURE(m.str());
    check_smith(m);
    const Kernel k = kernel(m);
    CHECK(k.rank + smith_normal_form(m).rank() == c);
    for (const auto& v : k.basis) {
      IntMatrix col(c, 1);
      for (std::size_t i = 0; i < c; ++i) col(i, 0) = v[i];
      CHECK((m * col).is_zero());
    }
    const IntMatrix P = random_unimodular(rng, r), Q = random_unimodular(rng, c);
    CHECK(cokernel(P * m * Q) == cokernel(m));
  }
}

TEST_CASE("K-groups") {
  auto kg = [](const Presentation& p) { return k_groups(PartitionChain::build(p, 6)); };
  const auto f2 = kg(Presentation::sft(Alphabet({"0", "1"}), {}));
  CHECK(f2.k0.trivial());
  CHECK(f2.k1.trivial());
  const auto f3 = kg(load("full3.json"));
  CHECK(f3.k0 == group(0, {2}));
  CHECK(f3.k1.trivial());
  const auto sp = kg(load("single_point.json"));
  CHECK(sp.k0 == group(1, {}));
  CHECK(sp.k1 == group(1, {}));
  CHECK(kg(load("two_fixed_points.json")).k0 == group(2, {}));

  // Level independence past stabilization.
  for (const auto& name : corpus_names()) {
    const PartitionChain c = PartitionChain::build(load(name), 8);
    const auto groups = level_groups(c);
    for (std::size_t l = *c.stable_at() + 1; l + 1 < groups.size(); ++l) {
      CHECK(groups[l].cokernel == groups[l + 1].cokernel);
      CHECK(groups[l].kernel_rank == groups[l + 1].kernel_rank);
    }
  }
}

TEST_CASE("unstabilized chains report partial data") {
  // The even shift needs two levels to stabilize.
  const PartitionChain c = PartitionChain::build(load("even_shift.json"), 2);
  CHECK_FALSE(c.stable_at().has_value());
  CHECK_THROWS_AS((void)k_groups(c), NotStabilized);
  CHECK_THROWS_AS((void)dimension_triple(c), NotStabilized);
  CHECK(level_groups(c).size() == 2);
}

TEST_CASE("dimension triples") {
  const auto sp = dimension_triple(PartitionChain::build(load("single_point.json"), 4));
  CHECK(sp.rank == 1);
  CHECK(sp.step_map == IntMatrix{{1}});
  CHECK(sp.delta_mask == std::vector<std::size_t>{0});

  const auto g = dimension_triple(PartitionChain::build(load("golden_mean.json"), 4));
  CHECK(g.rank == 2);
  CHECK(g.step_map == IntMatrix{{1, 1}, {1, 0}});
  CHECK(g.delta_mask == std::vector<std::size_t>{0, 1});

  const auto tp = dimension_triple(PartitionChain::build(load("two_points.json"), 4));
  CHECK(tp.step_map == IntMatrix{{1, 1}, {0, 0}});
  CHECK(tp.delta_mask == std::vector<std::size_t>{0});
  CHECK(tp.core == std::vector<std::size_t>{0});

  // The core is the set of classes with arbitrarily long pasts.
  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    const PartitionChain c = PartitionChain::build(p, 8);
    const auto t = dimension_triple(c);
    const std::size_t l = c.depth() - 1;
    CHECK(t.core == c.index_set_M(l, l));
    CHECK(t.delta_mask == c.index_set_M(1, l));
  }
}

TEST_CASE("characteristic polynomial") {
  CHECK(characteristic_polynomial(IntMatrix{{1, 1}, {1, 0}}) == std::vector<mpz_class>{-1, -1, 1});
  CHECK(characteristic_polynomial(IntMatrix{{3}}) == std::vector<mpz_class>{-3, 1});
  std::mt19937 rng(5);
  for (int t = 0; t < 20; ++t) {
    const IntMatrix m = random_matrix(rng, 3, 3, -4, 4);
    const auto c = characteristic_polynomial(m);
    // Cayley–Hamilton.
    IntMatrix acc(3, 3);
    for (std::size_t i = 0; i < c.size(); ++i) {
      IntMatrix term = m.power(static_cast<unsigned>(i));
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s) term(r, s) *= c[i];
      acc = acc + term;
    }
    CHECK(acc.is_zero());
  }
}

TEST_CASE("compare_triples") {
  auto triple = [](const std::string& name) { return dimension_triple(PartitionChain::build(load(name), 6)); };
  const auto g = triple("golden_mean.json");
  const auto same = compare_triples(g, g);
  CHECK(same.kind == VerdictKind::EquivalentCertificate);
  REQUIRE(same.left);
  CHECK(*same.left * *same.right == g.core_map());
  CHECK(*same.right * *same.left == g.core_map());

  CHECK(compare_triples(triple("full2.json"), triple("full3.json")).kind == VerdictKind::Distinguished);

  // Golden mean against its 2-block recoding, which has three symbols.
  const auto hb = dimension_triple(PartitionChain::build(
      Presentation::sft_matrix({{1, 1, 0}, {0, 0, 1}, {1, 1, 0}}), 6));
  const auto v = compare_triples(g, hb);
  CHECK(v.kind != VerdictKind::Distinguished);
  if (v.left) {
    CHECK(*v.left * *v.right == g.core_map());
    CHECK(*v.right * *v.left == hb.core_map());
  }

  // An elementary strong shift equivalence between [2] and [[1,1],[1,1]].
  StationarySystem a{1, IntMatrix{{2}}, {0}, {0}};
  StationarySystem b{2, IntMatrix{{1, 1}, {1, 1}}, {0, 1}, {0, 1}};
  const auto e = compare_triples(a, b);
  CHECK(e.kind == VerdictKind::EquivalentCertificate);
  REQUIRE(e.left);
  CHECK(*e.left * *e.right == a.core_map());
  CHECK(*e.right * *e.left == b.core_map());
}
