#include <doctest.h>

#include "support.hpp"

using namespace shiftk;
using namespace shiftk::testing;

namespace {

Presentation golden() { return Presentation::sft(Alphabet({"0", "1"}), {{1, 1}}); }
Presentation full(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Presentation::sft(Alphabet(names), {});
}
Presentation two_points() {
  return Presentation::finite(Alphabet({"0", "1"}), {Point({}, {0}), Point({1}, {0})});
}

} // namespace

TEST_CASE("past partitions of the worked examples") {
  for (std::size_t l = 0; l < 5; ++l) CHECK(past_partition(full(2), l).m() == 1);
  const PartitionLevel g = past_partition(golden(), 1);
  CHECK(g.m() == 2);

  const Presentation tp = two_points();
  const PartitionChain chain = PartitionChain::build(tp, 2);
  REQUIRE(chain.level(1).m() == 2);
  const auto s0 = chain.signature(1, 0);
  const auto s1 = chain.signature(1, 1);
  REQUIRE(s0);
  REQUIRE(s1);
  CHECK(*s0 == Signature{{Word{}}, {{0}, {1}}});
  CHECK(*s1 == Signature{{Word{}}, {}});
}

TEST_CASE("chains of the worked examples") {
  const PartitionChain g = PartitionChain::build(golden(), 4);
  CHECK(g.m_sequence() == std::vector<std::size_t>{1, 2, 2, 2, 2});
  CHECK(g.stable_at() == 1u);
  const PartitionChain f3 = PartitionChain::build(full(3), 3);
  CHECK(f3.m_sequence() == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(f3.stable_at() == 0u);

  const PartitionChain even = PartitionChain::build(load("even_shift.json"), 6);
  for (std::size_t l = 0; l < 6; ++l) {
    const IntMatrix& I = even.matrix_I(l);
    for (std::size_t i = 0; i < I.rows(); ++i) {
      mpz_class row = 0;
      for (std::size_t j = 0; j < I.cols(); ++j) row += I(i, j);
      CHECK(row == 1);
    }
  }
  CHECK(check_commutation(even).ok());
}

TEST_CASE("matrices I, A and B") {
  CHECK(PartitionChain::build(full(2), 2).matrix_I(0) == IntMatrix{{1}});
  const PartitionChain g = PartitionChain::build(golden(), 3);
  CHECK(g.matrix_I(0) == IntMatrix{{1}, {1}});
  CHECK(g.matrix_I(1) == IntMatrix::identity(2));
  CHECK(g.matrix_I(2) == IntMatrix::identity(2));
  CHECK(g.matrix_A_sum(1) == IntMatrix{{1, 1}, {1, 0}});
  // Class 0 holds points starting with 0, class 1 those starting with 1.
  CHECK(g.matrix_A(1, 0) == IntMatrix{{1, 0}, {1, 0}});
  CHECK(g.matrix_A(1, 1) == IntMatrix{{0, 1}, {0, 0}});
  CHECK(g.matrix_B(1) == IntMatrix{{0, -1}, {-1, 1}});
  CHECK(PartitionChain::build(full(2), 2).matrix_A_sum(1) == IntMatrix{{2}});
  CHECK(PartitionChain::build(full(4), 2).matrix_A_sum(1) == IntMatrix{{4}});
  CHECK(PartitionChain::build(full(2), 2).matrix_B(1) == IntMatrix{{-1}});
  CHECK(PartitionChain::build(load("single_point.json"), 2).matrix_B(1) == IntMatrix{{0}});

  // Rows are level-(l+1) classes: 0·0^∞ and 1·0^∞ both come from E_{0^∞}.
  const PartitionChain tp = PartitionChain::build(two_points(), 2);
  CHECK(tp.matrix_A_sum(1) == IntMatrix{{1, 1}, {0, 0}});
  CHECK_THROWS((void)tp.matrix_I(2));
}

TEST_CASE("M-sets and restricted maps") {
  const PartitionChain g = PartitionChain::build(golden(), 3);
  CHECK(g.index_set_M(1, 1) == std::vector<std::size_t>{0, 1});
  CHECK(g.restricted_maps(0, 1).action.matrix == IntMatrix{{1, 1}, {1, 0}});
  CHECK(g.restricted_maps(0, 1).delta->matrix == IntMatrix::identity(2));

  const PartitionChain tp = PartitionChain::build(two_points(), 3);
  CHECK(tp.index_set_M(1, 1) == std::vector<std::size_t>{0});
  CHECK(tp.index_set_M(0, 1) == std::vector<std::size_t>{0, 1});
  const RestrictedMaps r = tp.restricted_maps(0, 1);
  REQUIRE(r.delta);
  CHECK(r.delta->matrix == IntMatrix{{1, 0}});
  CHECK_FALSE(tp.restricted_maps(1, 1).delta.has_value());

  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    const PartitionChain c = PartitionChain::build(p, 4);
    for (std::size_t l = 0; l <= 4; ++l) {
      const auto all = c.index_set_M(0, l);
      CHECK(all.size() == c.level(l).m());
      if (sigma_surjective(p))
        for (std::size_t k = 0; k <= l; ++k) CHECK(c.index_set_M(k, l) == all);
    }
  }
}

TEST_CASE("partitions agree with the brute-force oracle for l <= 4") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const Presentation p = load(name);
    const PartitionChain c = PartitionChain::build(p, 4);
    for (std::size_t l = 0; l <= 4; ++l) {
      CAPTURE(l);
      CHECK(as_set(c.level(l)) == oracle_partition(p, c.carrier(), l));
      CHECK(as_set(past_partition(p, l)) == as_set(c.level(l)));
    }
  }
}

TEST_CASE("M-sets and A agree with direct membership") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const Presentation p = load(name);
    const PartitionChain c = PartitionChain::build(p, 4);
    const auto& w = c.carrier().witnesses;
    for (std::size_t l = 0; l < 4; ++l) {
      for (std::size_t k = 0; k <= l; ++k)
        for (std::size_t i = 0; i < c.level(l).m(); ++i) {
          const bool nonempty = !oracle_predecessors(p, w[c.level(l).classes[i][0]], k).empty();
          const auto M = c.index_set_M(k, l);
          CHECK((std::find(M.begin(), M.end(), i) != M.end()) == nonempty);
        }
      // A_l(i,j,a) = 1 iff a·x lies in E_j^l for the witnesses x of E_i^{l+1},
      // with no straddling.
      for (Symbol a = 0; a < p.alphabet().size(); ++a) {
        const IntMatrix& A = c.matrix_A(l, a);
        for (std::size_t i = 0; i < c.level(l + 1).m(); ++i) {
          std::set<std::size_t> targets;
          for (std::size_t ctx : c.level(l + 1).classes[i]) {
            const Point ax = w[ctx].prepend({a});
            if (oracle_contains(p, ax)) targets.insert(c.level(l).class_of[*c.carrier().index_of(context_of(p, ax))]);
          }
          CHECK(targets.size() <= 1);
          for (std::size_t j = 0; j < c.level(l).m(); ++j) CHECK((A(i, j) == 1) == targets.count(j));
        }
      }
    }
  }
}

TEST_CASE("refinement, stabilization permanence and determinism") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const Presentation p = load(name);
    const PartitionChain c = PartitionChain::build(p, 10);
    REQUIRE(c.stable_at());
    for (std::size_t l = *c.stable_at(); l < 10; ++l) {
      CHECK(c.level(l + 1).classes == c.level(l).classes);
      CHECK(c.matrix_I(l) == IntMatrix::identity(c.level(l).m()));
    }
    const PartitionChain again = PartitionChain::build(p, 10);
    for (std::size_t l = 0; l <= 10; ++l) CHECK(again.level(l) == c.level(l));
  }
}

TEST_CASE("delta commutes with the inclusions on the corpus") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const PartitionChain c = PartitionChain::build(load(name), 10);
    const CommutationReport r = check_commutation(c, 8);
    CHECK(r.checked > 0);
    for (const auto& v : r.violations) CHECK_MESSAGE(v.rfind("A delta", 0) == 0, v);
  }
}

TEST_CASE("the action square for delta fails without sigma-surjectivity") {
  // X = {0^∞, 10^∞}, k = 0, l = 1. δ_0^1 kills e_{10^∞} because 10^∞ has no
  // preimage, but 0^∞ ∈ M_2^2 and 1·0^∞ = 10^∞, so A_0^1 sends e_{10^∞}
  // to e_{0^∞}, which δ_1^2 keeps.
  const PartitionChain c = PartitionChain::build(two_points(), 3);
  const auto at = c.restricted_maps(0, 1);
  const auto at1 = c.restricted_maps(1, 1);
  const auto up1 = c.restricted_maps(1, 2);
  const IntMatrix lhs = at1.action.matrix * at.delta->matrix;
  const IntMatrix rhs = up1.delta->matrix * at.action.matrix;
  CHECK(lhs == IntMatrix{{1, 0}});
  CHECK(rhs == IntMatrix{{1, 1}});

  // On σ-surjective shifts every M-set is full and the square commutes.
  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    if (!sigma_surjective(p)) continue;
    CAPTURE(name);
    CHECK(check_commutation(PartitionChain::build(p, 10), 8).ok());
  }
}

TEST_CASE("signatures are elided past the cap") {
  Limits small;
  small.max_signature_words = 3;
  const PartitionChain c = PartitionChain::build(full(2), 3, small);
  CHECK(c.signature(1, 0).has_value());
  CHECK_FALSE(c.signature(2, 0).has_value());
  const Json j = chain_to_json(c, true);
  CHECK(j["levels"][2]["classes"][0]["signature"] == "elided");
}

TEST_CASE("chain export") {
  const PartitionChain g = PartitionChain::build(golden(), 3);
  const Json j = chain_to_json(g, true);
  CHECK(j["stable_at"] == 1);
  CHECK(j["levels"].size() == 4);
  CHECK(j.dump() == chain_to_json(PartitionChain::build(golden(), 3), true).dump());
}
