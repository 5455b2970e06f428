#include <doctest.h>

#include "shiftk/transforms.hpp"
#include "support.hpp"

using namespace shiftk;
using namespace shiftk::testing;

namespace {

const SymbolMap& symbol_map(const TransformReport& r, const std::string& name) {
  for (const auto& m : r.symbol_maps)
    if (m.name == name) return m;
  throw std::runtime_error("no symbol map " + name);
}

/// Source word of every output symbol, from the report.
std::vector<Word> decoding(const TransformReport& r, const std::string& map, const Alphabet& src) {
  std::vector<Word> out(r.output.alphabet().size());
  for (const auto& [sym, letters] : symbol_map(r, map).entries) out[r.output.alphabet().at(sym)] = src.parse(letters);
  return out;
}

/// x ↦ (x_{[i,i+N)})_i.
Point block_image(const Point& x, std::size_t n, const std::vector<Word>& blocks) {
  auto code = [&](std::size_t i) {
    const Word w = x.prefix(i + n);
    const Word block(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    return static_cast<Symbol>(std::find(blocks.begin(), blocks.end(), block) - blocks.begin());
  };
  Word pre, per;
  for (std::size_t i = 0; i < x.preperiod().size(); ++i) pre.push_back(code(i));
  for (std::size_t i = x.preperiod().size(); i < x.lasso_length(); ++i) per.push_back(code(i));
  return Point(pre, per);
}

/// Letterwise image of a point under a symbol substitution.
Point substitute(const Point& x, const std::vector<Word>& image) {
  Word pre, per;
  for (Symbol s : x.preperiod()) pre = concat(pre, image[s]);
  for (Symbol s : x.period()) per = concat(per, image[s]);
  return Point(pre, per);
}

/// Reads z two letters at a time as images of source letters.
std::optional<Point> decode_pairs(const Point& z, const std::vector<Word>& images) {
  const std::size_t pre_pairs = (z.preperiod().size() + 1) / 2;
  const std::size_t per_letters = z.period().size() % 2 ? 2 * z.period().size() : z.period().size();
  Word pre, per;
  for (std::size_t i = 0; i < pre_pairs + per_letters / 2; ++i) {
    const Word pair{z.at(2 * i), z.at(2 * i + 1)};
    const auto it = std::find(images.begin(), images.end(), pair);
    if (it == images.end()) return std::nullopt;
    (i < pre_pairs ? pre : per).push_back(static_cast<Symbol>(it - images.begin()));
  }
  return Point(pre, per);
}

} // namespace

TEST_CASE("higher block recodings of the worked examples") {
  const auto f2 = higher_block(load("full2.json"), 2);
  CHECK(f2.output.kind() == PresentationKind::Sft);
  CHECK(f2.output.alphabet().names() == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK(f2.output.sft_body().adjacency ==
        std::vector<std::vector<int>>{{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}});

  const auto g = higher_block(load("golden_mean.json"), 2);
  CHECK(g.output.alphabet().names() == std::vector<std::string>{"00", "01", "10"});
  CHECK(g.output.sft_body().adjacency == std::vector<std::vector<int>>{{1, 1, 0}, {0, 0, 1}, {1, 1, 0}});
  CHECK(g.input_hash == content_hash(load("golden_mean.json")));

  Limits small;
  small.max_alphabet = 8;
  CHECK_THROWS_AS((void)higher_block(load("full2.json"), 4, small), CapExceeded);
  CHECK_THROWS_AS((void)higher_block(load("full2.json"), 1), InvalidInput);
}

TEST_CASE("higher block recodings are conjugate to the input") {
  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    for (std::size_t n = 2; n <= 3; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      const auto r = higher_block(p, n);
      const Presentation& q = r.output;
      for (std::size_t k = 0; k <= 3; ++k)
        CHECK(language(q, k).size() == language(p, k == 0 ? 0 : k + n - 1).size());

      const auto blocks = decoding(r, "block", p.alphabet());
      for (const Point& x : sample_points(p, 2, 3)) CHECK(oracle_contains(q, block_image(x, n, blocks)));
      // Every output point overlaps consistently and decodes to an input point.
      for (const Point& y : sample_points(q, 1, 2)) {
        for (std::size_t i = 0; i < y.lasso_length(); ++i) {
          const Word& a = blocks[y.at(i)];
          const Word& b = blocks[y.at(i + 1)];
          CHECK(std::equal(a.begin() + 1, a.end(), b.begin()));
        }
        Word pre, per;
        for (Symbol s : y.preperiod()) pre.push_back(blocks[s][0]);
        for (Symbol s : y.period()) per.push_back(blocks[s][0]);
        CHECK(oracle_contains(p, Point(pre, per)));
      }
    }
  }
}

TEST_CASE("symbolic expansion of the worked examples") {
  const auto sp = symbolic_expansion(load("single_point.json"), "0", "*");
  REQUIRE(sp.output.kind() == PresentationKind::Finite);
  const Symbol z = sp.output.alphabet().at("0"), s = sp.output.alphabet().at("*");
  CHECK(sp.output.finite_body().points == std::vector<Point>{Point({}, {z, s}), Point({}, {s, z})});

  const auto f2 = symbolic_expansion(load("full2.json"), "0", "*");
  CHECK(f2.output.alphabet().size() == 3);
  CHECK(language(f2.output, 2).size() == 5);  // 0*, *0, *1, 10, 11

  CHECK_THROWS_AS((void)symbolic_expansion(load("full2.json"), "0", "1"), InvalidInput);
  CHECK_THROWS_AS((void)symbolic_expansion(load("full2.json"), "7", "*"), AlphabetMismatch);
  CHECK_THROWS_AS((void)symbolic_expansion(load("two_points.json"), "0", "*"), InvalidInput);
}

TEST_CASE("symbolic expansion has exactly the expanded points and their shifts") {
  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    if (!sigma_surjective(p)) continue;
    const std::string a0 = p.alphabet().name(p.alphabet().size() - 1);
    CAPTURE(name);
    const auto r = symbolic_expansion(p, a0, "*");
    const Presentation& q = r.output;
    const Symbol a = q.alphabet().at(a0), star = q.alphabet().at("*");
    const Symbol src_a = p.alphabet().at(a0);

    // η(x) and σ(η(x)) are members.
    std::vector<Word> eta(p.alphabet().size());
    for (Symbol t = 0; t < p.alphabet().size(); ++t)
      eta[t] = t == src_a ? Word{a, star} : Word{q.alphabet().at(p.alphabet().name(t))};
    for (const Point& x : sample_points(p, 2, 3)) {
      const Point y = substitute(x, eta);
      CHECK(oracle_contains(q, y));
      CHECK(oracle_contains(q, y.drop(1)));
    }
    // Members are exactly those: a0 always followed by *, * only after a0,
    // and collapsing a0* recovers an input point.
    for (const Point& y : sample_points(q, 2, 3)) {
      const Point z = y.at(0) == star ? y.prepend({a}) : y;
      bool shaped = true;
      for (std::size_t i = 0; i < z.lasso_length() + 1; ++i) {
        if (z.at(i) == a && z.at(i + 1) != star) shaped = false;
        if (z.at(i + 1) == star && z.at(i) != a) shaped = false;
      }
      CHECK(shaped);
      auto collapse = [&](const Word& w) {
        Word out;
        for (Symbol t : w)
          if (t != star) out.push_back(p.alphabet().at(q.alphabet().name(t)));
        return out;
      };
      CHECK(oracle_contains(p, Point(collapse(z.preperiod()), collapse(z.period()))));
    }
  }
}

TEST_CASE("letter splitting of the worked examples") {
  const BipartiteExpression f{{{"0", {"b0", "c0"}}, {"1", {"b1", "c1"}}}};
  const SplitResult full = split_letters(load("full2.json"), f);
  CHECK(full.union_shift.output.alphabet().names() == std::vector<std::string>{"b0", "b1", "c0", "c1"});
  // The second shift is the 2-block recoding up to renaming c_s+b_t ↔ st.
  const auto hb = higher_block(load("full2.json"), 2);
  CHECK(full.second.output.alphabet().size() == hb.output.alphabet().size());
  for (std::size_t k = 0; k <= 4; ++k)
    CHECK(language(full.second.output, k).size() == language(hb.output, k).size());

  const BipartiteExpression g{{{"0", {"b", "c"}}}};
  const SplitResult sp = split_letters(load("single_point.json"), g);
  const Alphabet& ua = sp.union_shift.output.alphabet();
  const Symbol b = ua.at("b"), c = ua.at("c");
  CHECK(sp.union_shift.output.finite_body().points == std::vector<Point>{Point({}, {b, c}), Point({}, {c, b})});
  CHECK(sp.second.output.finite_body().points.size() == 1);

  const Presentation golden = load("golden_mean.json");
  const SplitResult gs = split_letters(golden, f);
  CHECK(gs.union_shift.output.sofic_body().graph.edges.size() == 2 * to_graph(golden).edges.size());

  CHECK_THROWS_AS((void)split_letters(load("two_points.json"), f), InvalidInput);
  const BipartiteExpression clash{{{"0", {"b", "c"}}, {"1", {"b", "c"}}}};
  CHECK_THROWS_AS((void)split_letters(load("full2.json"), clash), InvalidInput);
  const BipartiteExpression partial{{{"0", {"b", "c"}}}};
  CHECK_THROWS_AS((void)split_letters(load("full2.json"), partial), AlphabetMismatch);
  const BipartiteExpression overlap{{{"0", {"x", "y"}}, {"1", {"y", "z"}}}};
  CHECK_THROWS_AS((void)split_letters(load("full2.json"), overlap), InvalidInput);
}

TEST_CASE("letter splitting has exactly the split points") {
  // The second expression reuses c on both symbols: the union shift still
  // splits every letter but the second shift forgets which letter came first.
  const std::vector<BipartiteExpression> fs{
      {{{"0", {"b0", "c0"}}, {"1", {"b1", "c1"}}}},
      {{{"0", {"b0", "c"}}, {"1", {"b1", "c"}}}},
  };
  for (const auto& name : corpus_names()) {
    const Presentation p = load(name);
    if (!sigma_surjective(p) || p.alphabet().names() != std::vector<std::string>{"0", "1"}) continue;
    for (const auto& f : fs) {
      CAPTURE(name);
      const SplitResult r = split_letters(p, f);
      const Presentation& u = r.union_shift.output;
      const Alphabet& ua = u.alphabet();
      std::vector<Word> split(2);
      std::vector<Symbol> bs(2), cs(2);
      for (Symbol s = 0; s < 2; ++s) {
        const auto& [b, c] = f.f.at(p.alphabet().name(s));
        bs[s] = ua.at(b);
        cs[s] = ua.at(c);
        split[s] = {bs[s], cs[s]};
      }
      auto is_b = [&](Symbol t) { return t == bs[0] || t == bs[1]; };
      for (const Point& x : sample_points(p, 2, 3)) {
        CHECK(oracle_contains(u, substitute(x, split)));
        CHECK(oracle_contains(u, substitute(x, split).drop(1)));
      }
      for (const Point& y : sample_points(u, 2, 4)) {
        // Alternation of the two letter classes.
        for (std::size_t i = 0; i < y.lasso_length(); ++i) CHECK(is_b(y.at(i)) != is_b(y.at(i + 1)));
        // Decoding: a leading c is padded with the b of its own letter.
        bool found = false;
        for (Symbol s = 0; s < 2 && !found; ++s) {
          if (!is_b(y.at(0)) && y.at(0) != cs[s]) continue;
          const Point z = is_b(y.at(0)) ? y : y.prepend({bs[s]});
          if (auto x = decode_pairs(z, split)) found = oracle_contains(p, *x);
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("move descriptors") {
  const Presentation p = load("full2.json");
  CHECK(apply_move(p, Json::parse(R"({"move":"higher_block","n":2})")).size() == 1);
  CHECK(apply_move(p, Json::parse(R"({"move":"expand","a0":"0","star":"s"})"))[0].output.alphabet().size() == 3);
  CHECK(apply_move(p, Json::parse(R"({"move":"split","f":{"0":["b0","c0"],"1":["b1","c1"]}})")).size() == 2);
  CHECK_THROWS_AS((void)apply_move(p, Json::parse(R"({"move":"rotate"})")), InvalidInput);
  CHECK_THROWS_AS((void)apply_move(p, Json::parse(R"({"move":"higher_block","n":2,"x":1})")), InvalidInput);
  CHECK_THROWS_AS((void)apply_move(p, Json::parse(R"({"move":"higher_block"})")), InvalidInput);

  const auto r = apply_move(p, Json::parse(R"({"move":"higher_block","n":2})"))[0];
  const Json j = to_json(r);
  CHECK(j["input_hash"] == content_hash(p));
  CHECK(j["output_hash"] == content_hash(r.output));
  CHECK(presentation_from_json(j["output"]) == r.output);
}
