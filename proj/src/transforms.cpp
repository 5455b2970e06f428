#include "shiftk/transforms.hpp"

#include <algorithm>
#include <set>

namespace shiftk {

namespace {

bool single_char_names(const Alphabet& a) {
  return std::all_of(a.names().begin(), a.names().end(),
                     [](const std::string& n) { return n.size() == 1; });
}

std::string block_name(const Alphabet& a, const Word& w) {
  const bool compact = single_char_names(a);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += a.name(w[i]);
  }
  return out;
}

bool has_forbidden_factor(const Word& w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden)
    if (std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end()) return true;
  return false;
}

/// State names not clashing with `taken`, one per index.
std::vector<std::string> fresh_names(const std::vector<std::string>& taken, std::size_t count,
                                     const std::string& stem) {
  std::set<std::string> used(taken.begin(), taken.end());
  std::string prefix = stem;
  for (;;) {
    bool clash = false;
    for (std::size_t i = 0; i < count && !clash; ++i) clash = used.count(prefix + std::to_string(i));
    if (!clash) break;
    prefix = "_" + prefix;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void require_sigma_surjective(const Presentation& p, const Limits& limits, const char* move) {
  if (!sigma_surjective(p, limits))
    throw InvalidInput(std::string(move) +
                       " needs a shift with σ(X) = X (induced by a two-sided shift); this input "
                       "has points without a preimage");
}

/// Closes a point set under σ.
std::vector<Point> sigma_closure(std::vector<Point> points) {
  std::set<Point> seen(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Point next = points[i].drop(1);
    if (seen.insert(next).second) points.push_back(next);
  }
  return {seen.begin(), seen.end()};
}

Word map_word(const Word& w, const std::vector<Word>& image) {
  Word out;
  for (Symbol s : w) out.insert(out.end(), image[s].begin(), image[s].end());
  return out;
}

TransformReport finish(const Presentation& input, Presentation output, Json descriptor,
                       std::vector<SymbolMap> maps) {
  return {content_hash(input), std::move(output), std::move(descriptor), std::move(maps)};
}

// -------------------------------------------------------------- higher block

struct Blocks {
  Alphabet alphabet;
  std::vector<Word> words;
  std::map<Word, Symbol> index;
};

Blocks make_blocks(const Presentation& p, std::vector<Word> words, const Limits& limits) {
  if (words.size() > limits.max_alphabet)
    throw CapExceeded("block alphabet of size " + std::to_string(words.size()) +
                      " exceeds the alphabet cap " + std::to_string(limits.max_alphabet));
  std::sort(words.begin(), words.end());
  std::vector<std::string> names;
  Blocks b;
  for (const Word& w : words) {
    names.push_back(block_name(p.alphabet(), w));
    b.index.emplace(w, static_cast<Symbol>(b.words.size()));
    b.words.push_back(w);
  }
  b.alphabet = Alphabet(std::move(names));
  return b;
}

SymbolMap block_map(const Presentation& p, const Blocks& b) {
  SymbolMap m{"block", {}};
  for (Symbol s = 0; s < b.words.size(); ++s)
    m.entries.emplace_back(b.alphabet.name(s), p.alphabet().names_of(b.words[s]));
  return m;
}

Presentation higher_block_sft(const Presentation& p, std::size_t n, const Blocks& b,
                              const Limits& limits) {
  const auto& body = p.sft_body();
  const std::size_t nb = b.words.size();
  auto consistent = [&](Symbol x, Symbol y) {
    return std::equal(b.words[x].begin() + 1, b.words[x].end(), b.words[y].begin());
  };
  const std::size_t span = std::max<std::size_t>(n + 1, body.memory + 1);
  if (span == n + 1) {
    std::vector<std::vector<int>> adj(nb, std::vector<int>(nb, 0));
    for (Symbol x = 0; x < nb; ++x)
      for (Symbol y = 0; y < nb; ++y) {
        if (!consistent(x, y)) continue;
        Word w = b.words[x];
        w.push_back(b.words[y].back());
        adj[x][y] = has_forbidden_factor(w, body.forbidden) ? 0 : 1;
      }
    return Presentation::sft_matrix(std::move(adj), b.alphabet, limits);
  }
  // Memory exceeds N: forbid block sequences spelling a word of length m+1
  // with a forbidden factor, plus every non-overlapping pair.
  std::vector<Word> forbidden;
  for (Symbol x = 0; x < nb; ++x)
    for (Symbol y = 0; y < nb; ++y)
      if (!consistent(x, y)) forbidden.push_back({x, y});
  std::vector<Word> frontier(b.words.begin(), b.words.end());
  for (std::size_t len = n; len < span; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (Symbol a = 0; a < p.alphabet().size(); ++a) {
        Word tail(w.end() - static_cast<std::ptrdiff_t>(n - 1), w.end());
        tail.push_back(a);
        if (!b.index.count(tail)) continue;
        Word ext = w;
        ext.push_back(a);
        next.push_back(std::move(ext));
        if (next.size() > limits.max_words) throw CapExceeded("block window enumeration exceeds cap");
      }
    frontier = std::move(next);
  }
  for (const Word& w : frontier) {
    if (!has_forbidden_factor(w, body.forbidden)) continue;
    Word seq;
    for (std::size_t i = 0; i + n <= w.size(); ++i)
      seq.push_back(b.index.at(Word(w.begin() + static_cast<std::ptrdiff_t>(i),
                                    w.begin() + static_cast<std::ptrdiff_t>(i + n))));
    forbidden.push_back(std::move(seq));
  }
  return Presentation::sft(b.alphabet, std::move(forbidden), limits);
}

Presentation higher_block_sofic(const Presentation& p, std::size_t n, const Blocks& b,
                                const Limits& limits) {
  const LabeledGraph& g = p.sofic_body().graph;
  std::vector<std::vector<std::size_t>> out_edges(g.states.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) out_edges[g.edges[e].from].push_back(e);

  // Paths of n−1 edges become states; paths of n edges become edges.
  std::vector<std::vector<std::size_t>> paths;
  for (std::size_t e = 0; e < g.edges.size(); ++e) paths.push_back({e});
  for (std::size_t len = 1; len + 1 < n; ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& path : paths)
      for (std::size_t e : out_edges[g.edges[path.back()].to]) {
        auto ext = path;
        ext.push_back(e);
        next.push_back(std::move(ext));
        if (next.size() > limits.max_contexts) throw CapExceeded("path graph exceeds state cap");
      }
    paths = std::move(next);
  }
  std::map<std::vector<std::size_t>, std::uint32_t> state_of;
  for (const auto& path : paths) state_of.emplace(path, static_cast<std::uint32_t>(state_of.size()));

  LabeledGraph h;
  h.states = fresh_names({}, paths.size(), "p");
  for (const auto& path : paths)
    for (std::size_t e : out_edges[g.edges[path.back()].to]) {
      auto full = path;
      full.push_back(e);
      Word label;
      for (std::size_t f : full) label.push_back(g.edges[f].label);
      std::vector<std::size_t> tail(full.begin() + 1, full.end());
      h.edges.push_back({state_of.at(path), state_of.at(tail), b.index.at(label)});
    }
  return Presentation::sofic(b.alphabet, std::move(h));
}

} // namespace

TransformReport higher_block(const Presentation& p, std::size_t n, const Limits& limits) {
  if (n < 2) throw InvalidInput("higher_block needs N ≥ 2");
  Json descriptor{{"move", "higher_block"}, {"n", n}};
  if (p.kind() == PresentationKind::Finite) {
    std::set<Word> seen;
    for (const Point& x : p.finite_body().points)
      for (std::size_t i = 0; i < x.lasso_length(); ++i) seen.insert(x.drop(i).prefix(n));
    Blocks b = make_blocks(p, {seen.begin(), seen.end()}, limits);
    std::vector<Point> points;
    for (const Point& x : p.finite_body().points) {
      Word pre, per;
      for (std::size_t i = 0; i < x.preperiod().size(); ++i) pre.push_back(b.index.at(x.drop(i).prefix(n)));
      for (std::size_t i = 0; i < x.period().size(); ++i)
        per.push_back(b.index.at(x.drop(x.preperiod().size() + i).prefix(n)));
      points.emplace_back(std::move(pre), std::move(per));
    }
    auto out = Presentation::finite(b.alphabet, std::move(points));
    return finish(p, std::move(out), std::move(descriptor), {block_map(p, b)});
  }
  Blocks b = make_blocks(p, language(p, n, limits), limits);
  Presentation out = p.kind() == PresentationKind::Sft ? higher_block_sft(p, n, b, limits)
                                                       : higher_block_sofic(p, n, b, limits);
  return finish(p, std::move(out), std::move(descriptor), {block_map(p, b)});
}

TransformReport symbolic_expansion(const Presentation& p, const std::string& a0,
                                   const std::string& star, const Limits& limits) {
  const Symbol s0 = p.alphabet().at(a0);
  if (p.alphabet().find(star)) throw InvalidInput("star symbol '" + star + "' is already in the alphabet");
  require_sigma_surjective(p, limits, "symbolic expansion");
  std::vector<std::string> names = p.alphabet().names();
  names.push_back(star);
  Alphabet out_alphabet(names);
  const Symbol st = static_cast<Symbol>(names.size() - 1);
  Json descriptor{{"move", "expand"}, {"a0", a0}, {"star", star}};

  SymbolMap collapse{"collapse", {}};
  for (Symbol s = 0; s < p.alphabet().size(); ++s)
    collapse.entries.emplace_back(p.alphabet().name(s), std::vector<std::string>{p.alphabet().name(s)});
  collapse.entries.emplace_back(star, std::vector<std::string>{});

  if (p.kind() == PresentationKind::Finite) {
    std::vector<Word> eta(p.alphabet().size());
    for (Symbol s = 0; s < eta.size(); ++s) eta[s] = s == s0 ? Word{s, st} : Word{s};
    std::vector<Point> points;
    for (const Point& x : p.finite_body().points)
      points.emplace_back(map_word(x.preperiod(), eta), map_word(x.period(), eta));
    auto out = Presentation::finite(out_alphabet, sigma_closure(std::move(points)));
    return finish(p, std::move(out), std::move(descriptor), {collapse});
  }

  const LabeledGraph g = to_graph(p);
  std::size_t splits = 0;
  for (const Edge& e : g.edges) splits += e.label == s0;
  LabeledGraph h;
  h.states = g.states;
  const auto mids = fresh_names(g.states, splits, "m");
  std::size_t next_mid = 0;
  for (const Edge& e : g.edges) {
    if (e.label != s0) {
      h.edges.push_back(e);
      continue;
    }
    const auto mid = static_cast<std::uint32_t>(h.states.size());
    h.states.push_back(mids[next_mid++]);
    h.edges.push_back({e.from, mid, s0});
    h.edges.push_back({mid, e.to, st});
  }
  auto out = Presentation::sofic(out_alphabet, std::move(h));
  return finish(p, std::move(out), std::move(descriptor), {collapse});
}

SplitResult split_letters(const Presentation& p, const BipartiteExpression& f,
                          const Limits& limits) {
  const Alphabet& src = p.alphabet();
  for (const auto& [a, bc] : f.f)
    if (!src.find(a)) throw AlphabetMismatch("bipartite expression maps unknown symbol '" + a + "'");
  std::vector<std::string> first, second;
  std::set<std::pair<std::string, std::string>> images;
  std::vector<std::pair<std::string, std::string>> image_of;
  for (Symbol s = 0; s < src.size(); ++s) {
    auto it = f.f.find(src.name(s));
    if (it == f.f.end())
      throw AlphabetMismatch("bipartite expression does not cover symbol '" + src.name(s) + "'");
    if (!images.insert(it->second).second)
      throw InvalidInput("bipartite expression is not injective: two symbols map to (" +
                         it->second.first + ", " + it->second.second + ")");
    image_of.push_back(it->second);
    if (std::find(first.begin(), first.end(), it->second.first) == first.end())
      first.push_back(it->second.first);
    if (std::find(second.begin(), second.end(), it->second.second) == second.end())
      second.push_back(it->second.second);
  }
  for (const auto& b : first)
    if (std::find(second.begin(), second.end(), b) != second.end())
      throw InvalidInput("target alphabets are not disjoint: '" + b + "' occurs on both sides");
  require_sigma_surjective(p, limits, "letter splitting");

  std::vector<std::string> union_names = first;
  union_names.insert(union_names.end(), second.begin(), second.end());
  Alphabet union_alphabet(union_names);
  std::vector<Symbol> b_of(src.size()), c_of(src.size());
  for (Symbol s = 0; s < src.size(); ++s) {
    b_of[s] = union_alphabet.at(image_of[s].first);
    c_of[s] = union_alphabet.at(image_of[s].second);
  }

  // Pair symbols c_s·b_t of the second shift for the adjacent letters st
  // that occur, ordered by (c, b).
  std::vector<std::pair<Symbol, Symbol>> pairs;
  std::optional<LabeledGraph> graph;
  if (p.kind() == PresentationKind::Finite) {
    for (const Point& x : p.finite_body().points)
      for (std::size_t i = 0; i < x.lasso_length(); ++i) pairs.emplace_back(c_of[x.at(i)], b_of[x.at(i + 1)]);
  } else {
    graph = to_graph(p);
    for (const Edge& e : graph->edges)
      for (const Edge& e2 : graph->edges)
        if (e.to == e2.from) pairs.emplace_back(c_of[e.label], b_of[e2.label]);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::string> pair_names;
  for (auto [c, b] : pairs) pair_names.push_back(union_alphabet.name(c) + "+" + union_alphabet.name(b));
  Alphabet pair_alphabet(pair_names);
  auto pair_symbol = [&](Symbol s, Symbol t) {
    return static_cast<Symbol>(
        std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(c_of[s], b_of[t])) -
        pairs.begin());
  };

  Json fj = Json::object();
  for (const auto& [a, bc] : f.f) fj[a] = {bc.first, bc.second};
  Json descriptor{{"move", "split"}, {"f", fj}};
  SymbolMap fmap{"f", {}};
  for (Symbol s = 0; s < src.size(); ++s)
    fmap.entries.emplace_back(src.name(s), std::vector<std::string>{image_of[s].first, image_of[s].second});
  SymbolMap pmap{"pair", {}};
  for (auto [c, b] : pairs)
    pmap.entries.emplace_back(union_alphabet.name(c) + "+" + union_alphabet.name(b),
                              std::vector<std::string>{union_alphabet.name(c), union_alphabet.name(b)});

  if (p.kind() == PresentationKind::Finite) {
    std::vector<Word> image(src.size());
    for (Symbol s = 0; s < src.size(); ++s) image[s] = {b_of[s], c_of[s]};
    std::vector<Point> upoints, spoints;
    for (const Point& x : p.finite_body().points) {
      upoints.emplace_back(map_word(x.preperiod(), image), map_word(x.period(), image));
      Word pre, per;
      for (std::size_t i = 0; i < x.preperiod().size(); ++i) pre.push_back(pair_symbol(x.at(i), x.at(i + 1)));
      for (std::size_t i = x.preperiod().size(); i < x.lasso_length(); ++i)
        per.push_back(pair_symbol(x.at(i), x.at(i + 1)));
      spoints.emplace_back(std::move(pre), std::move(per));
    }
    return {finish(p, Presentation::finite(union_alphabet, sigma_closure(std::move(upoints))), descriptor,
                   {fmap}),
            finish(p, Presentation::finite(pair_alphabet, std::move(spoints)), descriptor, {pmap})};
  }

  const LabeledGraph& g = *graph;
  LabeledGraph u;
  u.states = g.states;
  const auto mids = fresh_names(g.states, g.edges.size(), "m");
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& edge = g.edges[e];
    const auto mid = static_cast<std::uint32_t>(u.states.size());
    u.states.push_back(mids[e]);
    u.edges.push_back({edge.from, mid, b_of[edge.label]});
    u.edges.push_back({mid, edge.to, c_of[edge.label]});
  }
  LabeledGraph s2;
  s2.states = mids;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (std::size_t e2 = 0; e2 < g.edges.size(); ++e2)
      if (g.edges[e].to == g.edges[e2].from)
        s2.edges.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e2),
                            pair_symbol(g.edges[e].label, g.edges[e2].label)});
  return {finish(p, Presentation::sofic(union_alphabet, std::move(u)), descriptor, {fmap}),
          finish(p, Presentation::sofic(pair_alphabet, std::move(s2)), descriptor, {pmap})};
}

std::vector<TransformReport> apply_move(const Presentation& p, const Json& move,
                                        const Limits& limits) {
  if (!move.is_object() || !move.contains("move") || !move["move"].is_string())
    throw InvalidInput("move descriptor needs a string field 'move'");
  const std::string kind = move["move"].get<std::string>();
  auto check_keys = [&](std::initializer_list<const char*> keys) {
    for (auto it = move.begin(); it != move.end(); ++it)
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
        throw InvalidInput("move descriptor: unknown field '" + it.key() + "'");
  };
  if (kind == "higher_block") {
    check_keys({"move", "n"});
    if (!move.contains("n") || !move["n"].is_number_unsigned())
      throw InvalidInput("higher_block needs a positive integer 'n'");
    return {higher_block(p, move["n"].get<std::size_t>(), limits)};
  }
  if (kind == "expand") {
    check_keys({"move", "a0", "star"});
    if (!move.contains("a0") || !move["a0"].is_string() || !move.contains("star") ||
        !move["star"].is_string())
      throw InvalidInput("expand needs string fields 'a0' and 'star'");
    return {symbolic_expansion(p, move["a0"].get<std::string>(), move["star"].get<std::string>(), limits)};
  }
  if (kind == "split") {
    check_keys({"move", "f"});
    if (!move.contains("f") || !move["f"].is_object())
      throw InvalidInput("split needs an object 'f' mapping symbols to [b, c]");
    BipartiteExpression f;
    for (auto it = move["f"].begin(); it != move["f"].end(); ++it) {
      const Json& v = it.value();
      if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string())
        throw InvalidInput("split: f['" + it.key() + "'] must be a pair of symbol names");
      f.f[it.key()] = {v[0].get<std::string>(), v[1].get<std::string>()};
    }
    auto r = split_letters(p, f, limits);
    return {std::move(r.union_shift), std::move(r.second)};
  }
  throw InvalidInput("unknown move '" + kind + "'");
}

Json to_json(const TransformReport& r) {
  Json maps = Json::object();
  for (const auto& m : r.symbol_maps) {
    Json entries = Json::array();
    for (const auto& [sym, word] : m.entries) entries.push_back({sym, word});
    maps[m.name] = std::move(entries);
  }
  return {{"input_hash", r.input_hash},
          {"output_hash", content_hash(r.output)},
          {"descriptor", r.descriptor},
          {"output", to_json(r.output)},
          {"symbol_maps", std::move(maps)}};
}

} // namespace shiftk
