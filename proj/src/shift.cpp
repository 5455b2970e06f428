#include "shiftk/shift.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace shiftk {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) : names_(std::move(symbols)) {
  if (names_.empty()) throw InvalidInput("alphabet must be nonempty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw InvalidInput("symbol names must be nonempty");
    if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
      throw InvalidInput("duplicate symbol '" + names_[i] + "'");
  }
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::at(const std::string& name) const {
  auto s = find(name);
  if (!s) throw AlphabetMismatch("symbol '" + name + "' is not in the alphabet");
  return *s;
}

Word Alphabet::parse(const std::vector<std::string>& letters) const {
  Word w;
  w.reserve(letters.size());
  for (const auto& l : letters) w.push_back(at(l));
  return w;
}

std::vector<std::string> Alphabet::names_of(const Word& w) const {
  check(w);
  std::vector<std::string> out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(names_[s]);
  return out;
}

std::string Alphabet::render(const Word& w) const {
  if (w.empty()) return "<e>";
  bool compact = std::all_of(names_.begin(), names_.end(),
                             [](const std::string& n) { return n.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ' ';
    out += names_.at(w[i]);
  }
  return out;
}

void Alphabet::check(const Word& w) const {
  for (Symbol s : w)
    if (s >= names_.size())
      throw AlphabetMismatch("symbol index " + std::to_string(s) + " outside alphabet of size " +
                             std::to_string(names_.size()));
}

// ------------------------------------------------------------------- Point

namespace {

Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return w;
}

} // namespace

Point::Point(Word preperiod, Word period) : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) throw InvalidInput("the period of a point must be nonempty");
  per_ = primitive_root(per_);
  while (!pre_.empty() && pre_.back() == per_.back()) {
    std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
    pre_.pop_back();
  }
}

Symbol Point::at(std::size_t i) const {
  if (i < pre_.size()) return pre_[i];
  return per_[(i - pre_.size()) % per_.size()];
}

Word Point::prefix(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

Point Point::prepend(const Word& u) const {
  Word pre = u;
  pre.insert(pre.end(), pre_.begin(), pre_.end());
  return {std::move(pre), per_};
}

Point Point::drop(std::size_t n) const {
  if (n <= pre_.size())
    return {Word(pre_.begin() + static_cast<std::ptrdiff_t>(n), pre_.end()), per_};
  Word per = per_;
  std::rotate(per.begin(), per.begin() + static_cast<std::ptrdiff_t>((n - pre_.size()) % per.size()),
              per.end());
  return {Word{}, std::move(per)};
}

std::strong_ordering Point::operator<=>(const Point& other) const {
  // Sequences agreeing on this many letters coincide (Fine–Wilf).
  const std::size_t bound =
      std::max(pre_.size(), other.pre_.size()) + per_.size() + other.per_.size();
  for (std::size_t i = 0; i < bound; ++i) {
    if (auto c = at(i) <=> other.at(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ------------------------------------------------------------ LabeledGraph

LabeledGraph LabeledGraph::trimmed(bool need_incoming) const {
  const std::size_t n = states.size();
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<char> has_in(n, 0), has_out(n, 0);
    for (const Edge& e : edges) {
      if (alive[e.from] && alive[e.to]) {
        has_out[e.from] = 1;
        has_in[e.to] = 1;
      }
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (alive[q] && (!has_out[q] || (need_incoming && !has_in[q]))) {
        alive[q] = 0;
        changed = true;
      }
    }
  }
  std::vector<std::uint32_t> remap(n, 0);
  LabeledGraph out;
  for (std::size_t q = 0; q < n; ++q) {
    if (!alive[q]) continue;
    remap[q] = static_cast<std::uint32_t>(out.states.size());
    out.states.push_back(states[q]);
  }
  for (const Edge& e : edges)
    if (alive[e.from] && alive[e.to]) out.edges.push_back({remap[e.from], remap[e.to], e.label});
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

// ------------------------------------------------------------ SFT helpers

namespace {

bool occurs_at(const Word& w, std::size_t pos, const Word& f) {
  if (pos + f.size() > w.size()) return false;
  return std::equal(f.begin(), f.end(), w.begin() + static_cast<std::ptrdiff_t>(pos));
}

bool has_factor(const Word& w, const Word& f) {
  if (f.size() > w.size()) return false;
  for (std::size_t i = 0; i + f.size() <= w.size(); ++i)
    if (occurs_at(w, i, f)) return true;
  return false;
}

/// Does some forbidden word end at the last letter of w?
bool forbidden_suffix(const Word& w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden)
    if (f.size() <= w.size() && occurs_at(w, w.size() - f.size(), f)) return true;
  return false;
}

/// Does some forbidden word start at the first letter of w?
bool forbidden_prefix(const Word& w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden)
    if (occurs_at(w, 0, f)) return true;
  return false;
}

/// Admissible length-`len` words, lexicographic.
std::vector<Word> admissible_words(std::size_t alphabet, const std::vector<Word>& forbidden,
                                   std::size_t len, std::size_t cap) {
  std::vector<Word> layer{Word{}};
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (Symbol a = 0; a < alphabet; ++a) {
        Word v = w;
        v.push_back(a);
        if (forbidden_suffix(v, forbidden)) continue;
        next.push_back(std::move(v));
        if (next.size() > cap) throw CapExceeded("SFT window enumeration exceeds cap");
      }
    }
    layer = std::move(next);
  }
  return layer;
}

/// Edge of the window graph: reading w·b (if admissible) emits w·b[0] and moves
/// to the window (w·b)[1..].
std::optional<Word> window_step(const Word& w, Symbol b, const std::vector<Word>& forbidden) {
  Word wb = w;
  wb.push_back(b);
  if (forbidden_suffix(wb, forbidden)) return std::nullopt;
  return Word(wb.begin() + 1, wb.end());
}

std::vector<Word> extendable_windows(std::size_t alphabet, const std::vector<Word>& forbidden,
                                     std::size_t memory, const Limits& limits) {
  auto words = admissible_words(alphabet, forbidden, memory, limits.max_contexts);
  std::map<Word, std::uint32_t> index;
  LabeledGraph g;
  for (const Word& w : words) {
    index.emplace(w, static_cast<std::uint32_t>(g.states.size()));
    g.states.push_back(std::to_string(g.states.size()));
  }
  for (const Word& w : words) {
    for (Symbol b = 0; b < alphabet; ++b) {
      auto next = window_step(w, b, forbidden);
      if (!next) continue;
      auto it = index.find(*next);
      if (it == index.end()) continue;
      g.edges.push_back({index[w], it->second, b});
    }
  }
  auto t = g.trimmed(false);
  std::vector<Word> out;
  for (const auto& name : t.states) out.push_back(words[std::stoul(name)]);
  return out;
}

std::vector<Word> minimal_forbidden(std::vector<Word> forbidden) {
  std::sort(forbidden.begin(), forbidden.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  std::vector<Word> kept;
  for (const Word& f : forbidden) {
    bool redundant = std::any_of(kept.begin(), kept.end(),
                                 [&](const Word& g) { return has_factor(f, g); });
    if (!redundant) kept.push_back(f);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// ---------------------------------------------------------- sofic helpers

using Bits = std::vector<char>;

Bits pre_symbol(const LabeledGraph& g, Symbol a, const Bits& target) {
  Bits out(g.states.size(), 0);
  for (const Edge& e : g.edges)
    if (e.label == a && target[e.to]) out[e.from] = 1;
  return out;
}

Bits pre_word(const LabeledGraph& g, const Word& w, Bits target) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) target = pre_symbol(g, *it, target);
  return target;
}

StateSet to_set(const Bits& b) {
  StateSet s;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) s.push_back(static_cast<std::uint32_t>(i));
  return s;
}

Bits to_bits(const StateSet& s, std::size_t n) {
  Bits b(n, 0);
  for (auto q : s) b.at(q) = 1;
  return b;
}

/// S(x): the states from which x labels an infinite path.
StateSet reading_states(const LabeledGraph& g, const Point& x) {
  Bits t(g.states.size(), 1);
  for (;;) {
    Bits next = pre_word(g, x.period(), t);
    if (next == t) break;
    t = std::move(next);
  }
  return to_set(pre_word(g, x.preperiod(), t));
}

/// Deterministic lasso through the window graph starting at `start`.
Point window_witness(const SftBody& body, std::size_t alphabet, const Word& start) {
  std::set<Word> windows(body.windows.begin(), body.windows.end());
  std::map<Word, std::size_t> seen;
  Word labels;
  Word w = start;
  for (;;) {
    if (auto it = seen.find(w); it != seen.end()) {
      std::size_t j = it->second;
      return {Word(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(j)),
              Word(labels.begin() + static_cast<std::ptrdiff_t>(j), labels.end())};
    }
    seen.emplace(w, labels.size());
    bool moved = false;
    for (Symbol b = 0; b < alphabet && !moved; ++b) {
      auto next = window_step(w, b, body.forbidden);
      if (!next || !windows.count(*next)) continue;
      Word wb = w;
      wb.push_back(b);
      labels.push_back(wb.front());
      w = *next;
      moved = true;
    }
    if (!moved) throw ConsistencyError("window graph has a dead end after trimming");
  }
}

ContextCarrier sofic_contexts(const LabeledGraph& g, std::size_t alphabet, const Limits& limits) {
  const std::size_t n = g.states.size();
  using Relation = std::vector<char>; // n×n row-major: row q = states reachable from q
  std::vector<std::vector<std::pair<std::uint32_t, Symbol>>> out(n);
  for (const Edge& e : g.edges) out[e.from].push_back({e.to, e.label});

  auto step = [&](const Relation& r, Symbol a) {
    Relation next(n * n, 0);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t s = 0; s < n; ++s)
        if (r[q * n + s])
          for (auto [t, lab] : out[s])
            if (lab == a) next[q * n + t] = 1;
    return next;
  };
  auto support = [&](const Relation& r) {
    StateSet s;
    for (std::size_t q = 0; q < n; ++q)
      if (std::any_of(r.begin() + static_cast<std::ptrdiff_t>(q * n),
                      r.begin() + static_cast<std::ptrdiff_t>((q + 1) * n),
                      [](char c) { return c != 0; }))
        s.push_back(static_cast<std::uint32_t>(q));
    return s;
  };

  std::vector<Relation> nodes;
  std::vector<StateSet> supports;
  std::vector<std::pair<std::size_t, Symbol>> parent;
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> succ;
  std::map<Relation, std::size_t> index;

  Relation id(n * n, 0);
  for (std::size_t q = 0; q < n; ++q) id[q * n + q] = 1;
  nodes.push_back(id);
  supports.push_back(support(id));
  parent.push_back({0, 0});
  succ.emplace_back();
  index.emplace(id, 0);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    for (Symbol a = 0; a < alphabet; ++a) {
      Relation r = step(nodes[v], a);
      StateSet s = support(r);
      if (s.empty()) continue;
      auto [it, fresh] = index.emplace(r, nodes.size());
      if (fresh) {
        if (nodes.size() >= limits.max_contexts)
          throw CapExceeded("sofic subset construction exceeds the context cap");
        nodes.push_back(std::move(r));
        supports.push_back(std::move(s));
        parent.push_back({v, a});
        succ.emplace_back();
      }
      succ[v].push_back({a, it->second});
    }
  }

  // Keep nodes with an infinite continuation that never shrinks the support.
  std::vector<char> alive(nodes.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!alive[v]) continue;
      bool ok = std::any_of(succ[v].begin(), succ[v].end(), [&](const auto& sw) {
        return alive[sw.second] && supports[sw.second] == supports[v];
      });
      if (!ok) {
        alive[v] = 0;
        changed = true;
      }
    }
  }

  std::map<StateSet, Point> found;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!alive[v] || found.count(supports[v])) continue;
    Word prefix;
    for (std::size_t u = v; u != 0; u = parent[u].first) prefix.push_back(parent[u].second);
    std::reverse(prefix.begin(), prefix.end());
    std::map<std::size_t, std::size_t> seen;
    Word labels;
    std::size_t cur = v;
    while (!seen.count(cur)) {
      seen.emplace(cur, labels.size());
      for (auto [a, w] : succ[cur]) {
        if (alive[w] && supports[w] == supports[v]) {
          labels.push_back(a);
          cur = w;
          break;
        }
      }
    }
    std::size_t j = seen[cur];
    Word pre = prefix;
    pre.insert(pre.end(), labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(j));
    Point x(std::move(pre), Word(labels.begin() + static_cast<std::ptrdiff_t>(j), labels.end()));
    if (reading_states(g, x) != supports[v])
      throw ConsistencyError("sofic witness does not realize its context");
    found.emplace(supports[v], std::move(x));
  }

  ContextCarrier carrier;
  for (auto& [s, x] : found) {
    carrier.contexts.push_back(Context{s});
    carrier.witnesses.push_back(x);
  }
  return carrier;
}

} // namespace

// ------------------------------------------------------------ Presentation

Presentation Presentation::finite(Alphabet alphabet, std::vector<Point> points) {
  if (points.empty()) throw InvalidInput("finite presentation has no points (empty shift)");
  for (const Point& x : points) {
    alphabet.check(x.preperiod());
    alphabet.check(x.period());
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (const Point& x : points) {
    if (!std::binary_search(points.begin(), points.end(), x.drop(1)))
      throw InvalidInput("finite point set is not closed under the shift: missing " +
                         render(alphabet, x.drop(1)));
  }
  return {std::move(alphabet), FiniteBody{std::move(points)}};
}

Presentation Presentation::sft(Alphabet alphabet, std::vector<Word> forbidden,
                               const Limits& limits) {
  for (const Word& f : forbidden) {
    if (f.empty()) throw InvalidInput("forbidden words must be nonempty");
    alphabet.check(f);
  }
  SftBody body;
  body.forbidden = minimal_forbidden(std::move(forbidden));
  for (const Word& f : body.forbidden) body.memory = std::max(body.memory, f.size() - 1);
  body.windows = extendable_windows(alphabet.size(), body.forbidden, body.memory, limits);
  if (body.windows.empty()) throw InvalidInput("forbidden words leave the shift space empty");
  return {std::move(alphabet), std::move(body)};
}

Presentation Presentation::sft_matrix(std::vector<std::vector<int>> adjacency,
                                      std::optional<Alphabet> alphabet, const Limits& limits) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw InvalidInput("adjacency matrix must be nonempty");
  for (const auto& row : adjacency) {
    if (row.size() != n) throw InvalidInput("adjacency matrix must be square");
    for (int v : row)
      if (v != 0 && v != 1) throw InvalidInput("adjacency matrix entries must be 0 or 1");
  }
  if (!alphabet) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    alphabet = Alphabet(std::move(names));
  }
  if (alphabet->size() != n) throw InvalidInput("alphabet size differs from matrix size");
  std::vector<Word> forbidden;
  for (Symbol i = 0; i < n; ++i)
    for (Symbol j = 0; j < n; ++j)
      if (adjacency[i][j] == 0) forbidden.push_back({i, j});
  Presentation p = sft(std::move(*alphabet), std::move(forbidden), limits);
  std::get<SftBody>(p.body_).adjacency = std::move(adjacency);
  return p;
}

Presentation Presentation::sofic(Alphabet alphabet, LabeledGraph graph) {
  std::set<std::string> names;
  for (const auto& s : graph.states)
    if (!names.insert(s).second) throw InvalidInput("duplicate state '" + s + "'");
  for (const Edge& e : graph.edges) {
    if (e.from >= graph.states.size() || e.to >= graph.states.size())
      throw InvalidInput("edge refers to an unknown state");
    if (e.label >= alphabet.size()) throw AlphabetMismatch("edge label outside alphabet");
  }
  LabeledGraph t = graph.trimmed(true);
  if (t.states.empty()) throw InvalidInput("sofic graph has no bi-infinite path (empty shift)");
  return {std::move(alphabet), SoficBody{std::move(t)}};
}

PresentationKind Presentation::kind() const {
  switch (body_.index()) {
  case 0: return PresentationKind::Finite;
  case 1: return PresentationKind::Sft;
  default: return PresentationKind::Sofic;
  }
}

const FiniteBody& Presentation::finite_body() const { return std::get<FiniteBody>(body_); }
const SftBody& Presentation::sft_body() const { return std::get<SftBody>(body_); }
const SoficBody& Presentation::sofic_body() const { return std::get<SoficBody>(body_); }

bool Presentation::operator==(const Presentation& other) const {
  if (!(alphabet_ == other.alphabet_) || kind() != other.kind()) return false;
  switch (kind()) {
  case PresentationKind::Finite: return finite_body().points == other.finite_body().points;
  case PresentationKind::Sft:
    return sft_body().forbidden == other.sft_body().forbidden &&
           sft_body().adjacency == other.sft_body().adjacency;
  case PresentationKind::Sofic:
    return sofic_body().graph.states == other.sofic_body().graph.states &&
           sofic_body().graph.edges == other.sofic_body().graph.edges;
  }
  return false;
}

// -------------------------------------------------------------- operations

std::optional<std::size_t> ContextCarrier::index_of(const Context& c) const {
  auto it = std::lower_bound(contexts.begin(), contexts.end(), c);
  if (it == contexts.end() || !(*it == c)) return std::nullopt;
  return static_cast<std::size_t>(it - contexts.begin());
}

bool contains(const Presentation& p, const Point& x) {
  p.alphabet().check(x.preperiod());
  p.alphabet().check(x.period());
  switch (p.kind()) {
  case PresentationKind::Finite: {
    const auto& pts = p.finite_body().points;
    return std::binary_search(pts.begin(), pts.end(), x);
  }
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    const Word window = x.prefix(x.lasso_length() + body.memory);
    for (std::size_t i = 0; i < x.lasso_length(); ++i)
      for (const Word& f : body.forbidden)
        if (occurs_at(window, i, f)) return false;
    return true;
  }
  case PresentationKind::Sofic:
    return !reading_states(p.sofic_body().graph, x).empty();
  }
  return false;
}

Context context_of(const Presentation& p, const Point& x) {
  if (!contains(p, x)) throw NotInShift("point " + render(p.alphabet(), x) + " is not in the shift");
  switch (p.kind()) {
  case PresentationKind::Finite: return Context{x};
  case PresentationKind::Sft: return Context{x.prefix(p.sft_body().memory)};
  case PresentationKind::Sofic: return Context{reading_states(p.sofic_body().graph, x)};
  }
  return Context{x};
}

std::optional<Context> prepend(const Presentation& p, const Context& c, Symbol a) {
  if (a >= p.alphabet().size()) throw AlphabetMismatch("symbol outside alphabet");
  switch (p.kind()) {
  case PresentationKind::Finite: {
    Point y = std::get<Point>(c.value).prepend({a});
    const auto& pts = p.finite_body().points;
    if (!std::binary_search(pts.begin(), pts.end(), y)) return std::nullopt;
    return Context{std::move(y)};
  }
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    Word w{a};
    const Word& window = std::get<Word>(c.value);
    w.insert(w.end(), window.begin(), window.end());
    if (forbidden_prefix(w, body.forbidden)) return std::nullopt;
    w.resize(body.memory);
    return Context{std::move(w)};
  }
  case PresentationKind::Sofic: {
    const auto& g = p.sofic_body().graph;
    StateSet s = to_set(pre_symbol(g, a, to_bits(std::get<StateSet>(c.value), g.states.size())));
    if (s.empty()) return std::nullopt;
    return Context{std::move(s)};
  }
  }
  return std::nullopt;
}

ContextCarrier realizable_contexts(const Presentation& p, const Limits& limits) {
  ContextCarrier carrier;
  switch (p.kind()) {
  case PresentationKind::Finite:
    for (const Point& x : p.finite_body().points) {
      carrier.contexts.push_back(Context{x});
      carrier.witnesses.push_back(x);
    }
    break;
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    if (body.windows.size() > limits.max_contexts)
      throw CapExceeded("SFT context count exceeds cap");
    for (const Word& w : body.windows) {
      carrier.contexts.push_back(Context{w});
      carrier.witnesses.push_back(window_witness(body, p.alphabet().size(), w));
    }
    break;
  }
  case PresentationKind::Sofic:
    carrier = sofic_contexts(p.sofic_body().graph, p.alphabet().size(), limits);
    break;
  }
  return carrier;
}

std::vector<Word> predecessor_set(const Presentation& p, const Context& c, std::size_t k,
                                  const Limits& limits) {
  // Words are built right to left: u = u'·a with a·x ∈ X and u' ∈ P_{k-1}(a·x).
  std::vector<std::pair<Word, Context>> layer{{Word{}, c}};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<std::pair<Word, Context>> next;
    for (const auto& [suffix, ctx] : layer) {
      for (Symbol a = 0; a < p.alphabet().size(); ++a) {
        auto nc = prepend(p, ctx, a);
        if (!nc) continue;
        Word w{a};
        w.insert(w.end(), suffix.begin(), suffix.end());
        next.emplace_back(std::move(w), std::move(*nc));
        if (next.size() > limits.max_words) throw CapExceeded("predecessor set exceeds word cap");
      }
    }
    layer = std::move(next);
  }
  std::vector<Word> out;
  out.reserve(layer.size());
  for (auto& [w, ctx] : layer) out.push_back(std::move(w));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> language(const Presentation& p, std::size_t k, const Limits& limits) {
  std::set<Word> words;
  const ContextCarrier carrier = realizable_contexts(p, limits);
  for (const Context& c : carrier.contexts) {
    for (Word& w : predecessor_set(p, c, k, limits)) {
      words.insert(std::move(w));
      if (words.size() > limits.max_words) throw CapExceeded("language size exceeds word cap");
    }
  }
  return {words.begin(), words.end()};
}

bool cylinder_member(const Presentation& p, const Word& u, const Word& v, const Point& x) {
  p.alphabet().check(u);
  p.alphabet().check(v);
  if (x.prefix(v.size()) != v) return false;
  const Point y = x.drop(v.size());
  return contains(p, x) && contains(p, y) && contains(p, y.prepend(u));
}

bool sigma_surjective(const Presentation& p, const Limits& limits) {
  if (p.kind() == PresentationKind::Sofic) return true;
  const ContextCarrier carrier = realizable_contexts(p, limits);
  for (const Context& c : carrier.contexts) {
    bool has_preimage = false;
    for (Symbol a = 0; a < p.alphabet().size() && !has_preimage; ++a)
      has_preimage = prepend(p, c, a).has_value();
    if (!has_preimage) return false;
  }
  return true;
}

LabeledGraph to_graph(const Presentation& p) {
  switch (p.kind()) {
  case PresentationKind::Sofic: return p.sofic_body().graph;
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    LabeledGraph g;
    std::map<Word, std::uint32_t> index;
    for (const Word& w : body.windows) {
      index.emplace(w, static_cast<std::uint32_t>(g.states.size()));
      g.states.push_back(w.empty() ? "s" : "s" + p.alphabet().render(w));
    }
    // Window names are only unique when rendering is injective; fall back to indices.
    if (std::set<std::string>(g.states.begin(), g.states.end()).size() != g.states.size())
      for (std::size_t i = 0; i < g.states.size(); ++i) g.states[i] = "s" + std::to_string(i);
    for (const Word& w : body.windows) {
      for (Symbol b = 0; b < p.alphabet().size(); ++b) {
        auto next = window_step(w, b, body.forbidden);
        if (!next) continue;
        auto it = index.find(*next);
        if (it == index.end()) continue;
        Symbol label = w.empty() ? b : w.front();
        g.edges.push_back({index[w], it->second, label});
      }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
  }
  case PresentationKind::Finite:
    throw Unsupported("finite presentations have no graph form");
  }
  throw Unsupported("unknown presentation kind");
}

std::string render(const Alphabet& a, const Point& x) {
  std::string out = x.preperiod().empty() ? "" : a.render(x.preperiod());
  return out + "(" + a.render(x.period()) + ")";
}

std::string render(const Presentation& p, const Context& c) {
  if (const auto* x = std::get_if<Point>(&c.value)) return render(p.alphabet(), *x);
  if (const auto* w = std::get_if<Word>(&c.value)) return p.alphabet().render(*w);
  const auto& s = std::get<StateSet>(c.value);
  const auto& names = p.sofic_body().graph.states;
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + names.at(s[i]);
  return out + "}";
}

} // namespace shiftk
