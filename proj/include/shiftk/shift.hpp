#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftk/errors.hpp"

namespace shiftk {

/// Index of a letter in its alphabet.
using Symbol = std::uint32_t;

/// A finite word as a sequence of alphabet indices. The empty vector is the
/// empty word.
using Word = std::vector<Symbol>;

/// Resource caps shared by every computation that can blow up.
struct Limits {
  std::size_t max_contexts = 1u << 16;        ///< contexts / subset-construction nodes
  std::size_t max_words = 1u << 20;           ///< words materialized by one enumeration
  std::size_t max_signature_words = 1u << 12; ///< words kept per exported class signature
  std::size_t max_alphabet = 1u << 12;        ///< symbols produced by recodings
};

/// Ordered, duplicate-free list of symbol names. The given order is the
/// canonical order used by every matrix indexing.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] const std::string& name(Symbol s) const { return names_.at(s); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] std::optional<Symbol> find(const std::string& name) const;
  /// Throws AlphabetMismatch for unknown names.
  [[nodiscard]] Symbol at(const std::string& name) const;
  [[nodiscard]] Word parse(const std::vector<std::string>& letters) const;
  [[nodiscard]] std::vector<std::string> names_of(const Word& w) const;
  /// Human readable rendering; names are concatenated when every symbol is a
  /// single character and space separated otherwise. The empty word renders
  /// as "e".
  [[nodiscard]] std::string render(const Word& w) const;
  void check(const Word& w) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

private:
  std::vector<std::string> names_;
  std::map<std::string, Symbol> index_;
};

/// An eventually periodic point pre·per·per·… kept in normal form: the period
/// is primitive and the preperiod is as short as possible, so structural
/// equality is equality of points.
class Point {
public:
  Point(Word preperiod, Word period);

  [[nodiscard]] const Word& preperiod() const { return pre_; }
  [[nodiscard]] const Word& period() const { return per_; }
  [[nodiscard]] Symbol at(std::size_t i) const;
  [[nodiscard]] Word prefix(std::size_t n) const;
  /// u·x
  [[nodiscard]] Point prepend(const Word& u) const;
  /// σⁿ(x)
  [[nodiscard]] Point drop(std::size_t n) const;
  /// Number of leading positions after which every position repeats one
  /// already seen: |pre| + |per|.
  [[nodiscard]] std::size_t lasso_length() const { return pre_.size() + per_.size(); }

  bool operator==(const Point& other) const = default;
  /// Lexicographic order of the infinite sequences.
  std::strong_ordering operator<=>(const Point& other) const;

private:
  Word pre_;
  Word per_;
};

/// Sorted set of graph-state indices; a distinct type so that it cannot be
/// confused with a Word inside Context.
struct StateSet : std::vector<std::uint32_t> {
  using std::vector<std::uint32_t>::vector;
};

/// The finite datum through which every predecessor set P_k(x) factors:
/// the point itself (finite shifts), the first m letters (SFTs), or the set
/// of graph states from which x can be read (sofic shifts).
struct Context {
  std::variant<Point, Word, StateSet> value;

  bool operator==(const Context& other) const = default;
  bool operator<(const Context& other) const { return value < other.value; }
};

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Symbol label = 0;
  auto operator<=>(const Edge& other) const = default;
};

/// A finite directed graph with symbol-labelled edges.
struct LabeledGraph {
  std::vector<std::string> states;
  std::vector<Edge> edges;

  /// Repeatedly drops states lacking an incoming or an outgoing edge
  /// (`need_incoming` = false keeps sources). Edges are sorted and
  /// deduplicated, surviving states keep their relative order.
  [[nodiscard]] LabeledGraph trimmed(bool need_incoming) const;
};

enum class PresentationKind { Finite, Sft, Sofic };

struct FiniteBody {
  std::vector<Point> points; ///< sorted, σ-closed
};

struct SftBody {
  std::vector<Word> forbidden; ///< sorted, deduplicated, minimal
  std::size_t memory = 0;      ///< max forbidden length − 1
  /// Present when the shift was given as a 0/1 vertex matrix.
  std::optional<std::vector<std::vector<int>>> adjacency;
  /// Admissible length-m words extendable to a point, sorted.
  std::vector<Word> windows;
};

struct SoficBody {
  LabeledGraph graph; ///< trimmed: every state has an incoming and an outgoing edge
};

/// A finitely presented one-sided shift space. Immutable after construction;
/// every factory validates and rejects presentations of the empty shift.
class Presentation {
public:
  static Presentation finite(Alphabet alphabet, std::vector<Point> points);
  static Presentation sft(Alphabet alphabet, std::vector<Word> forbidden,
                          const Limits& limits = {});
  static Presentation sft_matrix(std::vector<std::vector<int>> adjacency,
                                 std::optional<Alphabet> alphabet = std::nullopt,
                                 const Limits& limits = {});
  static Presentation sofic(Alphabet alphabet, LabeledGraph graph);

  [[nodiscard]] PresentationKind kind() const;
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] const FiniteBody& finite_body() const;
  [[nodiscard]] const SftBody& sft_body() const;
  [[nodiscard]] const SoficBody& sofic_body() const;

  bool operator==(const Presentation& other) const;

private:
  Presentation(Alphabet alphabet, std::variant<FiniteBody, SftBody, SoficBody> body)
      : alphabet_(std::move(alphabet)), body_(std::move(body)) {}

  Alphabet alphabet_;
  std::variant<FiniteBody, SftBody, SoficBody> body_;
};

/// Contexts realized by some point of the shift, in canonical order, each
/// paired with an eventually periodic witness having that context.
struct ContextCarrier {
  std::vector<Context> contexts;
  std::vector<Point> witnesses;

  [[nodiscard]] std::size_t size() const { return contexts.size(); }
  /// Index of a context, if realizable.
  [[nodiscard]] std::optional<std::size_t> index_of(const Context& c) const;
};

/// 𝖫ᵏ(X) in lexicographic order.
[[nodiscard]] std::vector<Word> language(const Presentation& p, std::size_t k,
                                         const Limits& limits = {});

[[nodiscard]] bool contains(const Presentation& p, const Point& x);

/// Throws NotInShift when x ∉ X.
[[nodiscard]] Context context_of(const Presentation& p, const Point& x);

/// Context of a·x for any x with context c, or nullopt when a·x ∉ X.
[[nodiscard]] std::optional<Context> prepend(const Presentation& p, const Context& c,
                                             Symbol a);

[[nodiscard]] ContextCarrier realizable_contexts(const Presentation& p,
                                                 const Limits& limits = {});

/// P_k(x) = {u ∈ 𝔞ᵏ : u·x ∈ X} for any x with context c, lexicographic.
[[nodiscard]] std::vector<Word> predecessor_set(const Presentation& p, const Context& c,
                                                std::size_t k, const Limits& limits = {});

/// x ∈ C(u,v) = {v·y ∈ X : y ∈ X, u·y ∈ X}.
[[nodiscard]] bool cylinder_member(const Presentation& p, const Word& u, const Word& v,
                                   const Point& x);

/// σ(X) = X, i.e. X is induced by a two-sided shift.
[[nodiscard]] bool sigma_surjective(const Presentation& p, const Limits& limits = {});

/// A labelled graph whose infinite paths, started anywhere, are read as
/// exactly the points of X. Defined for SFT and sofic presentations.
[[nodiscard]] LabeledGraph to_graph(const Presentation& p);

/// Renders a point as "pre(per)" using the alphabet's rendering.
[[nodiscard]] std::string render(const Alphabet& a, const Point& x);
[[nodiscard]] std::string render(const Presentation& p, const Context& c);

} // namespace shiftk
