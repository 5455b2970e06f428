#include "shiftk/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace shiftk {

namespace {

std::string pointer(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string pointer(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput((where.empty() ? std::string("/") : where) + ": " + what);
}

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(pointer(where, it.key()), "unknown field");
  }
}

const Json& field(const Json& j, const std::string& where, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i)
    out.push_back(as_string(j[i], pointer(where, i)));
  return out;
}

Alphabet alphabet_at(const Json& j, const std::string& where) {
  try {
    return Alphabet(string_list(j, where));
  } catch (const InvalidInput& e) {
    fail(where, e.what());
  }
}

Word word_at(const Alphabet& a, const Json& j, const std::string& where) {
  Word w;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) {
    auto s = a.find(as_string(j[i], pointer(where, i)));
    if (!s) fail(pointer(where, i), "symbol '" + j[i].get<std::string>() + "' not in alphabet");
    w.push_back(*s);
  }
  return w;
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json word_json(const Alphabet& a, const Word& w) { return a.names_of(w); }

} // namespace

Presentation parse_presentation(std::string_view text, const Limits& limits) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann's message repeats the position; keep only its description.
    std::string msg = e.what();
    if (auto pos = msg.find(": syntax error"); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw InvalidInput("JSON syntax error at " + line_col(text, e.byte) + ": " + msg);
  }
  return presentation_from_json(j, limits);
}

Presentation presentation_from_json(const Json& j, const Limits& limits) {
  if (!j.is_object()) fail("", "expected an object");
  const std::string type = as_string(field(j, "", "type"), "/type");
  if (type == "sft") {
    only_keys(j, "", {"type", "alphabet", "forbidden"});
    Alphabet a = alphabet_at(field(j, "", "alphabet"), "/alphabet");
    const Json& fj = as_array(field(j, "", "forbidden"), "/forbidden");
    std::vector<Word> forbidden;
    for (std::size_t i = 0; i < fj.size(); ++i) {
      forbidden.push_back(word_at(a, fj[i], pointer("/forbidden", i)));
      if (forbidden.back().empty()) fail(pointer("/forbidden", i), "forbidden words must be nonempty");
    }
    return Presentation::sft(std::move(a), std::move(forbidden), limits);
  }
  if (type == "sft_matrix") {
    only_keys(j, "", {"type", "alphabet", "adjacency"});
    const Json& mj = as_array(field(j, "", "adjacency"), "/adjacency");
    std::vector<std::vector<int>> adj;
    for (std::size_t i = 0; i < mj.size(); ++i) {
      const std::string row = pointer("/adjacency", i);
      adj.emplace_back();
      for (std::size_t k = 0; k < as_array(mj[i], row).size(); ++k) {
        const Json& v = mj[i][k];
        if (!v.is_number_integer() || (v.get<long>() != 0 && v.get<long>() != 1))
          fail(pointer(row, k), "expected 0 or 1");
        adj.back().push_back(v.get<int>());
      }
      if (adj.back().size() != mj.size()) fail(row, "adjacency matrix must be square");
    }
    std::optional<Alphabet> a;
    if (j.contains("alphabet")) {
      a = alphabet_at(j["alphabet"], "/alphabet");
      if (a->size() != adj.size()) fail("/alphabet", "size differs from the adjacency matrix");
    }
    return Presentation::sft_matrix(std::move(adj), std::move(a), limits);
  }
  if (type == "sofic") {
    only_keys(j, "", {"type", "alphabet", "states", "edges"});
    LabeledGraph g;
    g.states = string_list(field(j, "", "states"), "/states");
    std::map<std::string, std::uint32_t> state_index;
    for (std::size_t i = 0; i < g.states.size(); ++i)
      if (!state_index.emplace(g.states[i], static_cast<std::uint32_t>(i)).second)
        fail(pointer("/states", i), "duplicate state");
    const Json& ej = as_array(field(j, "", "edges"), "/edges");
    std::vector<std::array<std::string, 3>> raw;
    for (std::size_t i = 0; i < ej.size(); ++i) {
      const std::string at = pointer("/edges", i);
      if (!ej[i].is_array() || ej[i].size() != 3) fail(at, "expected [from, to, symbol]");
      raw.push_back({as_string(ej[i][0], pointer(at, 0)), as_string(ej[i][1], pointer(at, 1)),
                     as_string(ej[i][2], pointer(at, 2))});
      for (int k = 0; k < 2; ++k)
        if (!state_index.count(raw.back()[k])) fail(pointer(at, k), "unknown state");
    }
    Alphabet a;
    if (j.contains("alphabet")) {
      a = alphabet_at(j["alphabet"], "/alphabet");
    } else {
      std::vector<std::string> names;
      for (const auto& e : raw)
        if (std::find(names.begin(), names.end(), e[2]) == names.end()) names.push_back(e[2]);
      if (names.empty()) fail("/edges", "no edges");
      a = Alphabet(names);
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto s = a.find(raw[i][2]);
      if (!s) fail(pointer(pointer("/edges", i), 2), "symbol not in alphabet");
      g.edges.push_back({state_index[raw[i][0]], state_index[raw[i][1]], *s});
    }
    return Presentation::sofic(std::move(a), std::move(g));
  }
  if (type == "finite") {
    only_keys(j, "", {"type", "alphabet", "points"});
    Alphabet a = alphabet_at(field(j, "", "alphabet"), "/alphabet");
    const Json& pj = as_array(field(j, "", "points"), "/points");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const std::string at = pointer("/points", i);
      only_keys(pj[i], at, {"pre", "per"});
      Word pre = pj[i].contains("pre") ? word_at(a, pj[i]["pre"], pointer(at, "pre")) : Word{};
      Word per = word_at(a, field(pj[i], at, "per"), pointer(at, "per"));
      if (per.empty()) fail(pointer(at, "per"), "period must be nonempty");
      points.emplace_back(std::move(pre), std::move(per));
    }
    return Presentation::finite(std::move(a), std::move(points));
  }
  fail("/type", "unknown presentation type '" + type + "'");
}

Json to_json(const Presentation& p) {
  const Alphabet& a = p.alphabet();
  Json j;
  j["alphabet"] = a.names();
  switch (p.kind()) {
  case PresentationKind::Finite: {
    j["type"] = "finite";
    Json pts = Json::array();
    for (const Point& x : p.finite_body().points)
      pts.push_back({{"pre", word_json(a, x.preperiod())}, {"per", word_json(a, x.period())}});
    j["points"] = std::move(pts);
    break;
  }
  case PresentationKind::Sft: {
    const auto& body = p.sft_body();
    if (body.adjacency) {
      j["type"] = "sft_matrix";
      j["adjacency"] = *body.adjacency;
    } else {
      j["type"] = "sft";
      Json f = Json::array();
      for (const Word& w : body.forbidden) f.push_back(word_json(a, w));
      j["forbidden"] = std::move(f);
    }
    break;
  }
  case PresentationKind::Sofic: {
    const auto& g = p.sofic_body().graph;
    j["type"] = "sofic";
    j["states"] = g.states;
    Json e = Json::array();
    for (const Edge& edge : g.edges)
      e.push_back({g.states[edge.from], g.states[edge.to], a.name(edge.label)});
    j["edges"] = std::move(e);
    break;
  }
  }
  return j;
}

std::string canonical_text(const Presentation& p) { return to_json(p).dump(); }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string content_hash(const Presentation& p) { return sha256_hex(canonical_text(p)); }

Json to_json(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return v.get_si();
  return v.get_str();
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

mpz_class integer_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) return mpz_class(j.get<std::string>());
  throw InvalidInput("expected an integer");
}

} // namespace

IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected a matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

Json to_json(const FgAbelianGroup& g) {
  Json t = Json::array();
  for (const auto& d : g.torsion) t.push_back(to_json(d));
  return {{"free_rank", g.free_rank}, {"torsion", std::move(t)}};
}

FgAbelianGroup group_from_json(const Json& j) {
  FgAbelianGroup g;
  g.free_rank = j.at("free_rank").get<std::size_t>();
  for (const auto& d : j.at("torsion")) g.torsion.push_back(integer_from_json(d));
  return g;
}

Json to_json(const StationarySystem& s) {
  return {{"rank", s.rank},
          {"step_map", to_json(s.step_map)},
          {"delta_mask", s.delta_mask},
          {"core", s.core}};
}

StationarySystem stationary_from_json(const Json& j) {
  StationarySystem s;
  s.rank = j.at("rank").get<std::size_t>();
  s.step_map = int_matrix_from_json(j.at("step_map"));
  s.delta_mask = j.at("delta_mask").get<std::vector<std::size_t>>();
  s.core = j.at("core").get<std::vector<std::size_t>>();
  return s;
}

Json chain_to_json(const PartitionChain& chain, bool signatures) {
  const Presentation& p = chain.presentation();
  Json levels = Json::array();
  for (std::size_t l = 0; l <= chain.depth(); ++l) {
    const PartitionLevel& lv = chain.level(l);
    Json classes = Json::array();
    for (std::size_t i = 0; i < lv.m(); ++i) {
      Json c;
      Json ctx = Json::array();
      for (std::size_t idx : lv.classes[i]) ctx.push_back(render(p, chain.carrier().contexts[idx]));
      c["contexts"] = std::move(ctx);
      if (signatures) {
        if (auto sig = chain.signature(l, i)) {
          Json s = Json::array();
          for (const auto& grade : *sig) {
            Json words = Json::array();
            for (const Word& w : grade) words.push_back(p.alphabet().render(w));
            s.push_back(std::move(words));
          }
          c["signature"] = std::move(s);
        } else {
          c["signature"] = "elided";
        }
      }
      classes.push_back(std::move(c));
    }
    Json level{{"level", l}, {"m", lv.m()}, {"classes", std::move(classes)}};
    Json msets = Json::array();
    for (std::size_t k = 0; k <= l; ++k) msets.push_back(chain.index_set_M(k, l));
    level["M"] = std::move(msets);
    if (l < chain.depth()) {
      level["I"] = to_json(chain.matrix_I(l));
      Json a = Json::object();
      for (Symbol s = 0; s < p.alphabet().size(); ++s)
        a[p.alphabet().name(s)] = to_json(chain.matrix_A(l, s));
      level["A"] = std::move(a);
      level["B"] = to_json(chain.matrix_B(l));
    }
    levels.push_back(std::move(level));
  }
  Json out{{"depth", chain.depth()}, {"m", chain.m_sequence()}, {"levels", std::move(levels)}};
  out["stable_at"] = chain.stable_at() ? Json(*chain.stable_at()) : Json(nullptr);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace shiftk
