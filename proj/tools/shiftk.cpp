// shiftk: invariants of one-sided shift spaces from the command line.
//
// Exit codes: 0 success (compare: no invariant distinguishes), 1 compare
// distinguished / model identities violated, 2 compare inconclusive, 3 bad
// input or failed computation, 4 partition chain not stabilized.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shiftk/matrix_model.hpp"
#include "shiftk/pipeline.hpp"
#include "shiftk/transforms.hpp"

using namespace shiftk;

namespace {

struct Options {
  std::size_t lmax = 12;
  std::string format = "table";
  std::string cache_dir;
  bool no_cache = false;
  std::size_t max_contexts = Limits{}.max_contexts;
  std::size_t max_words = Limits{}.max_words;
  std::size_t max_signature_words = Limits{}.max_signature_words;
  std::size_t max_alphabet = Limits{}.max_alphabet;
};

std::string default_cache_dir() {
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/shiftk";
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/shiftk";
  return ".shiftk-cache";
}

RunConfig make_config(const Options& o) {
  RunConfig c;
  c.lmax = o.lmax;
  c.limits = {o.max_contexts, o.max_words, o.max_signature_words, o.max_alphabet};
  c.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Table;
  c.cache_dir = o.no_cache ? "" : (o.cache_dir.empty() ? default_cache_dir() : o.cache_dir);
  c.validate();
  return c;
}

Presentation load(const std::string& path, const RunConfig& c) {
  try {
    return parse_presentation(read_file(path), c.limits);
  } catch (const Error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string set_str(const std::vector<std::size_t>& v) { return "{" + join(v, ",") + "}"; }

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(14) << key << value << '\n';
}

void print_record(std::ostream& out, const InvariantRecord& r) {
  row(out, "hash", r.hash);
  row(out, "m", join(r.m_sequence));
  row(out, "stable_at", r.stable_at ? std::to_string(*r.stable_at) : "not within lmax");
  if (r.k0) {
    row(out, "K0", r.k0->str());
    row(out, "K1", r.k1->str());
    row(out, "rank", std::to_string(r.triple->rank));
    row(out, "step_map", r.triple->step_map.str());
    row(out, "delta_mask", set_str(r.triple->delta_mask));
    row(out, "core", set_str(r.triple->core));
  } else {
    for (const auto& g : r.per_level)
      row(out, "l=" + std::to_string(g.level),
          "coker(B)=" + g.cokernel.str() + " rank ker(B)=" + std::to_string(g.kernel_rank));
  }
}

int cmd_invariants(const std::string& file, const RunConfig& c, bool kgroups_only, bool triple_only) {
  bool hit = false;
  InvariantRecord r = cached_invariants(load(file, c), c, &hit);
  if (c.format == OutputFormat::Json) {
    Json j = to_json(r);
    if (kgroups_only) j = {{"K0", j["K0"]}, {"K1", j["K1"]}, {"stable_at", j["stable_at"]}, {"per_level", j["per_level"]}};
    if (triple_only) j = {{"triple", j["triple"]}, {"stable_at", j["stable_at"]}};
    std::cout << j.dump(2) << '\n';
  } else if (kgroups_only) {
    if (r.k0) {
      row(std::cout, "K0", r.k0->str());
      row(std::cout, "K1", r.k1->str());
      row(std::cout, "stable_at", std::to_string(*r.stable_at));
    }
    for (const auto& g : r.per_level)
      row(std::cout, "l=" + std::to_string(g.level),
          "coker(B)=" + g.cokernel.str() + " rank ker(B)=" + std::to_string(g.kernel_rank));
  } else if (triple_only) {
    if (r.triple) {
      row(std::cout, "rank", std::to_string(r.triple->rank));
      row(std::cout, "step_map", r.triple->step_map.str());
      row(std::cout, "cone", "Z+^" + std::to_string(r.triple->rank));
      row(std::cout, "delta_mask", set_str(r.triple->delta_mask));
      row(std::cout, "core", set_str(r.triple->core));
    }
  } else {
    print_record(std::cout, r);
  }
  if (!r.stable_at) {
    std::cerr << "partition chain not stabilized within lmax = " << c.lmax << "; partial data shown\n";
    return 4;
  }
  return 0;
}

int cmd_classes(const std::string& file, const RunConfig& c) {
  const Presentation p = load(file, c);
  const PartitionChain chain = PartitionChain::build(p, c.lmax, c.limits);
  if (c.format == OutputFormat::Json) {
    std::cout << chain_to_json(chain, true).dump(2) << '\n';
    return 0;
  }
  row(std::cout, "m", join(chain.m_sequence()));
  row(std::cout, "stable_at", chain.stable_at() ? std::to_string(*chain.stable_at()) : "not within lmax");
  const std::size_t top = chain.stable_at() ? std::max<std::size_t>(*chain.stable_at(), 1) : chain.depth();
  const std::size_t shown = std::min(top, chain.depth());
  const PartitionLevel& lv = chain.level(shown);
  std::cout << "classes at level " << shown << ":\n";
  std::cout << std::left << std::setw(7) << "class" << std::setw(6) << "in M1" << "contexts / signature\n";
  for (std::size_t i = 0; i < lv.m(); ++i) {
    std::string ctx;
    for (std::size_t idx : lv.classes[i]) ctx += (ctx.empty() ? "" : " ") + render(p, chain.carrier().contexts[idx]);
    const bool in_m1 = shown >= 1 && chain.predecessors_nonempty(1, shown, i);
    std::cout << std::setw(7) << i << std::setw(6) << (in_m1 ? "yes" : "no") << ctx << '\n';
    std::string sig;
    if (auto s = chain.signature(shown, i)) {
      for (std::size_t k = 0; k < s->size(); ++k) {
        sig += " P" + std::to_string(k) + "={";
        for (std::size_t t = 0; t < (*s)[k].size(); ++t) sig += (t ? "," : "") + p.alphabet().render((*s)[k][t]);
        sig += "}";
      }
    } else {
      sig = " (signature elided)";
    }
    std::cout << std::setw(13) << "" << sig.substr(1) << '\n';
  }
  return 0;
}

int cmd_matrices(const std::string& file, const RunConfig& c, std::optional<std::size_t> level) {
  const Presentation p = load(file, c);
  const PartitionChain chain = PartitionChain::build(p, c.lmax, c.limits);
  if (c.format == OutputFormat::Json) {
    std::cout << chain_to_json(chain, false).dump(2) << '\n';
    return 0;
  }
  std::size_t lo = 0, hi = chain.depth();
  if (level) {
    if (*level >= chain.depth()) throw InvalidInput("--level must be below lmax");
    lo = *level;
    hi = *level + 1;
  }
  for (std::size_t l = lo; l < hi; ++l) {
    std::cout << "level " << l << " (m=" << chain.level(l).m() << " -> " << chain.level(l + 1).m() << ")\n";
    row(std::cout, "  I", chain.matrix_I(l).str());
    for (Symbol a = 0; a < p.alphabet().size(); ++a)
      row(std::cout, "  A[" + p.alphabet().name(a) + "]", chain.matrix_A(l, a).str());
    row(std::cout, "  sum A", chain.matrix_A_sum(l).str());
    row(std::cout, "  B", chain.matrix_B(l).str());
    std::string ms;
    for (std::size_t k = 0; k <= l; ++k) ms += "M" + std::to_string(k) + "=" + set_str(chain.index_set_M(k, l)) + " ";
    row(std::cout, "  M-sets", ms);
  }
  return 0;
}

Json parse_move(const std::string& text) {
  const std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("move descriptor is not valid JSON: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

int cmd_transform(const std::string& file, const std::string& move, const std::string& out,
                  const std::string& second_out, const RunConfig& c) {
  const Presentation p = load(file, c);
  auto reports = apply_move(p, parse_move(move), c.limits);
  if (!out.empty()) write_file(out, to_json(reports[0].output).dump(2) + "\n");
  if (reports.size() > 1 && !second_out.empty())
    write_file(second_out, to_json(reports[1].output).dump(2) + "\n");
  if (c.format == OutputFormat::Json) {
    Json all = Json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    std::cout << (reports.size() == 1 ? all[0] : all).dump(2) << '\n';
    return 0;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (reports.size() > 1) std::cout << (i == 0 ? "[union shift]\n" : "[second shift]\n");
    row(std::cout, "move", r.descriptor.dump());
    row(std::cout, "input hash", r.input_hash);
    row(std::cout, "output hash", content_hash(r.output));
    std::string names;
    for (const auto& n : r.output.alphabet().names()) names += (names.empty() ? "" : " ") + n;
    row(std::cout, "alphabet", names);
    for (const auto& m : r.symbol_maps) {
      std::string e;
      for (const auto& [sym, word] : m.entries) {
        e += (e.empty() ? "" : ", ") + sym + "->";
        for (const auto& l : word) e += l;
        if (word.empty()) e += "<e>";
      }
      row(std::cout, m.name, e);
    }
    if (out.empty() || (i == 1 && second_out.empty())) std::cout << to_json(r.output).dump() << '\n';
  }
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const RunConfig& c) {
  const InvariantRecord ra = cached_invariants(load(a, c), c);
  const InvariantRecord rb = cached_invariants(load(b, c), c);
  const CompareResult r = compare_records(ra, rb);
  if (c.format == OutputFormat::Json) {
    std::cout << to_json(r).dump(2) << '\n';
    return r.exit_code();
  }
  auto side = [](const std::string& l, const std::string& x, const std::string& y) {
    std::cout << std::left << std::setw(14) << l << std::setw(33) << x << " " << y << '\n';
  };
  side("", a, b);
  side("m", join(ra.m_sequence), join(rb.m_sequence));
  side("K0", ra.k0->str(), rb.k0->str());
  side("K1", ra.k1->str(), rb.k1->str());
  side("step_map", ra.triple->step_map.str(), rb.triple->step_map.str());
  side("core", set_str(ra.triple->core), set_str(rb.triple->core));
  row(std::cout, "verdict", to_string(r.verdict));
  row(std::cout, "witness", r.witness);
  if (r.triple && r.triple->left) {
    row(std::cout, "R", r.triple->left->str());
    row(std::cout, "S", r.triple->right->str());
  }
  return r.exit_code();
}

int cmd_model_verify(const std::string& file, std::size_t L, const RunConfig& c) {
  const Presentation p = load(file, c);
  if (p.kind() != PresentationKind::Finite)
    throw Unsupported("model verify needs a finite presentation; the operator model is exact only on finite X");
  const FiniteModel m(p);
  const std::vector<VerifyReport> reports{verify_representation(m, L), verify_structure(m, L),
                                          verify_prop_structure(m, L), verify_monomial_closure(m, L)};
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (c.format == OutputFormat::Json) {
    Json all = Json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    std::cout << Json{{"L", L}, {"points", m.n()}, {"ok", ok}, {"reports", all}}.dump(2) << '\n';
    return ok ? 0 : 1;
  }
  std::cout << "finite model with " << m.n() << " points, L = " << L << '\n';
  for (const auto& r : reports) {
    std::cout << "[" << r.title << "]\n";
    for (const auto& ch : r.checks) {
      std::cout << "  " << (ch.failed ? "FAIL " : "pass ") << std::left << std::setw(44) << ch.name
                << ch.checked - ch.failed << "/" << ch.checked << '\n';
      if (ch.first_counterexample) std::cout << "       first counterexample: " << *ch.first_counterexample << '\n';
    }
  }
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of one-sided shift spaces"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--lmax", o.lmax, "deepest past-equivalence level")->envname("SHIFTK_LMAX")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "table or json")->envname("SHIFTK_FORMAT")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--cache-dir", o.cache_dir, "invariant cache directory")->envname("SHIFTK_CACHE_DIR");
  app.add_flag("--no-cache", o.no_cache, "bypass the invariant cache")->envname("SHIFTK_NO_CACHE");
  app.add_option("--max-contexts", o.max_contexts, "context cap")->envname("SHIFTK_MAX_CONTEXTS");
  app.add_option("--max-words", o.max_words, "word enumeration cap")->envname("SHIFTK_MAX_WORDS");
  app.add_option("--max-signature-words", o.max_signature_words, "words kept per class signature")
      ->envname("SHIFTK_MAX_SIGNATURE_WORDS");
  app.add_option("--max-alphabet", o.max_alphabet, "alphabet cap for recodings")->envname("SHIFTK_MAX_ALPHABET");

  std::string file, file_b, move, out, second_out;
  std::optional<std::size_t> level;
  std::size_t L = 3;
  auto add_file = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("file", file, "presentation JSON")->required();
  };
  auto* inv = app.add_subcommand("invariants", "K-groups, chain summary and stationary system");
  add_file(inv);
  auto* cls = app.add_subcommand("classes", "past-equivalence classes per level");
  add_file(cls);
  auto* mat = app.add_subcommand("matrices", "I_l, A_l, B^l and M-sets per level");
  add_file(mat);
  mat->add_option("--level", level, "only this level");
  auto* kg = app.add_subcommand("kgroups", "K0 and K1");
  add_file(kg);
  auto* tri = app.add_subcommand("triple", "stationary system for the dimension triple");
  add_file(tri);
  auto* tr = app.add_subcommand("transform", "higher_block, expand or split");
  add_file(tr);
  tr->add_option("--move", move, "move descriptor JSON, or @file")->required();
  tr->add_option("--out", out, "write the output presentation here");
  tr->add_option("--second-out", second_out, "split only: write the second shift here");
  auto* cmp = app.add_subcommand("compare", "compare the invariants of two presentations");
  cmp->fallthrough();
  cmp->add_option("a", file, "first presentation")->required();
  cmp->add_option("b", file_b, "second presentation")->required();
  auto* model = app.add_subcommand("model", "finite operator model");
  model->require_subcommand(1);
  auto* verify = model->add_subcommand("verify", "check the operator identities exactly");
  verify->fallthrough();
  model->fallthrough();
  verify->add_option("file", file, "finite presentation JSON")->required();
  verify->add_option("--L", L, "maximal word length")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    const RunConfig c = make_config(o);
    if (inv->parsed()) return cmd_invariants(file, c, false, false);
    if (kg->parsed()) return cmd_invariants(file, c, true, false);
    if (tri->parsed()) return cmd_invariants(file, c, false, true);
    if (cls->parsed()) return cmd_classes(file, c);
    if (mat->parsed()) return cmd_matrices(file, c, level);
    if (tr->parsed()) return cmd_transform(file, move, out, second_out, c);
    if (cmp->parsed()) return cmd_compare(file, file_b, c);
    if (verify->parsed()) return cmd_model_verify(file, L, c);
  } catch (const NotStabilized& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
