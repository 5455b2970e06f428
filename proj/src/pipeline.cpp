#include "shiftk/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <random>

namespace shiftk {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (lmax < 1) throw InvalidInput("lmax must be at least 1");
  if (limits.max_contexts == 0 || limits.max_words == 0 || limits.max_signature_words == 0 ||
      limits.max_alphabet == 0)
    throw InvalidInput("caps must be positive");
}

bool InvariantRecord::operator==(const InvariantRecord& other) const {
  return to_json(*this) == to_json(other);
}

Json to_json(const InvariantRecord& r) {
  Json levels = Json::array();
  for (const auto& g : r.per_level)
    levels.push_back({{"level", g.level}, {"coker_B", to_json(g.cokernel)}, {"ker_B_rank", g.kernel_rank}});
  Json j{{"hash", r.hash},
         {"m", r.m_sequence},
         {"per_level", std::move(levels)},
         {"tool_version", r.tool_version}};
  j["stable_at"] = r.stable_at ? Json(*r.stable_at) : Json(nullptr);
  j["K0"] = r.k0 ? to_json(*r.k0) : Json(nullptr);
  j["K1"] = r.k1 ? to_json(*r.k1) : Json(nullptr);
  j["triple"] = r.triple ? to_json(*r.triple) : Json(nullptr);
  return j;
}

InvariantRecord record_from_json(const Json& j) {
  InvariantRecord r;
  r.hash = j.at("hash").get<std::string>();
  r.m_sequence = j.at("m").get<std::vector<std::size_t>>();
  if (!j.at("stable_at").is_null()) r.stable_at = j["stable_at"].get<std::size_t>();
  if (!j.at("K0").is_null()) r.k0 = group_from_json(j["K0"]);
  if (!j.at("K1").is_null()) r.k1 = group_from_json(j["K1"]);
  if (!j.at("triple").is_null()) r.triple = stationary_from_json(j["triple"]);
  for (const auto& g : j.at("per_level"))
    r.per_level.push_back({g.at("level").get<std::size_t>(), group_from_json(g.at("coker_B")),
                           g.at("ker_B_rank").get<std::size_t>()});
  r.tool_version = j.at("tool_version").get<std::string>();
  return r;
}

InvariantRecord compute_invariants(const Presentation& p, const RunConfig& config) {
  config.validate();
  // One extra level so that every level up to lmax has I_l and A_l.
  const PartitionChain chain = PartitionChain::build(p, config.lmax + 1, config.limits);
  InvariantRecord r;
  r.hash = content_hash(p);
  r.m_sequence = chain.m_sequence();
  r.m_sequence.pop_back();
  r.per_level = level_groups(chain);
  if (chain.stable_at() && *chain.stable_at() < config.lmax) {
    r.stable_at = chain.stable_at();
    KGroups k = k_groups(chain);
    r.k0 = k.k0;
    r.k1 = k.k1;
    r.triple = dimension_triple(chain);
  }
  return r;
}

std::string cache_key(const Presentation& p, const RunConfig& config) {
  const auto& l = config.limits;
  const std::string material = canonical_text(p) + "|lmax=" + std::to_string(config.lmax) +
                               "|contexts=" + std::to_string(l.max_contexts) +
                               "|words=" + std::to_string(l.max_words) +
                               "|sig=" + std::to_string(l.max_signature_words) +
                               "|alphabet=" + std::to_string(l.max_alphabet) + "|version=" + kToolVersion;
  return sha256_hex(material);
}

InvariantRecord cached_invariants(const Presentation& p, const RunConfig& config, bool* hit) {
  if (hit) *hit = false;
  if (config.cache_dir.empty()) return compute_invariants(p, config);
  const fs::path dir(config.cache_dir);
  const fs::path file = dir / (cache_key(p, config) + ".json");
  if (fs::exists(file)) {
    try {
      Json j = Json::parse(read_file(file.string()));
      if (j.value("tool_version", "") == kToolVersion) {
        InvariantRecord r = record_from_json(j.at("record"));
        if (hit) *hit = true;
        return r;
      }
    } catch (const std::exception&) {
      // Unreadable entries are recomputed and overwritten.
    }
  }
  InvariantRecord r = compute_invariants(p, config);
  fs::create_directories(dir);
  std::random_device rd;
  const fs::path tmp = dir / (file.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << Json{{"tool_version", kToolVersion}, {"record", to_json(r)}}.dump(2) << '\n';
  }
  fs::rename(tmp, file);
  return r;
}

int CompareResult::exit_code() const {
  switch (verdict) {
  case VerdictKind::EquivalentCertificate: return 0;
  case VerdictKind::Distinguished: return 1;
  case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

CompareResult compare_records(const InvariantRecord& a, const InvariantRecord& b) {
  if (!a.stable_at || !b.stable_at)
    throw NotStabilized("comparison needs both partition chains to stabilize within lmax");
  CompareResult r{a, b, VerdictKind::Inconclusive, "", std::nullopt};
  if (!(*a.k0 == *b.k0)) {
    r.verdict = VerdictKind::Distinguished;
    r.witness = "K0: " + a.k0->str() + " vs " + b.k0->str();
    return r;
  }
  if (!(*a.k1 == *b.k1)) {
    r.verdict = VerdictKind::Distinguished;
    r.witness = "K1: " + a.k1->str() + " vs " + b.k1->str();
    return r;
  }
  r.triple = compare_triples(*a.triple, *b.triple);
  r.verdict = r.triple->kind;
  r.witness = "triple: " + r.triple->witness;
  return r;
}

Json to_json(const CompareResult& r) {
  Json j{{"left", to_json(r.left)},
         {"right", to_json(r.right)},
         {"verdict", to_string(r.verdict)},
         {"witness", r.witness},
         {"exit_code", r.exit_code()}};
  if (r.triple && r.triple->left) {
    j["certificate"] = {{"R", to_json(*r.triple->left)}, {"S", to_json(*r.triple->right)}};
  }
  return j;
}

Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j{{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}};
    j["first_counterexample"] = c.first_counterexample ? Json(*c.first_counterexample) : Json(nullptr);
    checks.push_back(std::move(j));
  }
  return {{"title", r.title}, {"ok", r.ok()}, {"checks", std::move(checks)}};
}

} // namespace shiftk
