#include "shiftk/past.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace shiftk {

namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

PartitionLevel from_keys(std::size_t level, const std::vector<std::vector<std::size_t>>& keys) {
  std::vector<std::vector<std::size_t>> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  PartitionLevel out;
  out.level = level;
  out.classes.resize(sorted.size());
  out.class_of.resize(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) {
    auto idx = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[c]) -
                                        sorted.begin());
    out.class_of[c] = idx;
    out.classes[idx].push_back(c);
  }
  return out;
}

} // namespace

PartitionChain PartitionChain::build(const Presentation& p, std::size_t depth,
                                     const Limits& limits) {
  if (depth < 1) throw InvalidInput("partition chain depth must be at least 1");
  PartitionChain chain(p, realizable_contexts(p, limits), limits);
  const std::size_t n = chain.carrier_.size();
  const std::size_t na = p.alphabet().size();

  chain.successor_.assign(n, std::vector<std::optional<std::size_t>>(na));
  for (std::size_t c = 0; c < n; ++c) {
    for (Symbol a = 0; a < na; ++a) {
      auto next = prepend(p, chain.carrier_.contexts[c], a);
      if (!next) continue;
      auto idx = chain.carrier_.index_of(*next);
      if (!idx) throw ConsistencyError("context of a·x is not realizable");
      chain.successor_[c][a] = *idx;
    }
  }

  chain.nonempty_.assign(depth + 2, std::vector<char>(n, 0));
  std::fill(chain.nonempty_[0].begin(), chain.nonempty_[0].end(), 1);
  for (std::size_t k = 1; k < depth + 2; ++k)
    for (std::size_t c = 0; c < n; ++c)
      for (Symbol a = 0; a < na && !chain.nonempty_[k][c]; ++a)
        if (auto s = chain.successor_[c][a]) chain.nonempty_[k][c] = chain.nonempty_[k - 1][*s];

  chain.levels_.push_back(from_keys(0, std::vector<std::vector<std::size_t>>(n, {0})));
  for (std::size_t l = 0; l < depth; ++l) {
    const PartitionLevel& prev = chain.levels_.back();
    std::vector<std::vector<std::size_t>> keys(n);
    for (std::size_t c = 0; c < n; ++c) {
      keys[c].push_back(prev.class_of[c]);
      for (Symbol a = 0; a < na; ++a) {
        auto s = chain.successor_[c][a];
        keys[c].push_back(s ? prev.class_of[*s] : kAbsent);
      }
    }
    chain.levels_.push_back(from_keys(l + 1, keys));
  }

  for (std::size_t l = 0; l < depth; ++l) {
    const PartitionLevel& lo = chain.levels_[l];
    const PartitionLevel& hi = chain.levels_[l + 1];
    IntMatrix inc(hi.m(), lo.m());
    std::vector<IntMatrix> act(na, IntMatrix(hi.m(), lo.m()));
    for (std::size_t i = 0; i < hi.m(); ++i) {
      std::set<std::size_t> parents;
      for (std::size_t c : hi.classes[i]) parents.insert(lo.class_of[c]);
      if (parents.size() != 1)
        throw ConsistencyError("level " + std::to_string(l + 1) + " class " + std::to_string(i) +
                               " is not contained in a single level-" + std::to_string(l) +
                               " class");
      inc(i, *parents.begin()) = 1;
      for (Symbol a = 0; a < na; ++a) {
        std::set<std::size_t> images;
        for (std::size_t c : hi.classes[i])
          if (auto s = chain.successor_[c][a]) images.insert(lo.class_of[*s]);
        if (images.size() > 1)
          throw ConsistencyError("a·E_" + std::to_string(i) + "^" + std::to_string(l + 1) +
                                 " straddles level-" + std::to_string(l) + " classes for symbol " +
                                 p.alphabet().name(a));
        if (images.size() == 1) act[a](i, *images.begin()) = 1;
      }
    }
    chain.inclusion_.push_back(std::move(inc));
    chain.action_.push_back(std::move(act));
  }

  for (std::size_t l = 0; l < depth; ++l) {
    if (chain.levels_[l].m() == chain.levels_[l + 1].m()) {
      chain.stable_at_ = l;
      break;
    }
  }
  if (chain.stable_at_) {
    for (std::size_t l = *chain.stable_at_; l < depth; ++l) {
      if (!(chain.levels_[l + 1].classes == chain.levels_[l].classes) ||
          !(chain.inclusion_[l] == IntMatrix::identity(chain.levels_[l].m())))
        throw ConsistencyError("partition refined again after stabilizing at level " +
                               std::to_string(*chain.stable_at_));
    }
  }
  return chain;
}

const PartitionLevel& PartitionChain::level(std::size_t l) const {
  if (l >= levels_.size())
    throw InvalidInput("level " + std::to_string(l) + " beyond chain depth " +
                       std::to_string(depth()));
  return levels_[l];
}

std::vector<std::size_t> PartitionChain::m_sequence() const {
  std::vector<std::size_t> out;
  for (const auto& lv : levels_) out.push_back(lv.m());
  return out;
}

std::optional<std::size_t> PartitionChain::successor(std::size_t c, Symbol a) const {
  return successor_.at(c).at(a);
}

void PartitionChain::check_level(std::size_t l) const {
  if (l + 1 > depth())
    throw InvalidInput("level " + std::to_string(l) + " needs level " + std::to_string(l + 1) +
                       " but the chain stops at " + std::to_string(depth()));
}

const IntMatrix& PartitionChain::matrix_I(std::size_t l) const {
  check_level(l);
  return inclusion_[l];
}

const IntMatrix& PartitionChain::matrix_A(std::size_t l, Symbol a) const {
  check_level(l);
  return action_[l].at(a);
}

IntMatrix PartitionChain::matrix_A_sum(std::size_t l) const {
  check_level(l);
  IntMatrix sum(levels_[l + 1].m(), levels_[l].m());
  for (const IntMatrix& a : action_[l]) sum = sum + a;
  return sum;
}

IntMatrix PartitionChain::matrix_B(std::size_t l) const { return matrix_I(l) - matrix_A_sum(l); }

bool PartitionChain::predecessors_nonempty(std::size_t k, std::size_t l, std::size_t i) const {
  if (k > l) throw InvalidInput("P_k is only constant on l-classes for k ≤ l");
  const auto& members = level(l).classes.at(i);
  const char first = nonempty_.at(k)[members.front()];
  for (std::size_t c : members)
    if (nonempty_[k][c] != first)
      throw ConsistencyError("P_" + std::to_string(k) + " emptiness differs inside a level-" +
                             std::to_string(l) + " class");
  return first != 0;
}

std::vector<std::size_t> PartitionChain::index_set_M(std::size_t k, std::size_t l) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < level(l).m(); ++i)
    if (predecessors_nonempty(k, l, i)) out.push_back(i);
  return out;
}

RestrictedMaps PartitionChain::restricted_maps(std::size_t k, std::size_t l) const {
  if (k > l) throw InvalidInput("restricted maps need k ≤ l");
  check_level(l);
  const auto mk_l = index_set_M(k, l);
  const auto mk_l1 = index_set_M(k, l + 1);
  const auto mk1_l1 = index_set_M(k + 1, l + 1);
  RestrictedMaps out;
  out.inclusion = {mk_l1, mk_l, inclusion_[l].select(mk_l1, mk_l)};
  out.action = {mk1_l1, mk_l, matrix_A_sum(l).select(mk1_l1, mk_l)};
  if (k < l) {
    const auto mk1_l = index_set_M(k + 1, l);
    IntMatrix d(mk1_l.size(), mk_l.size());
    for (std::size_t r = 0; r < mk1_l.size(); ++r)
      for (std::size_t c = 0; c < mk_l.size(); ++c)
        if (mk1_l[r] == mk_l[c]) d(r, c) = 1;
    out.delta = RestrictedMap{mk1_l, mk_l, std::move(d)};
  }
  return out;
}

std::optional<Signature> PartitionChain::signature(std::size_t l, std::size_t i) const {
  const auto& members = level(l).classes.at(i);
  const Context& rep = carrier_.contexts[members.front()];
  Limits capped = limits_;
  std::size_t budget = limits_.max_signature_words;
  Signature sig;
  for (std::size_t k = 0; k <= l; ++k) {
    capped.max_words = budget;
    try {
      sig.push_back(predecessor_set(presentation_, rep, k, capped));
    } catch (const CapExceeded&) {
      return std::nullopt;
    }
    if (sig.back().size() > budget) return std::nullopt;
    budget -= sig.back().size();
  }
  return sig;
}

PartitionLevel past_partition(const Presentation& p, std::size_t l, const Limits& limits) {
  auto chain = PartitionChain::build(p, std::max<std::size_t>(l, 1), limits);
  return chain.level(l);
}

CommutationReport check_commutation(const PartitionChain& chain,
                                    std::optional<std::size_t> max_level) {
  CommutationReport report;
  const std::size_t top = max_level ? std::min(*max_level, chain.depth()) : chain.depth();
  auto record = [&](bool ok, const std::string& what) {
    ++report.checked;
    if (!ok) report.violations.push_back(what);
  };
  auto tag = [](const char* name, std::size_t k, std::size_t l) {
    return std::string(name) + " k=" + std::to_string(k) + " l=" + std::to_string(l);
  };
  for (std::size_t l = 0; l < top; ++l) {
    for (std::size_t k = 0; k <= l; ++k) {
      if (l + 2 <= chain.depth()) {
        auto lo = chain.restricted_maps(k, l);
        auto hi = chain.restricted_maps(k, l + 1);
        auto hi1 = chain.restricted_maps(k + 1, l + 1);
        record(hi.action.matrix * lo.inclusion.matrix == hi1.inclusion.matrix * lo.action.matrix,
               tag("A I = I A", k, l));
      }
      if (k < l && l + 2 <= chain.depth()) {
        auto at = chain.restricted_maps(k, l);
        auto at1 = chain.restricted_maps(k + 1, l);
        auto up = chain.restricted_maps(k, l + 1);
        auto up1 = chain.restricted_maps(k + 1, l + 1);
        record(at1.inclusion.matrix * at.delta->matrix == up.delta->matrix * at.inclusion.matrix,
               tag("I delta = delta I", k, l));
        record(at1.action.matrix * at.delta->matrix == up1.delta->matrix * at.action.matrix,
               tag("A delta = delta A", k, l));
      }
    }
    if (l + 2 <= chain.depth()) {
      record(chain.matrix_B(l + 1) * chain.matrix_I(l) == chain.matrix_I(l + 1) * chain.matrix_B(l),
             "B I = I B l=" + std::to_string(l));
    }
  }
  return report;
}

} // namespace shiftk
