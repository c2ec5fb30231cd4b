#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hda/ipomset.hpp"
#include "hda/morphism.hpp"

namespace testutil {

using hda::Ipomset;
using hda::IpomsetEvent;
using hda::RawIpomset;

// Independent isomorphism oracle: search all label-preserving bijections.
inline std::optional<std::unordered_map<std::string, std::string>>
brute_force_iso(const Ipomset& p, const Ipomset& q) {
  const int n = p.size();
  if (n != q.size()) return std::nullopt;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (p.event(i).label != q.event(perm[i]).label) ok = false;
      if (ok && p.in_sources(i) != q.in_sources(perm[i])) ok = false;
      if (ok && p.in_targets(i) != q.in_targets(perm[i])) ok = false;
    }
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (p.before(i, j) != q.before(perm[i], perm[j])) ok = false;
        // the event order matters only between concurrent events
        if (ok && p.concurrent(i, j) &&
            p.ordered(i, j) != q.ordered(perm[i], perm[j]))
          ok = false;
      }
    if (ok) {
      std::unordered_map<std::string, std::string> bij;
      for (int i = 0; i < n; ++i) bij[p.event(i).id] = q.event(perm[i]).id;
      return bij;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

// Deterministic cross-platform RNG helpers (std::mt19937_64 is pinned by the
// standard; distributions are not, so draw by modulo).
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::uint64_t next() { return engine(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance(int num, int den) { return below(den) < num; }
};

// Random interval ipomset built from a random start/end sequence; the
// resulting precedence (x < y iff x ends before y starts) is an interval
// order by construction.
inline Ipomset random_interval_ipomset(Rng& rng, int max_events,
                                       int max_width,
                                       const std::vector<std::string>& alphabet,
                                       bool with_interfaces) {
  int n = 1 + rng.below(max_events);
  struct Ev { int start, end; };
  std::vector<Ev> evs(n);
  int started = 0, time = 0;
  std::vector<int> active;
  while (started < n || !active.empty()) {
    bool can_start = started < n && static_cast<int>(active.size()) < max_width;
    bool do_start = can_start && (active.empty() || rng.chance(1, 2));
    if (do_start) {
      evs[started].start = time++;
      active.push_back(started);
      ++started;
    } else {
      int k = rng.below(static_cast<int>(active.size()));
      evs[active[k]].end = time++;
      active.erase(active.begin() + k);
    }
  }
  RawIpomset raw;
  for (int i = 0; i < n; ++i)
    raw.events.push_back(
        {"v" + std::to_string(i), alphabet[rng.below(static_cast<int>(alphabet.size()))]});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && evs[i].end < evs[j].start)
        raw.precedence.emplace_back(raw.events[i].id, raw.events[j].id);
  // event order: concurrent pairs ordered by start time (a valid linearization)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool conc = !(evs[i].end < evs[j].start) && !(evs[j].end < evs[i].start);
      if (i != j && conc && evs[i].start < evs[j].start)
        raw.event_order.emplace_back(raw.events[i].id, raw.events[j].id);
    }
  Ipomset p = Ipomset::validate(raw);
  if (with_interfaces) {
    for (int i = 0; i < n; ++i) {
      if (p.minimal(i) && rng.chance(1, 2))
        raw.sources.push_back(raw.events[i].id);
      if (p.maximal(i) && rng.chance(1, 2))
        raw.targets.push_back(raw.events[i].id);
    }
    p = Ipomset::validate(raw);
  }
  return p;
}

// Applies a random permutation and fresh ids; the result is isomorphic to p.
inline Ipomset shuffled_copy(const Ipomset& p, Rng& rng) {
  const int n = p.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  RawIpomset raw;
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = "w" + std::to_string(rng.below(1000000)) + "_" + std::to_string(i);
  for (int pos = 0; pos < n; ++pos)
    raw.events.push_back({ids[perm[pos]], p.event(perm[pos]).label});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p.before(i, j)) raw.precedence.emplace_back(ids[i], ids[j]);
      if (p.ordered(i, j)) raw.event_order.emplace_back(ids[i], ids[j]);
    }
  for (int i = 0; i < n; ++i) {
    if (p.in_sources(i)) raw.sources.push_back(ids[i]);
    if (p.in_targets(i)) raw.targets.push_back(ids[i]);
  }
  return Ipomset::validate(raw);
}

// All pomsets (interval or not) on n events over the alphabet, by direct
// enumeration of both relations. Interfaces are left empty unless
// with_interfaces, in which case all interface choices are emitted too.
inline std::vector<RawIpomset> all_raw_pomsets(int n,
                                               const std::vector<std::string>& alphabet,
                                               bool with_interfaces) {
  std::vector<RawIpomset> out;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  const int np = static_cast<int>(pairs.size());
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = std::string(1, static_cast<char>('p' + i));

  const std::uint64_t lim = std::uint64_t{1} << np;
  for (std::uint64_t pm = 0; pm < lim; ++pm)
    for (std::uint64_t em = 0; em < lim; ++em) {
      RawIpomset raw;
      for (int i = 0; i < n; ++i)
        raw.events.push_back({ids[i], alphabet[i % alphabet.size()]});
      for (int k = 0; k < np; ++k) {
        if (pm >> k & 1)
          raw.precedence.emplace_back(ids[pairs[k].first], ids[pairs[k].second]);
        if (em >> k & 1)
          raw.event_order.emplace_back(ids[pairs[k].first], ids[pairs[k].second]);
      }
      Ipomset p;
      try {
        p = Ipomset::validate_pomset(raw);
      } catch (const hda::Error&) {
        continue;
      }
      // keep only closed presentations to avoid duplicates
      if (!(p.to_raw().precedence == raw.precedence) ||
          !(p.to_raw().event_order == raw.event_order))
        continue;
      if (!with_interfaces) {
        out.push_back(raw);
        continue;
      }
      for (std::uint64_t sm = 0; sm < (std::uint64_t{1} << n); ++sm)
        for (std::uint64_t tm = 0; tm < (std::uint64_t{1} << n); ++tm) {
          RawIpomset r2 = raw;
          bool ok = true;
          for (int i = 0; i < n; ++i) {
            if (sm >> i & 1) {
              if (!p.minimal(i)) { ok = false; break; }
              r2.sources.push_back(ids[i]);
            }
            if (tm >> i & 1) {
              if (!p.maximal(i)) { ok = false; break; }
              r2.targets.push_back(ids[i]);
            }
          }
          if (ok) out.push_back(r2);
        }
    }
  return out;
}

// All IP-morphisms p -> q, enumerated straight from the definition: every
// injective label-preserving map that reflects precedence and preserves the
// essential event order, combined with every state extension allowed by the
// state-pair table.
inline std::vector<hda::IpMorphism> enumerate_ip_morphisms(const Ipomset& p,
                                                           const Ipomset& q) {
  std::vector<hda::IpMorphism> result;
  const int np = p.size(), nq = q.size();
  std::vector<int> f(np, -1);
  std::vector<bool> used(nq, false);

  auto emit = [&]() {
    // enumerate eps on non-image events
    std::vector<int> free;
    for (int j = 0; j < nq; ++j)
      if (!used[j]) free.push_back(j);
    const int nf = static_cast<int>(free.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nf); ++mask) {
      std::vector<hda::EvState> eps(nq, hda::EvState::Exec);
      for (int k = 0; k < nf; ++k)
        eps[free[k]] = (mask >> k & 1) ? hda::EvState::One : hda::EvState::Zero;
      bool ok = true;
      for (int j = 0; j < nq && ok; ++j)
        for (int l = 0; l < nq && ok; ++l)
          if (q.before(j, l) && !hda::ipom_state_pair_ok(eps[j], eps[l]))
            ok = false;
      if (!ok) continue;
      try {
        result.push_back(hda::make_ip_morphism(p, q, f, eps));
      } catch (const hda::Error&) {
      }
    }
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (i == np) {
      emit();
      return;
    }
    for (int j = 0; j < nq; ++j) {
      if (used[j] || p.event(i).label != q.event(j).label) continue;
      f[i] = j;
      used[j] = true;
      self(self, i + 1);
      used[j] = false;
      f[i] = -1;
    }
  };
  rec(rec, 0);
  return result;
}

}  // namespace testutil
