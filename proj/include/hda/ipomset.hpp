#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hda/error.hpp"

namespace hda {

// A conclist: a finite list of event slots, totally ordered by position,
// each carrying a label.
struct Conclist {
  std::vector<std::string> labels;

  Conclist() = default;
  explicit Conclist(std::vector<std::string> l) : labels(std::move(l)) {}

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  bool operator==(const Conclist&) const = default;
};

struct IpomsetEvent {
  std::string id;
  std::string label;
  bool operator==(const IpomsetEvent&) const = default;
};

// Plain relational presentation of an ipomset, used as the JSON carrier and
// as input to validation. Relations are given by generator pairs of ids.
struct RawIpomset {
  std::vector<IpomsetEvent> events;
  std::vector<std::pair<std::string, std::string>> precedence;
  std::vector<std::pair<std::string, std::string>> event_order;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
};

namespace detail {

inline int popcount(std::uint64_t m) { return std::popcount(m); }

// Transitive closure of an adjacency row set; returns false on a cycle
// (some i reaches itself).
inline bool close_transitively(std::vector<std::uint64_t>& rows) {
  const int n = static_cast<int>(rows.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      std::uint64_t row = rows[i], acc = row;
      for (int j = 0; j < n; ++j)
        if (row >> j & 1) acc |= rows[j];
      if (acc != rows[i]) {
        rows[i] = acc;
        changed = true;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (rows[i] >> i & 1) return false;
  return true;
}

}  // namespace detail

// An interval ipomset with interfaces. Immutable after validation; both
// orders are stored transitively closed. Events keep stable string ids so
// that gluing and decomposition stay deterministic.
class Ipomset {
 public:
  Ipomset() = default;

  // Validates everything except the interval condition. Used by is_interval
  // and as the common core of validate().
  static Ipomset validate_pomset(const RawIpomset& raw) {
    Ipomset p;
    const int n = static_cast<int>(raw.events.size());
    if (n > 64)
      throw Error(ErrorKind::BadFormat, "at most 64 events are supported");
    p.events_ = raw.events;
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
      const auto& e = raw.events[i];
      if (e.id.empty())
        throw Error(ErrorKind::BadFormat, "empty event id");
      if (!index.emplace(e.id, i).second)
        throw Error(ErrorKind::BadFormat, "duplicate event id: " + e.id);
    }
    auto resolve = [&](const std::string& id) {
      auto it = index.find(id);
      if (it == index.end())
        throw Error(ErrorKind::BadFormat, "unknown event id: " + id);
      return it->second;
    };
    p.prec_.assign(n, 0);
    p.evord_.assign(n, 0);
    for (const auto& [a, b] : raw.precedence) {
      int i = resolve(a), j = resolve(b);
      if (i == j)
        throw Error(ErrorKind::NotStrictOrder, "reflexive precedence on " + a,
                    {a});
      p.prec_[i] |= std::uint64_t{1} << j;
    }
    for (const auto& [a, b] : raw.event_order) {
      int i = resolve(a), j = resolve(b);
      if (i == j)
        throw Error(ErrorKind::NotStrictOrder, "reflexive event order on " + a,
                    {a});
      p.evord_[i] |= std::uint64_t{1} << j;
    }
    if (!detail::close_transitively(p.prec_))
      throw Error(ErrorKind::NotStrictOrder, "precedence has a cycle");
    if (!detail::close_transitively(p.evord_))
      throw Error(ErrorKind::NotStrictOrder, "event order has a cycle");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!p.comparable(i, j))
          throw Error(ErrorKind::NotTotal,
                      "events incomparable in both orders: " +
                          p.events_[i].id + ", " + p.events_[j].id,
                      {p.events_[i].id, p.events_[j].id});
    for (const auto& id : raw.sources) {
      int i = resolve(id);
      if (p.src_ >> i & 1)
        throw Error(ErrorKind::BadFormat, "duplicate source: " + id);
      p.src_ |= std::uint64_t{1} << i;
    }
    for (const auto& id : raw.targets) {
      int i = resolve(id);
      if (p.tgt_ >> i & 1)
        throw Error(ErrorKind::BadFormat, "duplicate target: " + id);
      p.tgt_ |= std::uint64_t{1} << i;
    }
    for (int i = 0; i < n; ++i) {
      if ((p.src_ >> i & 1) && !p.minimal(i))
        throw Error(ErrorKind::BadInterface,
                    "source event is not <-minimal: " + p.events_[i].id,
                    {p.events_[i].id});
      if ((p.tgt_ >> i & 1) && !p.maximal(i))
        throw Error(ErrorKind::BadInterface,
                    "target event is not <-maximal: " + p.events_[i].id,
                    {p.events_[i].id});
    }
    return p;
  }

  // Full validation, including the interval condition.
  static Ipomset validate(const RawIpomset& raw);

  static Ipomset empty() { return Ipomset(); }

  // A discrete ipomset over the given events (listed in event order) with
  // interfaces given as index sets.
  static Ipomset discrete(std::vector<IpomsetEvent> events,
                          const std::vector<int>& sources,
                          const std::vector<int>& targets) {
    RawIpomset raw;
    raw.events = std::move(events);
    for (std::size_t i = 0; i + 1 < raw.events.size(); ++i)
      raw.event_order.emplace_back(raw.events[i].id, raw.events[i + 1].id);
    for (int i : sources) raw.sources.push_back(raw.events.at(i).id);
    for (int i : targets) raw.targets.push_back(raw.events.at(i).id);
    return validate_pomset(raw);  // discrete, interval trivially
  }

  int size() const { return static_cast<int>(events_.size()); }
  bool is_empty() const { return events_.empty(); }
  const std::vector<IpomsetEvent>& events() const { return events_; }
  const IpomsetEvent& event(int i) const { return events_[i]; }

  int index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
      if (events_[i].id == id) return i;
    return -1;
  }

  bool before(int i, int j) const { return prec_[i] >> j & 1; }     // i < j
  bool ordered(int i, int j) const { return evord_[i] >> j & 1; }   // i ⇢ j
  bool comparable(int i, int j) const {
    return before(i, j) || before(j, i) || ordered(i, j) || ordered(j, i);
  }
  bool concurrent(int i, int j) const {
    return i != j && !before(i, j) && !before(j, i);
  }
  bool in_sources(int i) const { return src_ >> i & 1; }
  bool in_targets(int i) const { return tgt_ >> i & 1; }
  std::uint64_t sources_mask() const { return src_; }
  std::uint64_t targets_mask() const { return tgt_; }

  bool minimal(int i) const {
    for (int j = 0; j < size(); ++j)
      if (before(j, i)) return false;
    return true;
  }
  bool maximal(int i) const {
    for (int j = 0; j < size(); ++j)
      if (before(i, j)) return false;
    return true;
  }
  bool is_discrete() const {
    for (int i = 0; i < size(); ++i)
      if (prec_[i]) return false;
    return true;
  }

  // Sorts an antichain (or any ⇢-total index set) by the event order.
  std::vector<int> event_order_sorted(std::vector<int> ix) const {
    std::sort(ix.begin(), ix.end(),
              [&](int a, int b) { return ordered(a, b); });
    return ix;
  }

  std::vector<int> sources_in_order() const { return mask_in_order(src_); }
  std::vector<int> targets_in_order() const { return mask_in_order(tgt_); }
  std::vector<int> mask_in_order(std::uint64_t mask) const {
    std::vector<int> ix;
    for (int i = 0; i < size(); ++i)
      if (mask >> i & 1) ix.push_back(i);
    return event_order_sorted(ix);
  }

  Conclist conclist_of(const std::vector<int>& ordered_ix) const {
    Conclist c;
    for (int i : ordered_ix) c.labels.push_back(events_[i].label);
    return c;
  }
  Conclist source_conclist() const { return conclist_of(sources_in_order()); }
  Conclist target_conclist() const { return conclist_of(targets_in_order()); }

  RawIpomset to_raw() const {
    RawIpomset raw;
    raw.events = events_;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (before(i, j))
          raw.precedence.emplace_back(events_[i].id, events_[j].id);
        if (ordered(i, j))
          raw.event_order.emplace_back(events_[i].id, events_[j].id);
      }
    for (int i : sources_in_order()) raw.sources.push_back(events_[i].id);
    for (int i : targets_in_order()) raw.targets.push_back(events_[i].id);
    return raw;
  }

  // Structural equality on ids, labels, closed orders and interfaces.
  bool operator==(const Ipomset&) const = default;

 private:
  friend struct IpomsetOps;
  std::vector<IpomsetEvent> events_;
  std::vector<std::uint64_t> prec_;   // transitively closed
  std::vector<std::uint64_t> evord_;  // transitively closed
  std::uint64_t src_ = 0, tgt_ = 0;
};

struct IntervalWitness {
  // Events (x, z, y, w) with x < z, y < w but neither x < w nor y < z.
  std::array<std::string, 4> events;
};

// 2+2 check by brute force over all quadruples.
inline std::optional<IntervalWitness> interval_witness(const Ipomset& p) {
  const int n = p.size();
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      if (!p.before(x, z)) continue;
      for (int y = 0; y < n; ++y)
        for (int w = 0; w < n; ++w) {
          if (!p.before(y, w)) continue;
          if (!p.before(x, w) && !p.before(y, z))
            return IntervalWitness{{p.event(x).id, p.event(z).id,
                                    p.event(y).id, p.event(w).id}};
        }
    }
  return std::nullopt;
}

inline bool is_interval(const Ipomset& p) { return !interval_witness(p); }

struct IntervalCheck {
  bool interval;
  std::optional<IntervalWitness> witness;
};

// Validates the non-interval invariants, then reports intervality.
inline IntervalCheck is_interval(const RawIpomset& raw) {
  Ipomset p = Ipomset::validate_pomset(raw);
  auto w = interval_witness(p);
  return IntervalCheck{!w.has_value(), w};
}

inline Ipomset Ipomset::validate(const RawIpomset& raw) {
  Ipomset p = validate_pomset(raw);
  if (auto w = interval_witness(p))
    throw Error(ErrorKind::NotInterval,
                "2+2 witness: " + w->events[0] + "<" + w->events[1] + ", " +
                    w->events[2] + "<" + w->events[3],
                {w->events.begin(), w->events.end()});
  return p;
}

// Maximal antichains of an interval ipomset sorted by the ≺ order, each
// sorted internally by the event order. For interval orders the down-sets
// {y : y < x} form a chain under inclusion; the i-th maximal antichain is
// the set of events born by stage i and not below stage i's down-set.
// Throws NotLinear when the down-sets do not chain (non-interval input).
inline std::vector<std::vector<int>> maximal_antichains(const Ipomset& p) {
  const int n = p.size();
  if (n == 0) return {{}};
  std::vector<std::uint64_t> down(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.before(j, i)) down[i] |= std::uint64_t{1} << j;
  std::vector<std::uint64_t> chain(down);
  std::sort(chain.begin(), chain.end(), [](std::uint64_t a, std::uint64_t b) {
    return detail::popcount(a) < detail::popcount(b);
  });
  chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
  for (std::size_t k = 0; k + 1 < chain.size(); ++k)
    if ((chain[k] & ~chain[k + 1]) != 0)
      throw Error(ErrorKind::NotLinear,
                  "maximal antichains are not linearly ordered");
  std::vector<int> birth(n);
  for (int i = 0; i < n; ++i)
    birth[i] = static_cast<int>(
        std::find(chain.begin(), chain.end(), down[i]) - chain.begin());
  std::vector<std::vector<int>> result;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    std::vector<int> ac;
    for (int i = 0; i < n; ++i)
      if (birth[i] <= static_cast<int>(k) && !(chain[k] >> i & 1))
        ac.push_back(i);
    result.push_back(p.event_order_sorted(std::move(ac)));
  }
  return result;
}

// The unique factorization of an interval ipomset into discrete steps: the
// i-th factor's events are the i-th maximal antichain, consecutive factors
// share exactly their intersection, and the outer interfaces are kept.
// The empty ipomset decomposes as a single empty discrete factor.
inline std::vector<Ipomset> minimal_discrete_decomposition(const Ipomset& p) {
  auto antichains = maximal_antichains(p);
  const int m = static_cast<int>(antichains.size());
  std::vector<std::uint64_t> masks(m, 0);
  for (int k = 0; k < m; ++k)
    for (int i : antichains[k]) masks[k] |= std::uint64_t{1} << i;
  std::vector<Ipomset> factors;
  for (int k = 0; k < m; ++k) {
    std::uint64_t s =
        k == 0 ? p.sources_mask() : (masks[k - 1] & masks[k]);
    std::uint64_t t =
        k == m - 1 ? p.targets_mask() : (masks[k] & masks[k + 1]);
    std::vector<IpomsetEvent> evs;
    std::vector<int> si, ti;
    for (std::size_t pos = 0; pos < antichains[k].size(); ++pos) {
      int i = antichains[k][pos];
      evs.push_back(p.event(i));
      if (s >> i & 1) si.push_back(static_cast<int>(pos));
      if (t >> i & 1) ti.push_back(static_cast<int>(pos));
    }
    factors.push_back(Ipomset::discrete(std::move(evs), si, ti));
  }
  return factors;
}

struct GlueResult {
  Ipomset ipomset;
  // Index maps from the operands' event indices into the result's.
  std::vector<int> from_left, from_right;
};

// Gluing composition P*Q. The target interface of P is identified with the
// source interface of Q by the unique label-preserving order isomorphism;
// colliding ids on the right are freshened with primes.
inline GlueResult glue_info(const Ipomset& p, const Ipomset& q) {
  auto pt = p.targets_in_order();
  auto qs = q.sources_in_order();
  if (pt.size() != qs.size())
    throw Error(ErrorKind::NotComposable,
                "interface sizes differ: " + std::to_string(pt.size()) +
                    " vs " + std::to_string(qs.size()));
  for (std::size_t k = 0; k < pt.size(); ++k)
    if (p.event(pt[k]).label != q.event(qs[k]).label)
      throw Error(ErrorKind::NotComposable,
                  "interface labels differ at position " + std::to_string(k) +
                      ": " + p.event(pt[k]).label + " vs " +
                      q.event(qs[k]).label);

  GlueResult res;
  res.from_left.assign(p.size(), -1);
  res.from_right.assign(q.size(), -1);
  RawIpomset raw;
  std::unordered_set<std::string> used;
  for (int i = 0; i < p.size(); ++i) {
    raw.events.push_back(p.event(i));
    used.insert(p.event(i).id);
    res.from_left[i] = i;
  }
  for (std::size_t k = 0; k < qs.size(); ++k)
    res.from_right[qs[k]] = res.from_left[pt[k]];
  for (int j = 0; j < q.size(); ++j) {
    if (res.from_right[j] >= 0) continue;
    std::string id = q.event(j).id;
    while (used.count(id)) id += "'";
    used.insert(id);
    res.from_right[j] = static_cast<int>(raw.events.size());
    raw.events.push_back({id, q.event(j).label});
  }
  auto lid = [&](int i) { return raw.events[res.from_left[i]].id; };
  auto rid = [&](int j) { return raw.events[res.from_right[j]].id; };
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j) {
      if (p.before(i, j)) raw.precedence.emplace_back(lid(i), lid(j));
      if (p.ordered(i, j)) raw.event_order.emplace_back(lid(i), lid(j));
    }
  for (int i = 0; i < q.size(); ++i)
    for (int j = 0; j < q.size(); ++j) {
      if (q.before(i, j)) raw.precedence.emplace_back(rid(i), rid(j));
      if (q.ordered(i, j)) raw.event_order.emplace_back(rid(i), rid(j));
    }
  for (int i = 0; i < p.size(); ++i) {
    if (p.in_targets(i)) continue;
    for (int j = 0; j < q.size(); ++j)
      if (!q.in_sources(j)) raw.precedence.emplace_back(lid(i), rid(j));
  }
  for (int i : p.sources_in_order()) raw.sources.push_back(lid(i));
  for (int j : q.targets_in_order()) raw.targets.push_back(rid(j));
  res.ipomset = Ipomset::validate(raw);
  return res;
}

inline Ipomset glue(const Ipomset& p, const Ipomset& q) {
  return glue_info(p, q).ipomset;
}

inline Ipomset glue_all(const std::vector<Ipomset>& factors) {
  if (factors.empty()) return Ipomset::empty();
  Ipomset acc = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) acc = glue(acc, factors[k]);
  return acc;
}

struct CanonicalForm {
  Ipomset ipomset;
  std::unordered_map<std::string, std::string> renaming;  // old id -> new id
};

// Renames every event to "e<k>_<j>" where k is the index of the first
// maximal antichain containing it and j its event-order position inside
// that antichain, then lists events in (k, j) order. The event order is
// normalized to the transitive closure of its essential pairs (those
// between concurrent events); the rest is presentation noise that gluing
// does not preserve. Two ipomsets are isomorphic iff their canonical forms
// are structurally equal, and the induced bijection is the unique
// isomorphism.
inline CanonicalForm canonical_form(const Ipomset& p) {
  auto antichains = maximal_antichains(p);
  const int n = p.size();
  std::vector<std::pair<int, int>> key(n, {-1, -1});
  for (int k = 0; k < static_cast<int>(antichains.size()); ++k)
    for (std::size_t j = 0; j < antichains[k].size(); ++j)
      if (key[antichains[k][j]].first < 0)
        key[antichains[k][j]] = {k, static_cast<int>(j)};
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return key[a] < key[b]; });

  CanonicalForm cf;
  RawIpomset raw;
  std::vector<std::string> new_id(n);
  for (int pos = 0; pos < n; ++pos) {
    int i = order[pos];
    new_id[i] = "e" + std::to_string(key[i].first) + "_" +
                std::to_string(key[i].second);
    raw.events.push_back({new_id[i], p.event(i).label});
    cf.renaming[p.event(i).id] = new_id[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p.before(i, j)) raw.precedence.emplace_back(new_id[i], new_id[j]);
      if (p.concurrent(i, j) && p.ordered(i, j))
        raw.event_order.emplace_back(new_id[i], new_id[j]);
    }
  for (int i : p.sources_in_order()) raw.sources.push_back(new_id[i]);
  for (int i : p.targets_in_order()) raw.targets.push_back(new_id[i]);
  cf.ipomset = Ipomset::validate(raw);
  return cf;
}

inline bool isomorphic(const Ipomset& p, const Ipomset& q) {
  return canonical_form(p).ipomset == canonical_form(q).ipomset;
}

// The unique isomorphism between p and q when one exists.
inline std::optional<std::unordered_map<std::string, std::string>> iso(
    const Ipomset& p, const Ipomset& q) {
  CanonicalForm cp = canonical_form(p), cq = canonical_form(q);
  if (!(cp.ipomset == cq.ipomset)) return std::nullopt;
  std::unordered_map<std::string, std::string> inverse_q;
  for (const auto& [orig, canon] : cq.renaming) inverse_q[canon] = orig;
  std::unordered_map<std::string, std::string> bij;
  for (const auto& [orig, canon] : cp.renaming) bij[orig] = inverse_q[canon];
  return bij;
}

}  // namespace hda
