#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hda/error.hpp"
#include "hda/ipomset.hpp"

namespace hda {

// Event state in a morphism target: not yet started, running, terminated.
enum class EvState : std::uint8_t { Zero = 0, Exec = 1, One = 2 };

inline char to_char(EvState s) {
  switch (s) {
    case EvState::Zero: return '0';
    case EvState::Exec: return 'e';
    case EvState::One: return '1';
  }
  return '?';
}

inline std::string to_string(EvState s) {
  switch (s) {
    case EvState::Zero: return "0";
    case EvState::Exec: return "exec";
    case EvState::One: return "1";
  }
  return "?";
}

// The fixed relation constraining states along precedence: for q < q' the
// pair (eps(q), eps(q')) must be one of
// (1,1), (0,0), (exec,exec), (1,exec), (1,0), (exec,0).
inline bool ipom_state_pair_ok(EvState a, EvState b) {
  if (a == b) return true;
  if (a == EvState::One) return true;  // (1,exec), (1,0)
  return a == EvState::Exec && b == EvState::Zero;
}

// A morphism of the category of interval ipomsets: an injective event map f
// that reflects precedence and preserves the essential event order, plus a
// state function eps on the target whose exec-set is the image of f.
struct IpMorphism {
  Ipomset source;
  Ipomset target;
  std::vector<int> f;         // source index -> target index
  std::vector<EvState> eps;   // per target index
};

inline void check_ip_morphism(const IpMorphism& m) {
  const int ns = m.source.size(), nt = m.target.size();
  if (static_cast<int>(m.f.size()) != ns ||
      static_cast<int>(m.eps.size()) != nt)
    throw Error(ErrorKind::InvalidMorphism, "size mismatch");
  std::vector<int> preimage(nt, -1);
  for (int i = 0; i < ns; ++i) {
    int j = m.f[i];
    if (j < 0 || j >= nt)
      throw Error(ErrorKind::InvalidMorphism, "f out of range");
    if (preimage[j] >= 0)
      throw Error(ErrorKind::InvalidMorphism, "f is not injective");
    preimage[j] = i;
    if (m.source.event(i).label != m.target.event(j).label)
      throw Error(ErrorKind::InvalidMorphism,
                  "f does not preserve labels at " + m.source.event(i).id);
  }
  for (int j = 0; j < nt; ++j) {
    bool in_image = preimage[j] >= 0;
    if (in_image != (m.eps[j] == EvState::Exec))
      throw Error(ErrorKind::InvalidMorphism,
                  "exec-set of eps differs from the image of f");
  }
  for (int i = 0; i < ns; ++i)
    for (int k = 0; k < ns; ++k) {
      if (i == k) continue;
      if (m.target.before(m.f[i], m.f[k]) && !m.source.before(i, k))
        throw Error(ErrorKind::InvalidMorphism,
                    "f does not reflect precedence");
      if (m.source.concurrent(i, k) && m.source.ordered(i, k) &&
          !m.target.ordered(m.f[i], m.f[k]))
        throw Error(ErrorKind::InvalidMorphism,
                    "f does not preserve the essential event order");
    }
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < nt; ++k)
      if (m.target.before(j, k) && !ipom_state_pair_ok(m.eps[j], m.eps[k]))
        throw Error(ErrorKind::InvalidMorphism,
                    "eps violates the state-pair table on " +
                        m.target.event(j).id + " < " + m.target.event(k).id);
}

inline IpMorphism make_ip_morphism(Ipomset source, Ipomset target,
                                   std::vector<int> f,
                                   std::vector<EvState> eps) {
  IpMorphism m{std::move(source), std::move(target), std::move(f),
               std::move(eps)};
  check_ip_morphism(m);
  return m;
}

inline IpMorphism identity_ip(const Ipomset& p) {
  std::vector<int> f(p.size());
  for (int i = 0; i < p.size(); ++i) f[i] = i;
  return IpMorphism{p, p, std::move(f),
                    std::vector<EvState>(p.size(), EvState::Exec)};
}

// (g,zeta) ∘ (f,eps): the composed state is eps pulled back through g on the
// image of g and zeta elsewhere.
inline IpMorphism compose_ip(const IpMorphism& m1, const IpMorphism& m2) {
  if (!(m1.target == m2.source))
    throw Error(ErrorKind::Incompatible,
                "target of the first morphism differs from the source of the "
                "second");
  IpMorphism r;
  r.source = m1.source;
  r.target = m2.target;
  r.f.resize(m1.f.size());
  for (std::size_t i = 0; i < m1.f.size(); ++i) r.f[i] = m2.f[m1.f[i]];
  const int nt = r.target.size();
  std::vector<int> g_pre(nt, -1);
  for (std::size_t j = 0; j < m2.f.size(); ++j) g_pre[m2.f[j]] = static_cast<int>(j);
  r.eps.resize(nt);
  for (int u = 0; u < nt; ++u)
    r.eps[u] = g_pre[u] >= 0 ? m1.eps[g_pre[u]] : m2.eps[u];
  check_ip_morphism(r);
  return r;
}

// Initial inclusion P -> P*R: exec on the image of P, 0 on the fresh events.
inline IpMorphism initial_inclusion_ip(const Ipomset& p, const Ipomset& r) {
  GlueResult g = glue_info(p, r);
  IpMorphism m;
  m.source = p;
  m.target = g.ipomset;
  m.f = g.from_left;
  m.eps.assign(g.ipomset.size(), EvState::Zero);
  for (int i : g.from_left) m.eps[i] = EvState::Exec;
  check_ip_morphism(m);
  return m;
}

// Final inclusion R -> P*R: exec on the image of R, 1 on the rest.
inline IpMorphism final_inclusion_ip(const Ipomset& p, const Ipomset& r) {
  GlueResult g = glue_info(p, r);
  IpMorphism m;
  m.source = r;
  m.target = g.ipomset;
  m.f = g.from_right;
  m.eps.assign(g.ipomset.size(), EvState::One);
  for (int i : g.from_right) m.eps[i] = EvState::Exec;
  check_ip_morphism(m);
  return m;
}

}  // namespace hda
