#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "hda/error.hpp"
#include "hda/ipomset.hpp"

namespace hda {

// Index subsets of a cell's event list are bitmasks over positions.
using IndexMask = std::uint32_t;

namespace detail {

inline int mask_popcount(IndexMask m) { return std::popcount(m); }

// Re-expresses `mask` (indices of the parent list, disjoint from `removed`)
// as indices into the list with `removed` deleted.
inline IndexMask repack_mask(IndexMask mask, IndexMask removed) {
  IndexMask out = 0;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1)
      out |= IndexMask{1} << (i - std::popcount(removed & ((IndexMask{1} << i) - 1)));
  return out;
}

// Inverse of repack: lifts indices of the reduced list back to parent
// indices, where `removed` was deleted from the parent.
inline IndexMask lift_mask(IndexMask mask, IndexMask removed, int parent_size) {
  IndexMask out = 0;
  int child = 0;
  for (int i = 0; i < parent_size; ++i) {
    if (removed >> i & 1) continue;
    if (mask >> child & 1) out |= IndexMask{1} << i;
    ++child;
  }
  return out;
}

inline std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> ix;
  for (int i = 0; i < 32; ++i)
    if (m >> i & 1) ix.push_back(i);
  return ix;
}

inline std::string mask_key(IndexMask m) {
  std::string out;
  for (int i : mask_indices(m)) {
    if (!out.empty()) out += ",";
    out += std::to_string(i);
  }
  return out;
}

inline IndexMask parse_mask_key(const std::string& key, int dim) {
  IndexMask m = 0;
  std::size_t pos = 0;
  int last = -1;
  while (pos < key.size()) {
    std::size_t next = key.find(',', pos);
    if (next == std::string::npos) next = key.size();
    std::string tok = key.substr(pos, next - pos);
    int v;
    try {
      v = std::stoi(tok);
    } catch (...) {
      throw Error(ErrorKind::BadSubset, "bad index '" + tok + "'");
    }
    if (v <= last)
      throw Error(ErrorKind::BadSubset, "indices must be sorted and distinct: " + key);
    if (v < 0 || v >= dim)
      throw Error(ErrorKind::BadSubset,
                  "index " + tok + " out of range for dimension " + std::to_string(dim));
    m |= IndexMask{1} << v;
    last = v;
    pos = next + 1;
  }
  return m;
}

}  // namespace detail

struct HdaCell {
  std::string id;
  std::vector<std::string> events;  // the signature's labels, in event order
  // face tables: nonempty index subset -> cell id (delta^0 / delta^1)
  std::map<IndexMask, std::string> faces0, faces1;

  int dim() const { return static_cast<int>(events.size()); }
};

// A finite precubical set with an initial cell and final cells, stored as an
// explicit face table. Immutable after validation.
class Hda {
 public:
  static Hda validate(std::vector<HdaCell> cells, std::string initial,
                      std::vector<std::string> final_cells) {
    Hda h;
    h.cells_ = std::move(cells);
    h.initial_ = std::move(initial);
    h.final_ = std::move(final_cells);
    for (int i = 0; i < static_cast<int>(h.cells_.size()); ++i) {
      const auto& c = h.cells_[i];
      if (c.id.empty()) throw Error(ErrorKind::BadFormat, "empty cell id");
      if (c.dim() > 20)
        throw Error(ErrorKind::BadFormat, "cell dimension above 20: " + c.id);
      if (!h.index_.emplace(c.id, i).second)
        throw Error(ErrorKind::BadFormat, "duplicate cell id: " + c.id);
    }
    if (h.cells_.empty() || !h.index_.count(h.initial_))
      throw Error(ErrorKind::NoInitial,
                  h.cells_.empty() ? "no cells" : "initial cell not found: " + h.initial_);
    for (const auto& f : h.final_)
      if (!h.index_.count(f))
        throw Error(ErrorKind::UnknownCellRef, "final cell not found: " + f);

    for (const auto& c : h.cells_) {
      const IndexMask full = (IndexMask{1} << c.dim()) - 1;
      for (IndexMask a = 1; a <= full && c.dim() > 0; ++a) {
        for (int nu = 0; nu <= 1; ++nu) {
          const auto& table = nu == 0 ? c.faces0 : c.faces1;
          auto it = table.find(a);
          if (it == table.end())
            throw Error(ErrorKind::MissingFace,
                        "cell " + c.id + " lacks delta^" + std::to_string(nu) +
                            " for subset {" + detail::mask_key(a) + "}");
          auto target = h.index_.find(it->second);
          if (target == h.index_.end())
            throw Error(ErrorKind::UnknownCellRef,
                        "face of " + c.id + " refers to unknown cell " + it->second);
          const auto& t = h.cells_[target->second];
          std::vector<std::string> expect;
          for (int i = 0; i < c.dim(); ++i)
            if (!(a >> i & 1)) expect.push_back(c.events[i]);
          if (t.events != expect)
            throw Error(ErrorKind::SignatureMismatch,
                        "delta^" + std::to_string(nu) + "_{" + detail::mask_key(a) +
                            "}(" + c.id + ") = " + t.id +
                            " has the wrong signature");
        }
        // stray table entries are rejected too
      }
      for (int nu = 0; nu <= 1; ++nu) {
        const auto& table = nu == 0 ? c.faces0 : c.faces1;
        for (const auto& [mask, tgt] : table) {
          if (mask == 0 || mask > full)
            throw Error(ErrorKind::BadSubset,
                        "cell " + c.id + " has a face entry for an invalid subset");
        }
      }
    }

    // cubical identities
    for (const auto& c : h.cells_) {
      const IndexMask full = (IndexMask{1} << c.dim()) - 1;
      for (IndexMask a = 1; a <= full && c.dim() > 0; ++a)
        for (IndexMask b = 1; b <= full; ++b) {
          if (a & b) continue;
          for (int nu = 0; nu <= 1; ++nu)
            for (int mu = 0; mu <= 1; ++mu) {
              // delta^nu_A then delta^mu_B, in both orders
              const std::string& xa = h.face_ref(c, a, nu);
              const std::string& xb = h.face_ref(c, b, mu);
              const std::string& way1 =
                  h.face_ref(h.cell(xa), detail::repack_mask(b, a), mu);
              const std::string& way2 =
                  h.face_ref(h.cell(xb), detail::repack_mask(a, b), nu);
              if (way1 != way2)
                throw Error(ErrorKind::FunctorialityViolation,
                            "faces of " + c.id + " do not commute on {" +
                                detail::mask_key(a) + "} / {" + detail::mask_key(b) + "}",
                            {c.id, detail::mask_key(a), detail::mask_key(b)});
              if (nu == mu) {
                const std::string& joined = h.face_ref(c, a | b, nu);
                if (way1 != joined)
                  throw Error(ErrorKind::FunctorialityViolation,
                              "union law fails at " + c.id + " on {" +
                                  detail::mask_key(a) + "} / {" + detail::mask_key(b) + "}",
                              {c.id, detail::mask_key(a), detail::mask_key(b)});
              }
            }
        }
    }

    // co-face index for up-steps: x -> cells y with delta^0_A(y) = x
    for (const auto& c : h.cells_)
      for (const auto& [mask, tgt] : c.faces0)
        h.up_steps_[tgt].emplace_back(c.id, mask);
    for (auto& [k, v] : h.up_steps_) std::sort(v.begin(), v.end());
    return h;
  }

  int size() const { return static_cast<int>(cells_.size()); }
  const std::vector<HdaCell>& cells() const { return cells_; }
  bool has_cell(const std::string& id) const { return index_.count(id) > 0; }
  const HdaCell& cell(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw Error(ErrorKind::UnknownCellRef, "unknown cell: " + id);
    return cells_[it->second];
  }
  const std::string& initial() const { return initial_; }
  const std::vector<std::string>& final_cells() const { return final_; }

  Conclist signature(const std::string& id) const {
    return Conclist{cell(id).events};
  }
  int dim(const std::string& id) const { return cell(id).dim(); }

  // delta^nu_A; the empty subset is the identity.
  const std::string& face(const std::string& id, IndexMask a, int nu) const {
    const HdaCell& c = cell(id);
    if (a == 0) return c.id;
    return face_ref(c, a, nu);
  }

  // Composite face delta_{A,B} = delta^0_A delta^1_B on disjoint subsets.
  const std::string& delta(const std::string& id, IndexMask a, IndexMask b) const {
    const std::string& mid = face(id, b, 1);
    return face(mid, detail::repack_mask(a, b), 0);
  }

  // Cells y admitting an up-step x -> y, i.e. delta^0_A(y) = x, as (y, A).
  const std::vector<std::pair<std::string, IndexMask>>& up_steps(
      const std::string& id) const {
    static const std::vector<std::pair<std::string, IndexMask>> none;
    auto it = up_steps_.find(id);
    return it == up_steps_.end() ? none : it->second;
  }

 private:
  const std::string& face_ref(const HdaCell& c, IndexMask a, int nu) const {
    const auto& table = nu == 0 ? c.faces0 : c.faces1;
    auto it = table.find(a);
    if (it == table.end())
      throw Error(ErrorKind::BadSubset,
                  "no face for subset {" + detail::mask_key(a) + "} of " + c.id);
    return it->second;
  }

  std::vector<HdaCell> cells_;
  std::unordered_map<std::string, int> index_;
  std::string initial_;
  std::vector<std::string> final_;
  std::unordered_map<std::string, std::vector<std::pair<std::string, IndexMask>>>
      up_steps_;
};

using HdaPtr = std::shared_ptr<const Hda>;

inline nlohmann::ordered_json hda_to_json(const Hda& h) {
  nlohmann::ordered_json j;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : h.cells()) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["events"] = c.events;
    nlohmann::ordered_json f0 = nlohmann::ordered_json::object();
    nlohmann::ordered_json f1 = nlohmann::ordered_json::object();
    for (const auto& [mask, tgt] : c.faces0) f0[detail::mask_key(mask)] = tgt;
    for (const auto& [mask, tgt] : c.faces1) f1[detail::mask_key(mask)] = tgt;
    jc["faces"] = {{"0", f0}, {"1", f1}};
    j["cells"].push_back(jc);
  }
  j["initial"] = h.initial();
  j["final"] = h.final_cells();
  return j;
}

inline Hda hda_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("cells"))
    throw Error(ErrorKind::BadFormat, "HDA JSON must have a cells array");
  std::vector<HdaCell> cells;
  for (const auto& jc : j.at("cells")) {
    HdaCell c;
    c.id = jc.at("id").get<std::string>();
    if (jc.contains("events"))
      for (const auto& e : jc.at("events"))
        c.events.push_back(e.get<std::string>());
    if (jc.contains("faces")) {
      const auto& f = jc.at("faces");
      for (int nu = 0; nu <= 1; ++nu) {
        const char* key = nu == 0 ? "0" : "1";
        if (!f.contains(key)) continue;
        for (const auto& [subset, tgt] : f.at(key).items()) {
          IndexMask m = detail::parse_mask_key(subset, c.dim());
          if (m == 0)
            throw Error(ErrorKind::BadSubset,
                        "empty subset key in faces of " + c.id);
          (nu == 0 ? c.faces0 : c.faces1)[m] = tgt.get<std::string>();
        }
      }
    }
    cells.push_back(std::move(c));
  }
  if (!j.contains("initial"))
    throw Error(ErrorKind::NoInitial, "missing initial cell");
  std::vector<std::string> fin;
  if (j.contains("final"))
    for (const auto& f : j.at("final")) fin.push_back(f.get<std::string>());
  return Hda::validate(std::move(cells), j.at("initial").get<std::string>(), fin);
}

// The standard cube over a conclist: one cell per pair (A, B) of disjoint
// position subsets (A not started, B terminated); ids are state strings over
// {0, e, 1} indexed by position, prefixed with "c".
struct StandardCube {
  Hda hda;
  std::string top;  // the identity cell, all positions executing
};

inline std::string cube_cell_id(int n, IndexMask a, IndexMask b) {
  std::string id = "c";
  for (int i = 0; i < n; ++i)
    id += (a >> i & 1) ? '0' : (b >> i & 1) ? '1' : 'e';
  return id;
}

inline StandardCube standard_cube(const Conclist& s) {
  const int n = static_cast<int>(s.size());
  std::vector<HdaCell> cells;
  for (IndexMask a = 0; a < (IndexMask{1} << n); ++a)
    for (IndexMask b = 0; b < (IndexMask{1} << n); ++b) {
      if (a & b) continue;
      HdaCell c;
      c.id = cube_cell_id(n, a, b);
      for (int i = 0; i < n; ++i)
        if (!((a | b) >> i & 1)) c.events.push_back(s.labels[i]);
      IndexMask active = ~(a | b) & ((IndexMask{1} << n) - 1);
      const int dim = detail::mask_popcount(active);
      for (IndexMask sub = 1; sub < (IndexMask{1} << dim); ++sub) {
        IndexMask abs = detail::lift_mask(sub, a | b, n);
        c.faces0[sub] = cube_cell_id(n, a | abs, b);
        c.faces1[sub] = cube_cell_id(n, a, b | abs);
      }
      cells.push_back(std::move(c));
    }
  std::sort(cells.begin(), cells.end(),
            [](const HdaCell& x, const HdaCell& y) { return x.id < y.id; });
  IndexMask full = (IndexMask{1} << n) - 1;
  Hda h = Hda::validate(std::move(cells), cube_cell_id(n, full, 0),
                        {cube_cell_id(n, 0, full)});
  return StandardCube{std::move(h), cube_cell_id(n, 0, 0)};
}

// A precubical (or HDA) map between two complexes.
struct HdaMap {
  HdaPtr source;
  HdaPtr target;
  std::unordered_map<std::string, std::string> assignment;

  const std::string& at(const std::string& id) const {
    auto it = assignment.find(id);
    if (it == assignment.end())
      throw Error(ErrorKind::InvalidMap, "map undefined on cell " + id);
    return it->second;
  }
};

struct MapCheck {
  bool ok;
  std::string violation;  // first violated equation, empty when ok
};

inline MapCheck validate_precubical_map(const HdaMap& m) {
  for (const auto& c : m.source->cells()) {
    auto it = m.assignment.find(c.id);
    if (it == m.assignment.end())
      return {false, "map undefined on cell " + c.id};
    if (!m.target->has_cell(it->second))
      return {false, "image of " + c.id + " is not a cell: " + it->second};
    if (m.target->cell(it->second).events != c.events)
      return {false, "signature not preserved at " + c.id};
    const IndexMask full = (IndexMask{1} << c.dim()) - 1;
    for (IndexMask a = 1; a <= full && c.dim() > 0; ++a)
      for (int nu = 0; nu <= 1; ++nu) {
        const std::string& lhs = m.at(m.source->face(c.id, a, nu));
        const std::string& rhs = m.target->face(it->second, a, nu);
        if (lhs != rhs)
          return {false, "f(delta^" + std::to_string(nu) + "_{" +
                             detail::mask_key(a) + "}(" + c.id + ")) != delta(f(" +
                             c.id + "))"};
      }
  }
  return {true, ""};
}

inline MapCheck validate_hda_map(const HdaMap& m) {
  MapCheck c = validate_precubical_map(m);
  if (!c.ok) return c;
  if (m.at(m.source->initial()) != m.target->initial())
    return {false, "initial cell not preserved"};
  return {true, ""};
}

// The Yoneda embedding of a cell: the unique precubical map from the
// standard cube over ev(x) sending the top cell to x.
struct YonedaEmbedding {
  HdaPtr cube;
  std::string top;
  HdaMap map;
};

inline YonedaEmbedding yoneda_map(const HdaPtr& h, const std::string& x) {
  const HdaCell& c = h->cell(x);
  StandardCube sc = standard_cube(Conclist{c.events});
  auto cube = std::make_shared<Hda>(std::move(sc.hda));
  HdaMap m;
  m.source = cube;
  m.target = h;
  const int n = c.dim();
  for (const auto& cc : cube->cells()) {
    IndexMask a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      char ch = cc.id[i + 1];
      if (ch == '0') a |= IndexMask{1} << i;
      if (ch == '1') b |= IndexMask{1} << i;
    }
    m.assignment[cc.id] = h->delta(x, a, b);
  }
  return YonedaEmbedding{cube, sc.top, std::move(m)};
}

// Least set containing the initial cell and closed under up-steps and
// down-steps (upper faces).
inline std::set<std::string> accessible_cells(const Hda& h) {
  std::set<std::string> acc;
  std::vector<std::string> queue{h.initial()};
  acc.insert(h.initial());
  while (!queue.empty()) {
    std::string x = queue.back();
    queue.pop_back();
    auto visit = [&](const std::string& y) {
      if (acc.insert(y).second) queue.push_back(y);
    };
    const HdaCell& c = h.cell(x);
    const IndexMask full = (IndexMask{1} << c.dim()) - 1;
    for (IndexMask b = 1; b <= full && c.dim() > 0; ++b)
      visit(h.face(x, b, 1));
    for (const auto& [y, a] : h.up_steps(x)) visit(y);
  }
  return acc;
}

}  // namespace hda
