#pragma once

#include <cctype>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "hda/error.hpp"
#include "hda/ipomset.hpp"

namespace hda {

// Ipomset literals:
//   ipomset  := discrete ("*" discrete)*
//   discrete := "[" event* "]"
//   event    := "."? LABEL "."?
// A leading dot marks membership in the step's source interface, a trailing
// dot membership in its target interface; events are listed in event order.
// "[]" denotes the empty discrete step.

namespace detail {

struct LiteralParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit LiteralParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    if (peek() != c)
      throw Error(ErrorKind::SyntaxError,
                  std::string("expected '") + c + "' at position " +
                      std::to_string(pos));
    ++pos;
  }
  static bool label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string label() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && label_char(text[pos])) ++pos;
    if (pos == start)
      throw Error(ErrorKind::SyntaxError,
                  "expected a label at position " + std::to_string(start));
    return text.substr(start, pos - start);
  }
};

}  // namespace detail

// One parsed discrete step before gluing.
struct ParsedStep {
  std::vector<std::string> labels;
  std::vector<int> sources, targets;
};

inline std::vector<ParsedStep> parse_ipomset_steps(const std::string& text) {
  detail::LiteralParser p(text);
  std::vector<ParsedStep> steps;
  while (true) {
    p.expect('[');
    ParsedStep step;
    while (p.peek() != ']') {
      // dots bind to their label with no intervening whitespace
      bool src = false, tgt = false;
      if (p.text[p.pos] == '.') {
        ++p.pos;
        src = true;
      }
      std::size_t start = p.pos;
      while (p.pos < p.text.size() && detail::LiteralParser::label_char(p.text[p.pos]))
        ++p.pos;
      if (p.pos == start)
        throw Error(ErrorKind::SyntaxError,
                    "expected a label at position " + std::to_string(start));
      std::string lbl = p.text.substr(start, p.pos - start);
      if (p.pos < p.text.size() && p.text[p.pos] == '.') {
        ++p.pos;
        tgt = true;
      }
      int ix = static_cast<int>(step.labels.size());
      step.labels.push_back(lbl);
      if (src) step.sources.push_back(ix);
      if (tgt) step.targets.push_back(ix);
    }
    p.expect(']');
    steps.push_back(std::move(step));
    if (p.at_end()) break;
    p.expect('*');
  }
  return steps;
}

inline Ipomset parse_ipomset(const std::string& text) {
  auto steps = parse_ipomset_steps(text);
  std::unordered_set<std::string> used;
  auto build = [&](const ParsedStep& s) {
    std::vector<IpomsetEvent> evs;
    for (const auto& lbl : s.labels) {
      std::string id = lbl;
      while (used.count(id)) id += "'";
      used.insert(id);
      evs.push_back({id, lbl});
    }
    return Ipomset::discrete(std::move(evs), s.sources, s.targets);
  };
  Ipomset acc = build(steps[0]);
  for (std::size_t k = 1; k < steps.size(); ++k)
    acc = glue(acc, build(steps[k]));
  return acc;
}

inline std::string render_step(const Ipomset& factor) {
  std::string out = "[";
  auto order = factor.event_order_sorted([&] {
    std::vector<int> ix(factor.size());
    for (int i = 0; i < factor.size(); ++i) ix[i] = i;
    return ix;
  }());
  bool first = true;
  for (int i : order) {
    if (!first) out += " ";
    first = false;
    if (factor.in_sources(i)) out += ".";
    out += factor.event(i).label;
    if (factor.in_targets(i)) out += ".";
  }
  return out + "]";
}

// Renders the minimal discrete decomposition literal.
inline std::string render_ipomset(const Ipomset& p) {
  auto factors = minimal_discrete_decomposition(p);
  std::string out;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k) out += " * ";
    out += render_step(factors[k]);
  }
  return out;
}

inline nlohmann::ordered_json ipomset_to_json(const Ipomset& p) {
  RawIpomset raw = p.to_raw();
  nlohmann::ordered_json j;
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : raw.events)
    j["events"].push_back({{"id", e.id}, {"label", e.label}});
  j["precedence"] = raw.precedence;
  j["eventOrder"] = raw.event_order;
  j["sources"] = raw.sources;
  j["targets"] = raw.targets;
  return j;
}

inline RawIpomset raw_ipomset_from_json(const nlohmann::json& j) {
  RawIpomset raw;
  if (!j.is_object() || !j.contains("events"))
    throw Error(ErrorKind::BadFormat, "ipomset JSON must have an events array");
  for (const auto& e : j.at("events"))
    raw.events.push_back(
        {e.at("id").get<std::string>(), e.at("label").get<std::string>()});
  auto pairs = [&](const char* key,
                   std::vector<std::pair<std::string, std::string>>& out) {
    if (!j.contains(key)) return;
    for (const auto& pr : j.at(key)) {
      if (!pr.is_array() || pr.size() != 2)
        throw Error(ErrorKind::BadFormat,
                    std::string(key) + " entries must be pairs");
      out.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
    }
  };
  pairs("precedence", raw.precedence);
  pairs("eventOrder", raw.event_order);
  if (j.contains("sources"))
    for (const auto& s : j.at("sources"))
      raw.sources.push_back(s.get<std::string>());
  if (j.contains("targets"))
    for (const auto& t : j.at("targets"))
      raw.targets.push_back(t.get<std::string>());
  return raw;
}

inline Ipomset ipomset_from_json(const nlohmann::json& j) {
  return Ipomset::validate(raw_ipomset_from_json(j));
}

}  // namespace hda
