#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowbal/scenario.hpp"

namespace flowbal {

/// Scenario text that could not be parsed; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_ + 1, msg); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& msg) const {
    throw ParseError(line_, static_cast<int>(column), msg);
  }

  /// Column of the next non-blank character.
  std::size_t mark() {
    skip_ws();
    return pos_ + 1;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing text '" + std::string(text_.substr(pos_)) + "'");
  }

  bool consume(std::string_view lit) {
    skip_ws();
    if (text_.substr(pos_, lit.size()) == lit) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view lit) {
    if (!consume(lit)) fail("expected '" + std::string(lit) + "'");
  }

  /// Next run of characters up to whitespace, '=' or end.
  std::string_view word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '=') {
      ++pos_;
    }
    if (start == pos_) fail("expected a value");
    return text_.substr(start, pos_ - start);
  }

  std::uint64_t unsigned_int() {
    skip_ws();
    const auto start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const auto d = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > (UINT64_MAX - d) / 10) {
        pos_ = start;
        fail("integer out of range");
      }
      v = v * 10 + d;
      ++pos_;
    }
    if (start == pos_) fail("expected an unsigned integer");
    return v;
  }

  /// 1-based node number, returned 0-based.
  NodeId node(std::size_t n) {
    skip_ws();
    const auto start = pos_;
    const auto v = unsigned_int();
    if (v < 1 || v > n) {
      pos_ = start;
      fail("node " + std::to_string(v) + " outside 1.." + std::to_string(n));
    }
    return static_cast<NodeId>(v - 1);
  }

  LinkKey link(std::size_t n) {
    const auto a = node(n);
    expect("->");
    const auto b = node(n);
    return {a, b};
  }

  Rational rational() {
    skip_ws();
    const auto start = pos_;
    const auto w = word();
    try {
      return Rational::parse(w);
    } catch (const std::exception& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  double probability() {
    skip_ws();
    const auto start = pos_;
    const std::string w(word());
    char* end = nullptr;
    const double q = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size()) {
      pos_ = start;
      fail("malformed probability '" + w + "'");
    }
    if (!(q >= 0.0 && q < 1.0)) {
      pos_ = start;
      fail("drop probability must lie in [0, 1)");
    }
    return q;
  }

  int line() const noexcept { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace detail

/// Parses the scenario file format produced by serialize():
///
///   flowbal-scenario 1
///   [graph]      nodes = N, then "edge A -> B" lines (flow from A to B)
///   [bounds]     "A -> B = L U" per edge; L, U integers, fractions or decimals
///   [channel]    kind = delay | drop | delay+drop; max_delay = T; drop = Q;
///                per-direction overrides "delay A -> B = T", "drop A -> B = Q",
///                and fixed delay sequences "schedule A -> B = d1 d2 ..."
///   [run]        algorithm = alg1 | alg2; seed; max_iterations; window;
///                allow_infeasible = true | false
///   [order]      optional, "V = A->B C->D ..." ranks node V's incident edges
///
/// Node numbers are 1-based. '#' starts a comment. Throws ParseError.
inline Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  enum class Section { none, graph, bounds, channel, run, order };
  Section section = Section::none;
  bool have_header = false;
  bool have_nodes = false;
  bool bounds_seen = false;
  std::map<EdgeId, std::pair<Rational, Rational>> bounds;
  int line_no = 0;
  int last_line = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    detail::LineCursor cur(raw, line_no);
    if (cur.at_end()) continue;
    last_line = line_no;

    if (!have_header) {
      cur.expect("flowbal-scenario");
      const auto col = cur.mark();
      const auto ver = cur.unsigned_int();
      if (ver != kScenarioFormatVersion) cur.fail_at(col, "unsupported format version " + std::to_string(ver));
      cur.expect_end();
      have_header = true;
      continue;
    }

    if (cur.consume("[")) {
      const auto col = cur.mark();
      const auto name = cur.word();
      std::string_view n = name;
      if (!n.empty() && n.back() == ']') n.remove_suffix(1);
      else cur.expect("]");
      if (n == "graph") section = Section::graph;
      else if (n == "bounds") section = Section::bounds;
      else if (n == "channel") section = Section::channel;
      else if (n == "run") section = Section::run;
      else if (n == "order") section = Section::order;
      else cur.fail_at(col, "unknown section [" + std::string(n) + "]");
      if (section != Section::graph && !have_nodes) cur.fail_at(col, "[graph] must come first");
      if (section == Section::bounds) bounds_seen = true;
      cur.expect_end();
      continue;
    }

    const std::size_t n = sc.graph.size();
    switch (section) {
      case Section::none:
        cur.fail("entry outside any section");
      case Section::graph: {
        if (cur.consume("nodes")) {
          if (have_nodes) cur.fail("node count given twice");
          cur.expect("=");
          const auto count = cur.unsigned_int();
          if (count < 2) cur.fail("need at least two nodes");
          if (count > 1'000'000) cur.fail("too many nodes");
          sc.graph = Digraph(static_cast<std::size_t>(count));
          have_nodes = true;
        } else if (cur.consume("edge")) {
          if (!have_nodes) cur.fail("'nodes = N' must precede edges");
          const auto col = cur.mark();
          const auto l = cur.link(n);
          try {
            sc.graph.add_edge(l.src, l.dst);
          } catch (const std::exception& e) {
            throw ParseError(line_no, static_cast<int>(col), e.what());
          }
        } else {
          cur.fail("expected 'nodes = N' or 'edge A -> B'");
        }
        cur.expect_end();
        break;
      }
      case Section::bounds: {
        const auto col = cur.mark();
        const auto l = cur.link(n);
        if (!sc.graph.has_edge(l.src, l.dst)) {
          throw ParseError(line_no, static_cast<int>(col), "bounds for unknown edge " + edge_label({l.src, l.dst}));
        }
        const auto e = sc.graph.find_edge(l.src, l.dst);
        if (bounds.count(e)) throw ParseError(line_no, static_cast<int>(col), "bounds given twice");
        cur.expect("=");
        const auto lo = cur.rational();
        const auto hi = cur.rational();
        cur.expect_end();
        if (!(Rational(0) < lo)) throw ParseError(line_no, static_cast<int>(col), "lower limit must be positive");
        if (hi < lo) throw ParseError(line_no, static_cast<int>(col), "upper limit below lower limit");
        bounds.emplace(e, std::make_pair(lo, hi));
        break;
      }
      case Section::channel: {
        auto& ch = sc.channel;
        if (cur.consume("kind")) {
          cur.expect("=");
          const auto col = cur.mark();
          const auto w = cur.word();
          if (w == "delay") ch.kind = ChannelKind::delay;
          else if (w == "drop") ch.kind = ChannelKind::drop;
          else if (w == "delay+drop") ch.kind = ChannelKind::delay_drop;
          else cur.fail_at(col, "unknown channel kind '" + std::string(w) + "'");
        } else if (cur.consume("max_delay")) {
          cur.expect("=");
          const auto v = cur.unsigned_int();
          if (v > 1'000'000) cur.fail("delay bound too large");
          ch.max_delay = static_cast<int>(v);
        } else if (cur.consume("schedule")) {
          const auto l = cur.link(n);
          cur.expect("=");
          std::vector<int> sched;
          while (!cur.at_end()) sched.push_back(static_cast<int>(cur.unsigned_int()));
          if (sched.empty()) cur.fail("empty delay schedule");
          ch.delay_schedule[l] = std::move(sched);
        } else if (cur.consume("delay")) {
          const auto l = cur.link(n);
          cur.expect("=");
          const auto v = cur.unsigned_int();
          if (v > 1'000'000) cur.fail("delay bound too large");
          ch.delay_bound[l] = static_cast<int>(v);
        } else if (cur.consume("drop")) {
          if (cur.consume("=")) {
            ch.drop_probability = cur.probability();
          } else {
            const auto l = cur.link(n);
            cur.expect("=");
            ch.drop_q[l] = cur.probability();
          }
        } else {
          cur.fail("unknown channel entry");
        }
        cur.expect_end();
        break;
      }
      case Section::run: {
        const auto key_col = cur.mark();
        const auto key = cur.word();
        cur.expect("=");
        const auto col = cur.mark();
        if (key == "algorithm") {
          const auto w = cur.word();
          if (w == "alg1") sc.algorithm = Algorithm::delay_tolerant;
          else if (w == "alg2") sc.algorithm = Algorithm::drop_resilient;
          else cur.fail_at(col, "algorithm must be alg1 or alg2");
        } else if (key == "seed") {
          sc.seed = cur.unsigned_int();
        } else if (key == "max_iterations") {
          const auto v = cur.unsigned_int();
          if (v > static_cast<std::uint64_t>(INT64_MAX)) cur.fail("max_iterations too large");
          sc.max_iterations = static_cast<std::int64_t>(v);
        } else if (key == "window") {
          const auto v = cur.unsigned_int();
          if (v > 1'000'000) cur.fail("window too large");
          sc.window = static_cast<int>(v);
        } else if (key == "allow_infeasible") {
          const auto w = cur.word();
          if (w == "true") sc.allow_infeasible = true;
          else if (w == "false") sc.allow_infeasible = false;
          else cur.fail_at(col, "expected true or false");
        } else {
          cur.fail_at(key_col, "unknown run key '" + std::string(key) + "'");
        }
        cur.expect_end();
        break;
      }
      case Section::order: {
        const auto v = cur.node(n);
        if (sc.edge_order.count(v)) cur.fail("order for " + node_label(v) + " given twice");
        cur.expect("=");
        std::vector<EdgeId> ids;
        while (!cur.at_end()) {
          const auto col = cur.mark();
          const auto l = cur.link(n);
          if (!sc.graph.has_edge(l.src, l.dst) || (l.src != v && l.dst != v)) {
            throw ParseError(line_no, static_cast<int>(col),
                             edge_label({l.src, l.dst}) + " is not an edge of " + node_label(v));
          }
          ids.push_back(sc.graph.find_edge(l.src, l.dst));
        }
        if (ids.size() != sc.graph.degree(v)) cur.fail("order must rank every incident edge of " + node_label(v));
        sc.edge_order[v] = std::move(ids);
        break;
      }
    }
  }

  if (!have_header) throw ParseError(1, 1, "missing 'flowbal-scenario <version>' header");
  if (!have_nodes) throw ParseError(last_line + 1, 1, "missing [graph] section");
  if (!bounds_seen) throw ParseError(last_line + 1, 1, "missing [bounds] section");
  std::vector<Rational> lower, upper;
  for (EdgeId e = 0; e < sc.graph.edge_count(); ++e) {
    auto it = bounds.find(e);
    if (it == bounds.end()) {
      throw ParseError(last_line + 1, 1, "no bounds for edge " + edge_label(sc.graph.edge(e)));
    }
    lower.push_back(it->second.first);
    upper.push_back(it->second.second);
  }
  sc.bounds = FlowBounds(sc.graph, std::move(lower), std::move(upper));
  for (const auto& [l, sched] : sc.channel.delay_schedule) {
    const int bound = sc.channel.delay_bound.count(l) ? sc.channel.delay_bound.at(l) : sc.channel.max_delay;
    for (int d : sched) {
      if (d > bound) throw ParseError(last_line + 1, 1, "scheduled delay exceeds the link's bound");
    }
  }
  auto require_adjacent = [&](LinkKey l) {
    if (!sc.graph.has_edge(l.src, l.dst) && !sc.graph.has_edge(l.dst, l.src)) {
      throw ParseError(last_line + 1, 1,
                       "channel override for non-adjacent pair " + node_label(l.src) + "," + node_label(l.dst));
    }
  };
  for (const auto& [l, v] : sc.channel.delay_bound) require_adjacent(l);
  for (const auto& [l, v] : sc.channel.drop_q) require_adjacent(l);
  for (const auto& [l, v] : sc.channel.delay_schedule) require_adjacent(l);
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(sc);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace flowbal
