#include "khl/linkdiag.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>

#include "khl/error.hpp"

namespace khl {

namespace {

struct Occurrence {
  std::size_t crossing;
  int slot;
};

std::map<int, std::vector<Occurrence>> occurrences(const std::vector<Crossing>& crossings) {
  std::map<int, std::vector<Occurrence>> where;
  for (std::size_t i = 0; i < crossings.size(); ++i)
    for (int s = 0; s < 4; ++s) where[crossings[i].arcs[s]].push_back({i, s});
  return where;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

LinkDiagram::LinkDiagram(std::vector<Crossing> crossings, int unknot_components)
    : crossings_(std::move(crossings)), unknots_(unknot_components) {
  if (unknots_ < 0) throw InvalidInput("negative unknot component count");
  auto where = occurrences(crossings_);
  std::vector<int> unmatched, overused;
  for (const auto& [label, occ] : where) {
    if (label <= 0) throw InvalidInput("arc label " + std::to_string(label) + " is not positive");
    if (occ.size() == 1) unmatched.push_back(label);
    if (occ.size() > 2) overused.push_back(label);
  }
  if (!unmatched.empty()) throw InvalidInput("labels " + join(unmatched) + " unmatched");
  if (!overused.empty())
    throw InvalidInput("labels " + join(overused) + " occur more than twice");

  // Two-colour occurrences as incoming/outgoing. Opposite pairs: slots 1/3 of a
  // crossing and the two ends of an arc. Slot 0 is incoming, slot 2 outgoing.
  const std::size_t n = crossings_.size();
  std::vector<int> colour(4 * n, -1);
  std::vector<std::vector<int>> partner(4 * n);
  auto link = [&](int a, int b) {
    partner[a].push_back(b);
    partner[b].push_back(a);
  };
  for (std::size_t i = 0; i < n; ++i) link(4 * i + 1, 4 * i + 3);
  for (const auto& [label, occ] : where)
    link(4 * occ[0].crossing + occ[0].slot, 4 * occ[1].crossing + occ[1].slot);

  auto propagate = [&](int seed, int value) {
    if (colour[seed] == value) return;
    if (colour[seed] != -1) throw InvalidInput("inconsistent orientation");
    std::queue<int> todo;
    colour[seed] = value;
    todo.push(seed);
    while (!todo.empty()) {
      int o = todo.front();
      todo.pop();
      for (int p : partner[o]) {
        if (colour[p] == -1) {
          colour[p] = 1 - colour[o];
          todo.push(p);
        } else if (colour[p] == colour[o]) {
          throw InvalidInput("inconsistent orientation at crossing " + std::to_string(p / 4 + 1));
        }
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    propagate(4 * i, 1);
    propagate(4 * i + 2, 0);
  }
  for (std::size_t o = 0; o < 4 * n; ++o)
    if (colour[o] == -1) propagate(o, 1);

  incoming_.resize(n);
  signs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int s = 0; s < 4; ++s) incoming_[i][s] = colour[4 * i + s] == 1;
    signs_[i] = incoming_[i][3] ? 1 : -1;
  }

  // Count closed strands by walking incoming occurrences.
  std::vector<bool> seen(4 * n, false);
  components_ = unknots_;
  for (std::size_t o = 0; o < 4 * n; ++o) {
    if (colour[o] != 1 || seen[o]) continue;
    ++components_;
    std::size_t cur = o;
    while (!seen[cur]) {
      seen[cur] = true;
      std::size_t exit = 4 * (cur / 4) + (cur % 4 + 2) % 4;
      const auto& occ = where[crossings_[exit / 4].arcs[exit % 4]];
      std::size_t a = 4 * occ[0].crossing + occ[0].slot;
      cur = a == exit ? 4 * occ[1].crossing + occ[1].slot : a;
    }
  }
}

int LinkDiagram::writhe() const {
  int w = 0;
  for (int s : signs_) w += s;
  return w;
}

int LinkDiagram::positive_count() const {
  return static_cast<int>(std::count(signs_.begin(), signs_.end(), 1));
}

int LinkDiagram::negative_count() const {
  return static_cast<int>(std::count(signs_.begin(), signs_.end(), -1));
}

LinkDiagram LinkDiagram::relabeled() const {
  auto where = occurrences(crossings_);
  std::map<int, int> fresh;
  int next = 1;
  for (std::size_t i = 0; i < crossings_.size(); ++i) {
    for (int s = 0; s < 4; ++s) {
      if (incoming_[i][s] || fresh.count(crossings_[i].arcs[s])) continue;
      std::size_t ci = i;
      int cs = s;
      while (!fresh.count(crossings_[ci].arcs[cs])) {
        int label = crossings_[ci].arcs[cs];
        fresh[label] = next++;
        const auto& occ = where[label];
        const Occurrence& head =
            (occ[0].crossing == ci && occ[0].slot == cs) ? occ[1] : occ[0];
        ci = head.crossing;
        cs = (head.slot + 2) % 4;
      }
    }
  }
  std::vector<Crossing> out = crossings_;
  for (auto& c : out)
    for (int& a : c.arcs) a = fresh.at(a);
  return LinkDiagram(std::move(out), unknots_);
}

LinkDiagram parse_pd(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto fail = [&](const std::string& why) { throw ParseError("bad PD code: " + why); };
  if (s.size() < 4 || s.compare(0, 3, "PD[") != 0 || s.back() != ']')
    fail("expected PD[...]");
  std::size_t i = 3;
  const std::size_t end = s.size() - 1;
  auto read_int = [&]() {
    std::size_t start = i;
    while (i < end && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected positive integer at offset " + std::to_string(start));
    if (i - start > 9) fail("integer too large");
    return std::stoi(s.substr(start, i - start));
  };
  auto expect = [&](char ch) {
    if (i >= end || s[i] != ch) fail(std::string("expected '") + ch + "' at offset " + std::to_string(i));
    ++i;
  };
  std::vector<Crossing> crossings;
  int unknots = 0;
  while (i < end) {
    char kind = s[i++];
    expect('(');
    if (kind == 'X') {
      Crossing c;
      for (int k = 0; k < 4; ++k) {
        if (k) expect(',');
        c.arcs[k] = read_int();
        if (c.arcs[k] == 0) fail("arc labels must be positive");
      }
      crossings.push_back(c);
    } else if (kind == 'U') {
      unknots += read_int();
    } else {
      fail(std::string("unknown token '") + kind + "'");
    }
    expect(')');
    if (i < end) expect(',');
  }
  return LinkDiagram(std::move(crossings), unknots);
}

std::string serialize(const LinkDiagram& d) {
  std::ostringstream out;
  out << "PD[";
  bool first = true;
  for (const auto& c : d.crossings()) {
    out << (first ? "" : ",") << "X(" << c.arcs[0] << ',' << c.arcs[1] << ',' << c.arcs[2]
        << ',' << c.arcs[3] << ')';
    first = false;
  }
  if (d.unknot_components() > 0) out << (first ? "" : ",") << "U(" << d.unknot_components() << ')';
  out << ']';
  return out.str();
}

}  // namespace khl
