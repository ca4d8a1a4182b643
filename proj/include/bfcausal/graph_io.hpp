#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bfcausal/graph.hpp"

namespace bfcausal {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace detail

/// Canonical text form: a Nodes: line with comma-separated names, then one
/// line per edge, name-sorted, `A --> B` directed and `A --- B` undirected.
inline std::string emit_graph(const Graph& g) {
  std::ostringstream out;
  out << "Nodes: ";
  const auto& vars = g.variables();
  std::vector<int> byName(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) byName[i] = static_cast<int>(i);
  std::sort(byName.begin(), byName.end(),
            [&vars](int a, int b) { return vars[a].name < vars[b].name; });
  for (std::size_t i = 0; i < byName.size(); ++i) {
    if (i > 0) out << ",";
    out << vars[byName[i]].name;
  }
  out << "\n";

  struct Line {
    std::string from, to;
    bool directed;
  };
  std::vector<Line> lines;
  for (const Edge& e : g.edges()) {
    if (g.hasDirected(e.a, e.b))
      lines.push_back({vars[e.a].name, vars[e.b].name, true});
    else if (g.hasDirected(e.b, e.a))
      lines.push_back({vars[e.b].name, vars[e.a].name, true});
    else {
      std::string x = vars[e.a].name, y = vars[e.b].name;
      if (y < x) std::swap(x, y);
      lines.push_back({x, y, false});
    }
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    const auto ka = std::minmax(a.from, a.to);
    const auto kb = std::minmax(b.from, b.to);
    if (ka != kb) return ka < kb;
    return a.from < b.from;
  });
  for (const Line& l : lines) out << l.from << (l.directed ? " --> " : " --- ") << l.to << "\n";
  return out.str();
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Variable> vars;
  bool sawNodes = false;
  Graph g;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (!sawNodes) {
      if (line.rfind("Nodes:", 0) != 0)
        throw ParseError("line " + std::to_string(lineNo) + ": expected a Nodes: line first");
      for (const std::string& raw : detail::split(line.substr(6), ',')) {
        const std::string name = detail::trim(raw);
        if (name.empty()) throw ParseError("empty variable name in Nodes: line");
        vars.push_back(Variable{0, name, VarKind::Continuous, 0});
      }
      g = Graph(vars, GraphKind::Cpdag);
      sawNodes = true;
      continue;
    }
    std::istringstream ls(line);
    std::string from, op, to, extra;
    ls >> from >> op >> to;
    if (from.empty() || to.empty() || (ls >> extra))
      throw ParseError("line " + std::to_string(lineNo) + ": expected 'NAME1 --> NAME2' or 'NAME1 --- NAME2'");
    const int a = g.indexOf(from);
    const int b = g.indexOf(to);
    if (op == "-->")
      g.addDirected(a, b);
    else if (op == "---")
      g.addUndirected(a, b);
    else
      throw ParseError("line " + std::to_string(lineNo) + ": unknown edge mark '" + op + "'");
  }
  if (!sawNodes) throw ParseError("graph text has no Nodes: line");
  return g;
}

inline void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << emit_graph(g);
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

/// Knowledge file: numbered tier lines (`1 Region Day Month`) plus optional
/// `forbid A B` / `require A B` lines. Tiers load in ascending number order.
inline Knowledge parse_knowledge(const std::string& text, const std::vector<Variable>& vars) {
  auto idOf = [&vars](const std::string& name) {
    for (const auto& v : vars)
      if (v.name == name) return v.id;
    throw UnknownVariableError("knowledge references unknown variable '" + name + "'");
  };

  std::vector<std::pair<int, std::vector<int>>> tiers;
  Knowledge know;
  std::vector<std::pair<int, int>> forbids, requires_;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "forbid" || head == "require") {
      std::string a, b, extra;
      ls >> a >> b;
      if (a.empty() || b.empty() || (ls >> extra))
        throw ParseError("line " + std::to_string(lineNo) + ": expected '" + head + " A B'");
      (head == "forbid" ? forbids : requires_).push_back({idOf(a), idOf(b)});
      continue;
    }
    int tierNo = 0;
    try {
      std::size_t used = 0;
      tierNo = std::stoi(head, &used);
      if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineNo) + ": expected a tier number, 'forbid', or 'require'");
    }
    std::vector<int> members;
    std::string name;
    while (ls >> name) members.push_back(idOf(name));
    tiers.push_back({tierNo, std::move(members)});
  }

  std::stable_sort(tiers.begin(), tiers.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [no, members] : tiers) know.addTier(members);
  for (const auto& [a, b] : forbids) know.forbid(a, b);
  for (const auto& [a, b] : requires_) know.require(a, b);
  return know;
}

inline Knowledge read_knowledge_file(const std::string& path, const std::vector<Variable>& vars) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open knowledge file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_knowledge(buf.str(), vars);
}

}  // namespace bfcausal
