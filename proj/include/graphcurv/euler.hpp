#pragma once

#include <string>
#include <vector>

#include "graphcurv/graph.hpp"

namespace graphcurv {

struct Traversal {
  std::string arc;
  bool forward;  // traversed from the arc's `from` vertex to its `to` vertex

  bool operator==(const Traversal&) const = default;
};

/// Closed walk traversing every arc exactly twice.
struct EulerCircuit {
  std::vector<Traversal> steps;
};

/// Hierholzer's algorithm on the graph with every arc doubled. Every vertex
/// of the doubled multigraph has even valence, so a closed circuit exists
/// whenever the graph is connected. The walk starts at the first arc's
/// `from` vertex and always takes the lowest-numbered unused edge copy.
inline EulerCircuit doubledEulerCircuit(const EmbeddedGraph& g) {
  if (!isConnected(g)) throw Error(ErrorCode::Disconnected, "graph is not connected");
  EulerCircuit circuit;
  const std::size_t arcCount = g.arcs().size();
  if (arcCount == 0) return circuit;

  const std::size_t n = g.vertices().size();
  std::vector<std::size_t> from(arcCount), to(arcCount);
  for (std::size_t a = 0; a < arcCount; ++a) {
    from[a] = g.vertexIndexOf(a, End::Start);
    to[a] = g.vertexIndexOf(a, End::Finish);
  }
  // Edge copy e = 2a + k. A loop appears once in its vertex's list per copy.
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t a = 0; a < arcCount; ++a)
    for (std::size_t k = 0; k < 2; ++k) {
      adjacency[from[a]].push_back(2 * a + k);
      if (to[a] != from[a]) adjacency[to[a]].push_back(2 * a + k);
    }

  struct Frame {
    std::size_t vertex;
    std::size_t edge;  // edge copy used to arrive; unused for the root
    bool forward;
  };
  std::vector<bool> used(2 * arcCount, false);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<Frame> stack{{from[0], 0, true}};
  std::vector<Frame> reversed;
  while (!stack.empty()) {
    const std::size_t v = stack.back().vertex;
    auto& list = adjacency[v];
    while (cursor[v] < list.size() && used[list[cursor[v]]]) ++cursor[v];
    if (cursor[v] == list.size()) {
      reversed.push_back(stack.back());
      stack.pop_back();
      continue;
    }
    const std::size_t e = list[cursor[v]];
    used[e] = true;
    const std::size_t a = e / 2;
    const bool forward = from[a] == v;
    stack.push_back({forward ? to[a] : from[a], e, forward});
  }
  // Drop the root frame; the rest, reversed, is the circuit.
  for (std::size_t i = reversed.size() - 1; i-- > 0;) {
    const auto& f = reversed[i];
    circuit.steps.push_back({g.arcs()[f.edge / 2].id, f.forward});
  }
  return circuit;
}

}  // namespace graphcurv
