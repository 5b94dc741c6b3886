#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "dlife/contact.hpp"

namespace dlife {

// Cumulative contact seconds per canonical pair (a < b).
using PairDurations = std::map<std::pair<NodeId, NodeId>, double>;

// Contact time per pair over [0, until), clipping contacts that straddle it.
PairDurations cumulative_pair_durations(const std::vector<ContactEvent>& events, Time until);

// Undirected graph of pairs whose cumulative contact reaches the familiarity
// threshold.
class FamiliarGraph {
 public:
  explicit FamiliarGraph(std::uint32_t node_count = 0);

  std::uint32_t node_count() const { return static_cast<std::uint32_t>(adj_.size()); }
  void add_edge(NodeId a, NodeId b);
  bool has_edge(NodeId a, NodeId b) const;
  const std::vector<NodeId>& neighbors(NodeId n) const { return adj_.at(n); }
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<NodeId>> adj_;  // sorted
};

FamiliarGraph build_familiar_graph(const PairDurations& durations, double threshold_seconds,
                                   std::uint32_t node_count);

// Overlapping communities. Each community is a sorted node list and the list
// of communities is sorted lexicographically.
class CommunityMap {
 public:
  CommunityMap() = default;
  CommunityMap(std::vector<std::vector<NodeId>> communities, std::uint32_t node_count);

  const std::vector<std::vector<NodeId>>& communities() const { return communities_; }
  // Indices of the communities `n` belongs to, ascending. Empty for nodes
  // outside every community and for ids past the map's node count.
  const std::vector<std::size_t>& memberships(NodeId n) const;
  bool contains(std::size_t community, NodeId n) const;
  // Any-of semantics: true when some community holds both nodes.
  bool share_community(NodeId x, NodeId y) const;

  friend bool operator==(const CommunityMap&, const CommunityMap&) = default;

 private:
  std::vector<std::vector<NodeId>> communities_;
  std::vector<std::vector<std::size_t>> membership_;
};

// k-clique percolation: k-cliques are adjacent when they share k - 1 nodes
// and a community is the vertex union of a connected set of adjacent
// cliques. Works on maximal cliques of size >= k, which percolate exactly
// like the k-cliques they contain. Requires k >= 3.
CommunityMap k_clique_communities(const FamiliarGraph& g, int k);

struct CentralityTable {
  Time window = 0;
  std::size_t elapsed_windows = 0;
  std::vector<double> global;                             // per node
  std::vector<std::map<std::size_t, double>> local;       // per node: community -> value

  double local_in(NodeId n, std::size_t community) const;
};

// Cumulative-window degree centrality over [0, now): for each complete
// window, count the distinct peers a node was in contact with; centrality is
// the average count over all complete windows. Local centrality counts only
// peers inside the given community.
CentralityTable cumulative_window_centrality(const std::vector<ContactEvent>& events, Time now,
                                             Time window, const CommunityMap& communities,
                                             std::uint32_t node_count);

}  // namespace dlife
