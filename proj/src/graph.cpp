#include "dlife/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "dlife/errors.hpp"

namespace dlife {

PairDurations cumulative_pair_durations(const std::vector<ContactEvent>& events, Time until) {
  PairDurations out;
  for (const auto& e : events) {
    if (e.start >= until) continue;
    const Time end = std::min(e.end, until);
    out[{e.a, e.b}] += to_seconds(end - e.start);
  }
  return out;
}

FamiliarGraph::FamiliarGraph(std::uint32_t node_count) : adj_(node_count) {}

void FamiliarGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) return;
  auto insert = [](std::vector<NodeId>& v, NodeId x) {
    const auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert(adj_.at(a), b);
  insert(adj_.at(b), a);
}

bool FamiliarGraph::has_edge(NodeId a, NodeId b) const {
  const auto& v = adj_.at(a);
  return std::binary_search(v.begin(), v.end(), b);
}

std::size_t FamiliarGraph::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& v : adj_) degree_sum += v.size();
  return degree_sum / 2;
}

FamiliarGraph build_familiar_graph(const PairDurations& durations, double threshold_seconds,
                                   std::uint32_t node_count) {
  FamiliarGraph g(node_count);
  for (const auto& [pair, secs] : durations) {
    if (secs > 0.0 && secs >= threshold_seconds) g.add_edge(pair.first, pair.second);
  }
  return g;
}

CommunityMap::CommunityMap(std::vector<std::vector<NodeId>> communities,
                           std::uint32_t node_count)
    : communities_(std::move(communities)), membership_(node_count) {
  for (auto& c : communities_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(communities_.begin(), communities_.end());
  for (std::size_t i = 0; i < communities_.size(); ++i) {
    for (const NodeId n : communities_[i]) membership_.at(n).push_back(i);
  }
}

const std::vector<std::size_t>& CommunityMap::memberships(NodeId n) const {
  static const std::vector<std::size_t> kNone;
  return n < membership_.size() ? membership_[n] : kNone;
}

bool CommunityMap::contains(std::size_t community, NodeId n) const {
  const auto& c = communities_.at(community);
  return std::binary_search(c.begin(), c.end(), n);
}

bool CommunityMap::share_community(NodeId x, NodeId y) const {
  const auto& mx = memberships(x);
  const auto& my = memberships(y);
  auto i = mx.begin();
  auto j = my.begin();
  while (i != mx.end() && j != my.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

namespace {

// Bron-Kerbosch with pivoting over sorted candidate sets.
void collect_maximal_cliques(const FamiliarGraph& g, std::vector<NodeId>& r,
                             std::vector<NodeId> p, std::vector<NodeId> x, std::size_t min_size,
                             std::vector<std::vector<NodeId>>& out) {
  if (p.empty()) {
    if (x.empty() && r.size() >= min_size) {
      auto clique = r;
      std::sort(clique.begin(), clique.end());
      out.push_back(std::move(clique));
    }
    return;
  }
  if (r.size() + p.size() < min_size) return;

  NodeId pivot = p.front();
  std::size_t best = 0;
  for (const auto* set : {&p, &x}) {
    for (const NodeId u : *set) {
      const auto& nu = g.neighbors(u);
      std::size_t hits = 0;
      for (const NodeId v : p) hits += std::binary_search(nu.begin(), nu.end(), v) ? 1 : 0;
      if (hits >= best) {
        best = hits;
        pivot = u;
      }
    }
  }
  const auto& pivot_nbrs = g.neighbors(pivot);
  std::vector<NodeId> candidates;
  std::set_difference(p.begin(), p.end(), pivot_nbrs.begin(), pivot_nbrs.end(),
                      std::back_inserter(candidates));
  for (const NodeId v : candidates) {
    const auto& nv = g.neighbors(v);
    std::vector<NodeId> p2;
    std::vector<NodeId> x2;
    std::set_intersection(p.begin(), p.end(), nv.begin(), nv.end(), std::back_inserter(p2));
    std::set_intersection(x.begin(), x.end(), nv.begin(), nv.end(), std::back_inserter(x2));
    r.push_back(v);
    collect_maximal_cliques(g, r, std::move(p2), std::move(x2), min_size, out);
    r.pop_back();
    p.erase(std::lower_bound(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

CommunityMap k_clique_communities(const FamiliarGraph& g, int k) {
  if (k < 3) throw ConfigError("k", "clique size must be >= 3");
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<std::vector<NodeId>> cliques;
  std::vector<NodeId> r;
  collect_maximal_cliques(g, r, all, {}, static_cast<std::size_t>(k), cliques);

  // Two maximal cliques hold adjacent k-cliques iff they overlap in >= k - 1
  // nodes.
  DisjointSets sets(cliques.size());
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      std::size_t shared = 0;
      auto a = cliques[i].begin();
      auto b = cliques[j].begin();
      while (a != cliques[i].end() && b != cliques[j].end()) {
        if (*a == *b) {
          ++shared;
          ++a;
          ++b;
        } else if (*a < *b) {
          ++a;
        } else {
          ++b;
        }
      }
      if (shared + 1 >= static_cast<std::size_t>(k)) sets.unite(i, j);
    }
  }
  std::map<std::size_t, std::set<NodeId>> merged;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    merged[sets.find(i)].insert(cliques[i].begin(), cliques[i].end());
  }
  std::vector<std::vector<NodeId>> communities;
  for (auto& [root, members] : merged) communities.emplace_back(members.begin(), members.end());
  return CommunityMap(std::move(communities), g.node_count());
}

double CentralityTable::local_in(NodeId n, std::size_t community) const {
  if (n >= local.size()) return 0.0;
  const auto it = local[n].find(community);
  return it == local[n].end() ? 0.0 : it->second;
}

CentralityTable cumulative_window_centrality(const std::vector<ContactEvent>& events, Time now,
                                             Time window, const CommunityMap& communities,
                                             std::uint32_t node_count) {
  if (window <= 0) throw ConfigError("centrality_window", "must be positive");
  CentralityTable table;
  table.window = window;
  table.global.assign(node_count, 0.0);
  table.local.assign(node_count, {});
  for (NodeId n = 0; n < node_count; ++n) {
    for (const std::size_t c : communities.memberships(n)) table.local[n][c] = 0.0;
  }
  const std::int64_t windows = now > 0 ? now / window : 0;
  table.elapsed_windows = static_cast<std::size_t>(windows);
  if (windows == 0) return table;
  const Time horizon = windows * window;

  // Distinct (node, peer, window) triples; a contact counts in every window
  // it overlaps.
  std::set<std::tuple<std::int64_t, NodeId, NodeId>> seen;
  for (const auto& e : events) {
    if (e.start >= horizon) continue;
    const std::int64_t first = e.start / window;
    const std::int64_t last = (std::min(e.end, horizon) - 1) / window;
    for (std::int64_t w = first; w <= last; ++w) {
      seen.emplace(w, e.a, e.b);
    }
  }
  std::vector<double> global_counts(node_count, 0.0);
  std::vector<std::map<std::size_t, double>> local_counts(node_count);
  for (const auto& [w, a, b] : seen) {
    global_counts[a] += 1.0;
    global_counts[b] += 1.0;
    for (const std::size_t c : communities.memberships(a)) {
      if (communities.contains(c, b)) {
        local_counts[a][c] += 1.0;
        local_counts[b][c] += 1.0;
      }
    }
  }
  const auto denom = static_cast<double>(windows);
  for (NodeId n = 0; n < node_count; ++n) {
    table.global[n] = global_counts[n] / denom;
    for (const auto& [c, count] : local_counts[n]) table.local[n][c] = count / denom;
  }
  return table;
}

}  // namespace dlife
