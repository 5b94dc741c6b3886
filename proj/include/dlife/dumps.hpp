#pragma once

#include <iosfwd>
#include <vector>

#include "dlife/graph.hpp"
#include "dlife/ledger.hpp"

namespace dlife {

// Debug dumps of end-of-run social state.

// `node,peer,sample,ad,weight`, one row per recorded peer and sample.
void write_ledger_weights_csv(std::ostream& out, const std::vector<SocialLedger>& ledgers);

// `node,sample,importance,log_importance`. Importance can exceed the double
// range on long traces; the log column stays finite.
void write_ledger_importance_csv(std::ostream& out, const std::vector<SocialLedger>& ledgers);

// JSON array of communities, each a sorted array of node ids.
void write_communities_json(std::ostream& out, const CommunityMap& communities);

// `node,global,local:0,local:1,...`; the local cell is empty when the node
// is not in that community.
void write_centrality_csv(std::ostream& out, const CentralityTable& table,
                          const CommunityMap& communities);

}  // namespace dlife
