#include "dlife/dumps.hpp"

#include <charconv>
#include <ostream>
#include <string>

#include <json.hpp>

namespace dlife {
namespace {

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_ledger_weights_csv(std::ostream& out, const std::vector<SocialLedger>& ledgers) {
  out << "node,peer,sample,ad,weight\n";
  for (const auto& l : ledgers) {
    for (const auto& [peer, stats] : l.peers()) {
      for (int s = 0; s < static_cast<int>(stats.size()); ++s) {
        out << l.owner() << ',' << peer << ',' << s << ',' << num(stats[s].ad) << ','
            << num(l.tecd_weight(peer, s)) << '\n';
      }
    }
  }
}

void write_ledger_importance_csv(std::ostream& out, const std::vector<SocialLedger>& ledgers) {
  out << "node,sample,importance,log_importance\n";
  for (const auto& l : ledgers) {
    for (int s = 0; s < l.config().samples_per_day; ++s) {
      out << l.owner() << ',' << s << ',' << num(l.importance(s)) << ','
          << num(l.log_importance(s)) << '\n';
    }
  }
}

void write_communities_json(std::ostream& out, const CommunityMap& communities) {
  out << nlohmann::json(communities.communities()).dump() << '\n';
}

void write_centrality_csv(std::ostream& out, const CentralityTable& table,
                          const CommunityMap& communities) {
  const std::size_t count = communities.communities().size();
  out << "node,global";
  for (std::size_t c = 0; c < count; ++c) out << ",local:" << c;
  out << '\n';
  for (NodeId n = 0; n < table.global.size(); ++n) {
    out << n << ',' << num(table.global[n]);
    for (std::size_t c = 0; c < count; ++c) {
      out << ',';
      if (communities.contains(c, n)) out << num(table.local_in(n, c));
    }
    out << '\n';
  }
}

}  // namespace dlife
