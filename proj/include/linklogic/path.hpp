#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "linklogic/types.hpp"

namespace linklogic {

// A hop sequence: entities[j] -relations[j]-> entities[j+1]. Comparison is
// lexicographic over entities then relations, which gives every deterministic
// ordering in the pipeline its tie-break.
struct Path {
  std::vector<EntityId> entities;
  std::vector<RelationId> relations;

  std::size_t length() const { return relations.size(); }
  friend auto operator<=>(const Path&, const Path&) = default;
};

// Which candidate set produced a path: one-hop sets are anchored at the query
// head or tail (either edge direction); bridges connect head and tail through
// one intermediate (either orientation).
enum class PathRole : std::uint8_t { HeadOneHop, TailOneHop, BridgeTwoHop };

const char* to_string(PathRole role);

struct ScoredPath {
  Path path;
  PathRole role = PathRole::HeadOneHop;
  double score = 0.0;  // mean over hops of -log(1 - plausibility)
};

}  // namespace linklogic
