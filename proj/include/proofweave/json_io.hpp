#pragma once

#include <json.hpp>

#include "proofweave/corollaries.hpp"
#include "proofweave/graph.hpp"
#include "proofweave/mall.hpp"
#include "proofweave/mll.hpp"

namespace proofweave {

using nlohmann::json;

json graph_to_json(const LocallyColoredGraph& g);
GraphSpec graph_spec_from_json(const json& j);

// Directed graphs use the same format with ends[0] as source, ends[1] as target.
DirectedGraphView directed_from_json(const json& j);

json ps_to_json(const ProofStructure& ps);
RawPs raw_ps_from_json(const json& j);

json mallnet_to_json(const MallNet& net);
MallNet mallnet_from_json(const json& j, LocGen& gen);

json path_to_json(const Path& p);

}  // namespace proofweave
