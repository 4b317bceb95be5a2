#pragma once

#include <string>

#include "json.hpp"

#include "augtree/analysis.hpp"

namespace augtree {

using Json = nlohmann::json;

Json meta_json();

Json mat_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json ublocks_json(const UBlocks& u);
UBlocks ublocks_from_json(const Json& j);

// standalone (A, B, u) file for the rearrangeability front end
struct AbuInput {
  Mat A, B;
  UBlocks u;
};
AbuInput abu_from_text(const std::string& text);

Json snapshot_stats_json(const Snapshot& snap);
Json components_json(const Snapshot& snap, int level);
Json class_table_json(const Snapshot& snap, const ClassTable& table);
Json certificate_json(const RearrangingMatrix& cert);
Json rearrange_json(const RearrangeVerdict& verdict);
Json tree_iso_json(const TreeIsoPlan& plan);
Json dimension_json(const DimensionResult& dim);
Json disconnected_json(const DisconnectednessReport& rep);
Json degree_json(const DegreeProfile& prof);
Json near_isometry_json(const Snapshot& snap, const NearIsometryReport& rep, bool emit_sigma);
Json lipschitz_json(const LipschitzReport& rep);

}  // namespace augtree
