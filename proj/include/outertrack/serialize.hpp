#ifndef OUTERTRACK_SERIALIZE_HPP
#define OUTERTRACK_SERIALIZE_HPP

#include "outertrack/bound.hpp"
#include "outertrack/certificates.hpp"
#include "outertrack/game.hpp"
#include "outertrack/measure.hpp"
#include "outertrack/morphism.hpp"

#include <json.hpp>

namespace outertrack {

using Json = nlohmann::ordered_json;

Json graph_to_json(const MarkedGraph& g);
MarkedGraph graph_from_json(const Json& j);

Json train_track_to_json(const MarkedGraph& g, const TrainTrack& tt);
TrainTrack train_track_from_json(const MarkedGraph& g, const Json& j);

Json morphism_to_json(const Morphism& f);
Morphism morphism_from_json(std::shared_ptr<const MarkedGraph> source,
                            std::shared_ptr<const MarkedGraph> target, const Json& j);

Json matrix_to_json(const ExactMatrix& m);
ExactMatrix matrix_from_json(const Json& j);
std::string matrix_to_csv(const ExactMatrix& m);

Json cert_to_json(const FoldingCert& c);
Json cert_to_json(const UnfoldingCert& c);

Json run_to_json(const SequenceRun& run, bool include_cumulative = true);
Json game_report_to_json(const GameReport& report);
Json decomposition_to_json(const DecompositionReport& rep, const std::vector<std::string>& labels);
Json audit_to_json(const AuditReport& rep, const MarkedGraph& g);
Json edge_order_to_json(const EdgeOrder& order, const std::vector<std::string>& labels);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace outertrack

#endif
