#ifndef SUBJFAIR_JSON_IO_H_
#define SUBJFAIR_JSON_IO_H_

#include <span>

#include <json.hpp>

#include "subjfair/hypothesis.h"
#include "subjfair/metrics.h"
#include "subjfair/solver.h"

namespace subjfair {

using Json = nlohmann::ordered_json;

// {"type": "linear", "weights": [...], "bias": b} or
// {"type": "tabular", "predictions": [...]}.
Json HypothesisToJson(const Hypothesis& h);
Hypothesis HypothesisFromJson(const Json& j);

// {"components": [{"weight": w, "hypothesis": {...}}, ...]}
Json ClassifierToJson(const RandomizedClassifier& d);
RandomizedClassifier ClassifierFromJson(const Json& j);

Json CertificateToJson(const Certificate& c);
// The round log is not serialised.
Json SolveReportToJson(const SolveReport& report, const SolverConfig& config);
Json FairnessLossToJson(const FairnessLossReport& report);
Json FairnessBoundToJson(const FairnessBound& bound);
Json ParetoRowsToJson(std::span<const ParetoRow> rows);

}  // namespace subjfair

#endif  // SUBJFAIR_JSON_IO_H_
