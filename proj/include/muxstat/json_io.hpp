#pragma once

#include "json.hpp"
#include "muxstat/capacity.hpp"
#include "muxstat/distributions.hpp"
#include "muxstat/fitting.hpp"

namespace muxstat {

using OrderedJson = nlohmann::ordered_json;

// {"family": "<tag>", "params": {...}} with exactly the family's
// parameters, keyed k/sigma/mu/nu/lambda in that order. An "orientation"
// field appears only for a max-oriented extreme value spec.
OrderedJson to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const OrderedJson& j);

OrderedJson to_json(const FitResult& result);
OrderedJson to_json(const FitRanking& ranking);

OrderedJson to_json(const AudienceModel& model);
AudienceModel model_from_json(const OrderedJson& j);

OrderedJson to_json(const CapacityReport& report);
CapacityReport report_from_json(const OrderedJson& j);

}  // namespace muxstat
