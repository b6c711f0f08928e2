#include "muxstat/json_io.hpp"

#include <string>

#include "muxstat/common.hpp"

namespace muxstat {

namespace {

double number_field(const OrderedJson& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw Error("parse", "expected numeric field \"" + key + "\"");
  }
  return j[key].get<double>();
}

}  // namespace

OrderedJson to_json(const DistributionSpec& spec) {
  validate(spec);
  OrderedJson params = OrderedJson::object();
  if (spec.k) params["k"] = *spec.k;
  if (spec.sigma) params["sigma"] = *spec.sigma;
  if (spec.mu) params["mu"] = *spec.mu;
  if (spec.nu) params["nu"] = *spec.nu;
  if (spec.lambda) params["lambda"] = *spec.lambda;
  OrderedJson j;
  j["family"] = family_tag(spec.family);
  j["params"] = std::move(params);
  if (spec.family == DistributionFamily::kExtremeValue &&
      spec.orientation == GumbelOrientation::kMax) {
    j["orientation"] = "max";
  }
  return j;
}

DistributionSpec spec_from_json(const OrderedJson& j) {
  if (!j.is_object()) throw Error("parse", "distribution must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw Error("parse", "distribution needs a \"family\" string");
  }
  DistributionSpec spec;
  spec.family = family_from_tag(j["family"].get<std::string>());
  if (!j.contains("params") || !j["params"].is_object()) {
    throw Error("parse", "distribution needs a \"params\" object");
  }
  for (const auto& [key, value] : j["params"].items()) {
    if (!value.is_number()) {
      throw Error("parse", "parameter \"" + key + "\" must be a number");
    }
    const double v = value.get<double>();
    if (key == "k") {
      spec.k = v;
    } else if (key == "sigma") {
      spec.sigma = v;
    } else if (key == "mu") {
      spec.mu = v;
    } else if (key == "nu") {
      spec.nu = v;
    } else if (key == "lambda") {
      spec.lambda = v;
    } else {
      throw Error("parse", "unknown parameter \"" + key + "\"");
    }
  }
  if (j.contains("orientation")) {
    if (spec.family != DistributionFamily::kExtremeValue) {
      throw Error("parse", "orientation only applies to extremevalue");
    }
    const std::string o = j["orientation"].is_string() ? j["orientation"].get<std::string>() : "";
    if (o == "min") {
      spec.orientation = GumbelOrientation::kMin;
    } else if (o == "max") {
      spec.orientation = GumbelOrientation::kMax;
    } else {
      throw Error("parse", "orientation must be \"min\" or \"max\"");
    }
  }
  validate(spec);
  return spec;
}

OrderedJson to_json(const FitResult& result) {
  const OrderedJson spec = to_json(result.spec);
  OrderedJson j;
  j["family"] = spec["family"];
  j["params"] = spec["params"];
  j["loglik"] = result.log_likelihood;
  j["bic"] = result.bic;
  j["n"] = result.n;
  j["converged"] = result.converged;
  return j;
}

OrderedJson to_json(const FitRanking& ranking) {
  OrderedJson j;
  j["label"] = ranking.label;
  j["entries"] = OrderedJson::array();
  for (const FitResult& r : ranking.entries) j["entries"].push_back(to_json(r));
  if (!ranking.skipped.empty()) {
    j["skipped"] = OrderedJson::array();
    for (const SkippedFit& s : ranking.skipped) {
      j["skipped"].push_back({{"family", family_tag(s.family)}, {"reason", s.reason}});
    }
  }
  return j;
}

OrderedJson to_json(const AudienceModel& model) {
  validate(model);
  OrderedJson j;
  j["shared_pid_per_channel"] = model.shared_pid_per_channel;
  j["groups"] = OrderedJson::array();
  for (const AudienceGroup& g : model.groups) {
    OrderedJson gj;
    gj["channel"] = g.channel_id;
    gj["lambda"] = g.lambda;
    gj["pid_dist"] = to_json(g.pid_dist);
    j["groups"].push_back(std::move(gj));
  }
  return j;
}

AudienceModel model_from_json(const OrderedJson& j) {
  if (!j.is_object()) throw Error("parse", "model must be a JSON object");
  AudienceModel model;
  if (j.contains("shared_pid_per_channel")) {
    if (!j["shared_pid_per_channel"].is_boolean()) {
      throw Error("parse", "shared_pid_per_channel must be a boolean");
    }
    model.shared_pid_per_channel = j["shared_pid_per_channel"].get<bool>();
  }
  if (!j.contains("groups") || !j["groups"].is_array()) {
    throw Error("parse", "model needs a \"groups\" array");
  }
  for (const OrderedJson& gj : j["groups"]) {
    if (!gj.is_object()) throw Error("parse", "each group must be a JSON object");
    AudienceGroup g;
    if (!gj.contains("channel") || !gj["channel"].is_string()) {
      throw Error("parse", "group needs a \"channel\" string");
    }
    g.channel_id = gj["channel"].get<std::string>();
    g.lambda = number_field(gj, "lambda");
    if (!gj.contains("pid_dist")) throw Error("parse", "group needs a \"pid_dist\" object");
    g.pid_dist = spec_from_json(gj["pid_dist"]);
    model.groups.push_back(std::move(g));
  }
  validate(model);
  return model;
}

OrderedJson to_json(const CapacityReport& report) {
  OrderedJson j;
  j["trials"] = report.trials;
  j["mean_kbps"] = report.mean_kbps;
  j["std_kbps"] = report.std_kbps;
  j["quantiles"] = OrderedJson::array();
  for (const auto& [p, kbps] : report.quantiles) {
    j["quantiles"].push_back(OrderedJson::array({p, kbps}));
  }
  j["seed"] = report.seed;
  j["truncated_fraction"] = report.truncated_fraction;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

CapacityReport report_from_json(const OrderedJson& j) {
  if (!j.is_object()) throw Error("parse", "report must be a JSON object");
  CapacityReport report;
  if (!j.contains("trials") || !j["trials"].is_number_unsigned()) {
    throw Error("parse", "report needs an unsigned \"trials\"");
  }
  report.trials = j["trials"].get<std::size_t>();
  report.mean_kbps = number_field(j, "mean_kbps");
  report.std_kbps = number_field(j, "std_kbps");
  if (!j.contains("quantiles") || !j["quantiles"].is_array()) {
    throw Error("parse", "report needs a \"quantiles\" array");
  }
  for (const OrderedJson& pair : j["quantiles"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error("parse", "each quantile must be a [p, kbps] pair");
    }
    report.quantiles.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    throw Error("parse", "report needs an unsigned \"seed\"");
  }
  report.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("truncated_fraction")) {
    report.truncated_fraction = number_field(j, "truncated_fraction");
  }
  if (j.contains("warnings")) {
    for (const OrderedJson& w : j["warnings"]) {
      report.warnings.push_back(w.get<std::string>());
    }
  }
  return report;
}

}  // namespace muxstat
