#include "carve3d/config_json.hpp"

#include <ostream>

namespace carve3d {

using nlohmann::json;

namespace {

std::string_view energy_name(EnergyKind kind) { return kind == EnergyKind::Axial ? "axial" : "full"; }

EnergyKind parse_energy(const std::string& name) {
  if (name == "axial") return EnergyKind::Axial;
  if (name == "full") return EnergyKind::Full;
  throw PreconditionError("unknown energy kind '" + name + "'");
}

std::string_view insertion_name(InsertionPolicy p) { return p == InsertionPolicy::Replicate ? "replicate" : "average"; }

InsertionPolicy parse_insertion(const std::string& name) {
  if (name == "replicate") return InsertionPolicy::Replicate;
  if (name == "average") return InsertionPolicy::Average;
  throw PreconditionError("unknown insertion policy '" + name + "'");
}

json axes_json(const std::vector<Axis>& axes) {
  json out = json::array();
  for (Axis a : axes) out.push_back(axis_name(a));
  return out;
}

}  // namespace

json to_json(const AugmentConfig& c) {
  return json{
      {"s_max", c.s_max},
      {"beam", {{"n", c.beam_width}, {"tie_tol", c.tie_tol ? json(*c.tie_tol) : json(nullptr)}}},
      {"anchors",
       {{"epsilon", c.anchors.epsilon},
        {"k", c.anchors.k},
        {"batch", c.anchors.batch},
        {"iters", c.anchors.iters},
        {"simulations", c.anchors.simulations},
        {"m", c.anchors.clusters_per_run}}},
      {"symmetry_threshold", c.symmetry_threshold},
      {"energy", energy_name(c.energy_kind)},
      {"retries", c.retries},
      {"insertion", c.insertion_policy ? json(insertion_name(*c.insertion_policy)) : json(nullptr)},
  };
}

AugmentConfig augment_config_from_json(const json& j) {
  AugmentConfig c;
  c.s_max = j.value("s_max", c.s_max);
  if (j.contains("beam")) {
    const json& b = j.at("beam");
    c.beam_width = b.value("n", c.beam_width);
    if (b.contains("tie_tol") && !b.at("tie_tol").is_null()) c.tie_tol = b.at("tie_tol").get<double>();
  }
  if (j.contains("anchors")) {
    const json& a = j.at("anchors");
    c.anchors.epsilon = a.value("epsilon", c.anchors.epsilon);
    c.anchors.k = a.value("k", c.anchors.k);
    c.anchors.batch = a.value("batch", c.anchors.batch);
    c.anchors.iters = a.value("iters", c.anchors.iters);
    c.anchors.simulations = a.value("simulations", c.anchors.simulations);
    c.anchors.clusters_per_run = a.value("m", c.anchors.clusters_per_run);
  }
  c.symmetry_threshold = j.value("symmetry_threshold", c.symmetry_threshold);
  if (j.contains("energy")) c.energy_kind = parse_energy(j.at("energy").get<std::string>());
  c.retries = j.value("retries", c.retries);
  if (j.contains("insertion") && !j.at("insertion").is_null())
    c.insertion_policy = parse_insertion(j.at("insertion").get<std::string>());
  c.validate();
  return c;
}

json to_json(const StepLog& s) {
  return json{
      {"axis", axis_name(s.axis)},
      {"direction", direction_name(s.direction)},
      {"anchor", s.anchor},
      {"fallback_anchor", s.fallback_anchor},
      {"seam_source", axis_name(s.seam_source)},
      {"mirrors", axes_json(s.mirrors)},
      {"seam_mean_cost", s.seam_mean_cost},
      {"threshold", s.threshold},
      {"accepted", s.accepted},
      {"retries", s.retries_used},
  };
}

json to_json(const WarpSpec& spec) {
  json out = json::object();
  for (Axis a : kAxes) {
    const AxisWarp& w = spec.axes[axis_index(a)];
    out[std::string(axis_name(a))] = {{"factors", w.factors}, {"mirrored", w.mirrored}, {"knots", w.knots()}};
  }
  return out;
}

void write_step_log_jsonl(const std::vector<StepLog>& steps, std::ostream& out) {
  for (const StepLog& s : steps) out << to_json(s).dump() << '\n';
}

}  // namespace carve3d
