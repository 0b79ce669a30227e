#include "hbq_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include "hbq/errors.hpp"

namespace hbq::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("config section '" + where + "' must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw InvalidArgument("unknown config key '" + where + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string case_name(BlowupCase c) { return c == BlowupCase::quadratic ? "quadratic" : "cubic"; }

BlowupCase parse_case(const std::string& s) {
  if (s == "quadratic") return BlowupCase::quadratic;
  if (s == "cubic") return BlowupCase::cubic;
  throw InvalidArgument("unknown blow-up case '" + s + "'");
}

}  // namespace

ExperimentConfig apply_config(ExperimentConfig cfg, const json& j) {
  try {
    reject_unknown(j, {"scenario", "params", "numerics", "sweep", "blowup", "ibq", "collision",
                       "output", "jobs"}, "");
    if (j.contains("scenario")) {
      const auto name = j.at("scenario").get<std::string>();
      const auto sc = parse_scenario(name);
      if (!sc) throw InvalidArgument("unknown scenario '" + name + "'");
      cfg.scenario = *sc;
    }
    if (j.contains("params")) {
      const json& p = j.at("params");
      reject_unknown(p, {"eta1", "eta2", "p", "sign"}, "params.");
      read(p, "eta1", cfg.params.eta1);
      read(p, "eta2", cfg.params.eta2);
      read(p, "p", cfg.params.p);
      read(p, "sign", cfg.params.sign);
    }
    if (j.contains("numerics")) {
      const json& n = j.at("numerics");
      reject_unknown(n, {"L", "N", "M", "T", "nu", "dealiasing"}, "numerics.");
      read(n, "L", cfg.L);
      read(n, "N", cfg.N);
      read(n, "M", cfg.M);
      read(n, "T", cfg.T);
      read(n, "nu", cfg.nu);
      if (n.contains("dealiasing")) {
        const auto d = n.at("dealiasing").get<std::string>();
        if (d == "none") cfg.dealiasing = Dealiasing::none;
        else if (d == "two_thirds") cfg.dealiasing = Dealiasing::two_thirds;
        else throw InvalidArgument("dealiasing must be 'none' or 'two_thirds'");
      }
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      reject_unknown(s, {"M_list", "N_list", "p_list", "eta2_list", "collision_etas", "ladder",
                         "snapshot_times", "blowup_cases"}, "sweep.");
      read(s, "M_list", cfg.M_list);
      read(s, "N_list", cfg.N_list);
      read(s, "p_list", cfg.p_list);
      read(s, "eta2_list", cfg.eta2_list);
      read(s, "collision_etas", cfg.collision_etas);
      read(s, "ladder", cfg.ladder);
      read(s, "snapshot_times", cfg.snapshot_times);
      if (s.contains("blowup_cases")) {
        cfg.blowup_cases.clear();
        for (const auto& c : s.at("blowup_cases")) cfg.blowup_cases.push_back(parse_case(c.get<std::string>()));
      }
    }
    if (j.contains("blowup")) {
      const json& b = j.at("blowup");
      reject_unknown(b, {"threshold", "guard", "cubic_T"}, "blowup.");
      read(b, "threshold", cfg.threshold);
      if (b.contains("guard"))
        cfg.guard = b.at("guard").is_null() ? std::numeric_limits<double>::infinity()
                                            : b.at("guard").get<double>();
      read(b, "cubic_T", cfg.cubic_T);
    }
    if (j.contains("ibq")) {
      reject_unknown(j.at("ibq"), {"amplitude"}, "ibq.");
      read(j.at("ibq"), "amplitude", cfg.amplitude);
    }
    if (j.contains("collision")) {
      const json& c = j.at("collision");
      reject_unknown(c, {"left_center", "right_center"}, "collision.");
      read(c, "left_center", cfg.left_center);
      read(c, "right_center", cfg.right_center);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown(o, {"sample_stride", "profile_window"}, "output.");
      read(o, "sample_stride", cfg.sample_stride);
      read(o, "profile_window", cfg.profile_window);
    }
    read(j, "jobs", cfg.jobs);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object() || !j.contains("scenario"))
    throw InvalidArgument("config must be an object with a 'scenario' key");
  const auto name = j.at("scenario").is_string() ? j.at("scenario").get<std::string>() : "";
  const auto sc = parse_scenario(name);
  if (!sc) throw InvalidArgument("unknown scenario '" + name + "'");
  return apply_config(default_config(*sc), j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json cases = json::array();
  for (BlowupCase c : cfg.blowup_cases) cases.push_back(case_name(c));
  // JSON has no infinity; an unbounded guard is written as null.
  const json guard = std::isfinite(cfg.guard) ? json(cfg.guard) : json(nullptr);
  return {
      {"scenario", std::string(to_string(cfg.scenario))},
      {"params", {{"eta1", cfg.params.eta1}, {"eta2", cfg.params.eta2}, {"p", cfg.params.p},
                  {"sign", cfg.params.sign}}},
      {"numerics", {{"L", cfg.L}, {"N", cfg.N}, {"M", cfg.M}, {"T", cfg.T}, {"nu", cfg.nu},
                    {"dealiasing", cfg.dealiasing == Dealiasing::none ? "none" : "two_thirds"}}},
      {"sweep", {{"M_list", cfg.M_list}, {"N_list", cfg.N_list}, {"p_list", cfg.p_list},
                 {"eta2_list", cfg.eta2_list}, {"collision_etas", cfg.collision_etas},
                 {"ladder", cfg.ladder}, {"snapshot_times", cfg.snapshot_times},
                 {"blowup_cases", cases}}},
      {"blowup", {{"threshold", cfg.threshold}, {"guard", guard}, {"cubic_T", cfg.cubic_T}}},
      {"ibq", {{"amplitude", cfg.amplitude}}},
      {"collision", {{"left_center", cfg.left_center}, {"right_center", cfg.right_center}}},
      {"output", {{"sample_stride", cfg.sample_stride}, {"profile_window", cfg.profile_window}}},
      {"jobs", cfg.jobs},
  };
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed config " + path.string() + ": " + e.what());
  }
}

}  // namespace hbq::cli
