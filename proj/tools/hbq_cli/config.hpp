#pragma once

#include <filesystem>

#include <json.hpp>

#include "hbq/experiments.hpp"

namespace hbq::cli {

/// Overlays the keys present in j onto base.  Sections:
///   scenario, params{eta1,eta2,p,sign}, numerics{L,N,M,T,nu,dealiasing},
///   sweep{M_list,N_list,p_list,eta2_list,collision_etas,ladder,snapshot_times,blowup_cases},
///   blowup{threshold,guard,cubic_T}, ibq{amplitude}, collision{left_center,right_center},
///   output{sample_stride,profile_window}, jobs.
/// Unknown keys throw InvalidArgument.
ExperimentConfig apply_config(ExperimentConfig base, const nlohmann::json& j);

/// Full config; a "scenario" key is required and selects the preset that
/// the remaining keys are applied on top of.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace hbq::cli
