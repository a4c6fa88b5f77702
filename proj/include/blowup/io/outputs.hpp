#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "blowup/decomposition/fit.hpp"
#include "blowup/decomposition/track.hpp"
#include "blowup/diagnostics/theta.hpp"
#include "blowup/tangent/profile.hpp"

namespace blowup::io {

// CSV and JSON renderings of module results, ready for atomic_write.

/// t, xi_1..xi_n, lambda, a, dlambda_dt, da_dt, ratio, ratio_normalized,
/// converged, valid, violates, violates_normalized (flags as 0/1).
std::string track_csv(const decomposition::ParameterTrack& track, int n);

/// Long format: t, tau, y, w.
std::string profile_csv(const tangent::SelfSimilarProfile& profile);

/// x_1..x_n, t, s, theta.
std::string theta_csv(const std::vector<diagnostics::ThetaSample>& samples, int n);

nlohmann::json to_json(const decomposition::DecompositionResult& fit);
nlohmann::json to_json(const diagnostics::ClassificationResult& result);

}  // namespace blowup::io
