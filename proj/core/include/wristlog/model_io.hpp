#pragma once

#include <filesystem>

#include "wristlog/network.hpp"

namespace wristlog {

/// Serialize the model (topology, codebook, feature kind, normalizer and
/// full-precision weights) to the XML schema documented in the README.
/// Weights are written with 17 significant digits so load_model rebuilds a
/// bit-identical model.
void save_model(const NetworkModel& model, const std::filesystem::path& path);

/// Inverse of save_model; throws on any schema violation.
NetworkModel load_model(const std::filesystem::path& path);

}  // namespace wristlog
