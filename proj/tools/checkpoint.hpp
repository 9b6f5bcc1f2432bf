#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slfm/flow.hpp"
#include "slfm/network.hpp"

namespace slfm::cli {

/// A trained field plus what is needed to reproduce and evaluate it.
/// Stored as <prefix>.slfm (parameters as a 1x1 latent container with
/// d = parameter count) and <prefix>.json (spec, config, seed, dataset).
struct Checkpoint {
    FieldSpec spec;
    std::vector<double> params;
    TrainConfig config;
    std::uint64_t seed = 0;
    std::vector<Token> centers;
    std::vector<double> spreads;
    std::vector<double> weights;
    std::size_t steps_run = 0;
    double initial_smoothed_loss = 0.0;
    double final_smoothed_loss = 0.0;
};

std::filesystem::path params_path(const std::filesystem::path& prefix);
std::filesystem::path sidecar_path(const std::filesystem::path& prefix);

void save_checkpoint(const std::filesystem::path& prefix, const Checkpoint& ckpt);
/// Throws Format on a missing/inconsistent sidecar or parameter blob.
Checkpoint load_checkpoint(const std::filesystem::path& prefix);

VelocityField field_from(const Checkpoint& ckpt);
SyntheticDataset dataset_from(const Checkpoint& ckpt);

}  // namespace slfm::cli
