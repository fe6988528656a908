#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pidtf/factor_model.hpp"
#include "pidtf/sparse_tensor.hpp"

namespace pidtf {

/// One trained model on disk: factor matrices (row-major), the scaling used
/// at train time (absent when training ran unscaled), the hyperparameters
/// and seed that produced it. Stored as a single JSON document; doubles
/// round-trip exactly.
struct ModelArtifact {
  Dims dims;
  FactorSet factors;
  std::optional<ScalingParams> scaling;
  Hyperparams hyper;
  std::uint64_t seed = 0;
};

void save_model(const ModelArtifact& model, std::ostream& out);
void save_model(const ModelArtifact& model, const std::filesystem::path& path);

/// Throws InvalidArgument on a malformed or mismatched document.
ModelArtifact load_model(std::istream& in);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace pidtf
