#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace gsig {

/// splitmix64 mix step.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent sub-seed from a master seed and a stream label.
/// Deterministic: the same (master, stream, index) always yields the same
/// seed, and distinct labels yield decorrelated generators.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index = 0);

/// Standard-normal vector of length n, fully determined by the seed.
Eigen::VectorXd gaussian_vector(Eigen::Index n, std::uint64_t seed);

/// Standard-normal matrix, filled column by column.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed);

/// Uniform points in the unit square, one row per point.
Eigen::MatrixXd uniform_points(Eigen::Index n, Eigen::Index dim,
                               std::uint64_t seed);

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace gsig
