#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "mefit/data.hpp"

namespace mefit {

/// Counter-based deterministic random stream: value at position `index`
/// is the splitmix64 finalizer applied to seed + (index+1) * golden-ratio
/// increment.  Stateless, so any position can be computed directly and
/// the stream is identical on every platform.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);

/// Uniform deviate in the open interval (0, 1) from the stream above:
/// the top 53 bits of the counter value, offset by half a step.
double uniform_at(std::uint64_t seed, std::uint64_t index);

/// Standard-normal deviate at position `index`, via the Box-Muller
/// transform on uniforms 2*index and 2*index + 1.
double normal_at(std::uint64_t seed, std::uint64_t index);

/// A fully-crossed two-factor design with replication: m levels of X by
/// n levels of Y by r repetitions, one response value per row drawn as
/// beta(x, y) + noise_sd * z.
struct FactorialSpec {
  int x_levels = 2;
  int y_levels = 2;
  int repetitions = 1;
  Eigen::MatrixXd beta;  // x_levels rows, y_levels columns: cell means
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  Eigen::Index total_rows() const {
    return static_cast<Eigen::Index>(x_levels) * y_levels * repetitions;
  }
};

/// Generates the dataset for `spec`: columns X (factor, levels x1..xm),
/// Y (factor, levels y1..yn), repetitions (numeric 1..r) and Response.
/// Rows enumerate (X, Y, repetition) in odometer order with X varying
/// fastest.  Same seed, same bits, on every platform; noise_sd = 0 yields
/// the exact cell means.
Dataset generate(const FactorialSpec& spec);

}  // namespace mefit
