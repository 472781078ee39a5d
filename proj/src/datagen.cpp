#include "mefit/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mefit/error.hpp"

namespace mefit {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  // Top 53 bits, offset by half a step: values lie strictly inside (0,1),
  // so logarithms below are always finite.
  const double scale = 0x1.0p-53;
  return (static_cast<double>(splitmix64_at(seed, index) >> 11) + 0.5) * scale;
}

double normal_at(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform_at(seed, 2 * index);
  const double u2 = uniform_at(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Dataset generate(const FactorialSpec& spec) {
  if (spec.x_levels < 2 || spec.y_levels < 2) {
    throw Error("generate: factors need at least two levels");
  }
  if (spec.repetitions < 1) {
    throw Error("generate: repetitions must be >= 1");
  }
  if (spec.beta.rows() != spec.x_levels || spec.beta.cols() != spec.y_levels) {
    throw Error("generate: beta must be x_levels x y_levels");
  }
  if (!(spec.noise_sd >= 0.0)) {
    throw Error("generate: noise_sd must be >= 0");
  }

  const int m = spec.x_levels;
  const int n = spec.y_levels;
  const Eigen::Index rows = spec.total_rows();

  std::vector<std::string> x_names(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) x_names[i] = "x" + std::to_string(i + 1);
  std::vector<std::string> y_names(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) y_names[j] = "y" + std::to_string(j + 1);

  std::vector<int> x_codes(static_cast<std::size_t>(rows));
  std::vector<int> y_codes(static_cast<std::size_t>(rows));
  Eigen::VectorXd reps(rows);
  Eigen::VectorXd response(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const int x = static_cast<int>(i % m);
    const int y = static_cast<int>((i / m) % n);
    x_codes[static_cast<std::size_t>(i)] = x;
    y_codes[static_cast<std::size_t>(i)] = y;
    reps[i] = static_cast<double>(i / (m * n) + 1);
    double value = spec.beta(x, y);
    if (spec.noise_sd > 0.0) {
      value += spec.noise_sd *
               normal_at(spec.seed, static_cast<std::uint64_t>(i));
    }
    response[i] = value;
  }

  Dataset ds;
  ds.add_factor("X", x_names, x_codes);
  ds.add_factor("Y", y_names, y_codes);
  ds.add_numeric("repetitions", std::move(reps));
  ds.add_numeric("Response", std::move(response));
  return ds;
}

}  // namespace mefit
