/**
 * @file models.hpp
 * @brief Ready-made perturbed systems used by the experiments.
 */
#pragma once

#include <array>
#include <charconv>
#include <string>
#include <vector>

#include "incluso/expr.hpp"
#include "incluso/linalg.hpp"
#include "incluso/system.hpp"

namespace incluso::models {

/// x1' = x2 + y1, x2' = -x1 + y2 with |y_i| ≤ eps_i.
[[nodiscard]] inline PerturbedSystem harmonic_oscillator(double eps1, double eps2) {
  return PerturbedSystem::additive({Expr::x(1), -Expr::x(0)}, IVector{symmetric(eps1), symmetric(eps2)});
}

/// x' = -(y + z), y' = x + 0.2 y, z' = 0.2 + z (x - a), perturbed additively by [-eps, eps]³.
/// `a` is read back as the decimal it prints as, so a = 5.7 means the real number 5.7.
[[nodiscard]] inline PerturbedSystem rossler(double a, double eps) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a);
  const std::string as(buf.data(), res.ptr);
  const std::vector<std::string> f{"-(x2 + x3)", "x1 + 0.2*x2", "0.2 + x3*(x1 - (" + as + "))"};
  return PerturbedSystem::parse_additive(f, IVector{symmetric(eps), symmetric(eps), symmetric(eps)});
}

}  // namespace incluso::models
