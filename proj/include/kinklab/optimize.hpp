#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kinklab {

struct SimplexOptions {
  double initial_step = 0.1;
  // Stop when the simplex characteristic size drops below this.
  double size_tolerance = 1e-8;
  int max_iterations = 20000;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Derivative-free Nelder-Mead minimisation (GSL nmsimplex2).
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& f,
                               std::vector<double> start, const SimplexOptions& options = {});

}  // namespace kinklab
