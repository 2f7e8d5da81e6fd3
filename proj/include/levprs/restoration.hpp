#pragma once

#include "levprs/core.hpp"
#include "levprs/pgm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levprs {

/// Piecewise-constant test picture with a ramp band, values in [0.1, 0.9].
GrayImage synthetic_image(Index rows, Index cols);

struct RestorationConfig {
  std::optional<std::string> image_path;  // synthetic image when unset
  Index rows = 64;
  Index cols = 64;
  std::uint64_t seed = 2024;
  int kernel_size = 5;
  double sigma = 0.5;  // 0 means no blur
  double lambda = 0.07;
  double epsilon = 0.01;
  double noise_variance = 0.008;
  int haar_levels = 1;
  double tol = 1e-12;  // on the normalized error
  int max_iter = 1000;
  int reference_iter = 5000;
  std::vector<std::string> methods{"PRS-lev", "PRS", "FISTA1", "FISTA2"};
  std::optional<std::string> output_dir;  // write images, traces and a plot script
};

struct RestorationRun {
  std::string method;
  bool defined = false;
  std::string reason;  // why the method is undefined
  int iterations = 0;
  double seconds = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  double rate = 1.0;                // theoretical contraction factor
  double distance_to_reference = 0.0;  // |x - x_ref| / |x_ref|
  SolveTrace trace;                 // dist field holds the absolute error
  Vector x;
};

struct RestorationReport {
  RegularityParams regularity;
  GrayImage clean;
  GrayImage observed;
  Vector reference;  // minimizer from a long leveraged run
  std::vector<RestorationRun> runs;

  const RestorationRun* find(const std::string& method) const;
};

/// minimize 1/2 |T x - b|^2 + lambda sum h^eps(W x) with T a Gaussian blur and
/// W an orthonormal Haar transform, b = T x_clean + Gaussian noise.
RestorationReport run_restoration_demo(const RestorationConfig& config);

}  // namespace levprs
