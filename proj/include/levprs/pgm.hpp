#pragma once

#include "levprs/core.hpp"

#include <string>

namespace levprs {

/// Grayscale image, row-major, intensities in [0, 1].
struct GrayImage {
  Index rows = 0;
  Index cols = 0;
  Vector pixels;
};

/// Reads binary (P5) or ASCII (P2) PGM with maxval below 256.
GrayImage read_pgm(const std::string& path);
/// Writes binary P5, clamping to [0, 1].
void write_pgm(const GrayImage& image, const std::string& path);

}  // namespace levprs
