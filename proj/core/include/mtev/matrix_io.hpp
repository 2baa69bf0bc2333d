#pragma once

// Binary container for FarFieldMatrix, all fields little-endian:
//   char[8]  magic "MTEVFFM1"
//   u32      version (1)
//   u32      kind (0 = F, 1 = F0, 2 = modified)
//   u64      rows, cols
//   f64      k, eps, gamma, eta_re, eta_im, noise_level
//   u64      noise_seed
//   i32      n_polar, n_azimuth, n_max, reserved (0)
//   f64[2 * rows * cols]  row-major (re, im) pairs

#include <filesystem>
#include <iosfwd>

#include "mtev/far_field_operator.hpp"

namespace mtev {

void write_matrix(std::ostream& out, const FarFieldMatrix& m);
void write_matrix(const std::filesystem::path& path, const FarFieldMatrix& m);

/// Throws std::runtime_error on a malformed or truncated container.
FarFieldMatrix read_matrix(std::istream& in);
FarFieldMatrix read_matrix(const std::filesystem::path& path);

}  // namespace mtev
