#pragma once

#include <string>

#include "xsb/multiplier.hpp"

namespace xsb {

// Flat binary container, magic "XSBK1":
//   magic[5], kind u8 (bit 7 set when a time axis follows), d u32, M u32,
//   h numerator i64, h denominator i64, k u32,
//   [Mt u32, ht numerator i64, ht denominator i64]  (when bit 7 set)
// then little-endian f64 pairs (re, im) in row-major axis order.
// k = 1 stores a grid function (total values); k = 2 stores values over
// Gamma_2 sections (total values); k = 3 stores a dense pair table
// (total^2 values, xi3 forced).

void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

void write_dense_multiplier(const std::string& path, const MultiplierK& m);
MultiplierK read_dense_multiplier(const std::string& path);

}  // namespace xsb
