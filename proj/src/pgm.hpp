#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "field.hpp"

namespace selseg {

/// Reads a P2/P5 PGM (8- or 16-bit, 16-bit samples big-endian) and scales
/// intensities to [0, 1]. Malformed input raises a format error naming the
/// byte offset.
Field2D load_pgm(const std::string& path);

/// Writes the field as binary P5, clamping to [0, 1] and quantising to
/// maxval (255 or 65535).
void write_pgm(const Field2D& f, const std::string& path, int maxval = 255);

/// Writes a 0/255 byte mask as binary P5.
void write_mask_pgm(const std::vector<std::uint8_t>& mask, int nx, int ny,
                    const std::string& path);

/// 255 where phi changes sign against any 4-neighbour, 0 elsewhere.
std::vector<std::uint8_t> zero_level_overlay(const Field2D& phi);

/// Bilinear resample to an arbitrary size.
Field2D resize_bilinear(const Field2D& f, int nx, int ny);

/// Centred crop.
Field2D crop_centered(const Field2D& f, int nx, int ny);

} // namespace selseg
