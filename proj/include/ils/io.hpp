#pragma once

#include <filesystem>

#include "ils/image.hpp"
#include "ils/smoother.hpp"

namespace ils {

/// Reads .png (8-bit gray/RGB, alpha dropped), .ppm (P6, maxval 255) or
/// .pfm (Pf/PF float32). 8-bit samples are scaled by 1/255; PFM values are
/// returned unscaled and may exceed 1.
MultiImage read_image(const std::filesystem::path& path);

/// Inverse of read_image. 8-bit formats store floor(clip01(v) * 255 + 0.5);
/// PFM stores little-endian float32, rows bottom to top. PPM requires RGB.
void write_image(const std::filesystem::path& path, const MultiImage& img);

/// CSV `iter,energy,rel_decrease`, one row per recorded energy, 12 significant digits.
void write_trace(const EnergyTrace& trace, const std::filesystem::path& path);

}  // namespace ils
