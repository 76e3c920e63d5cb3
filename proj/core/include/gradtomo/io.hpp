#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gradtomo/types.hpp"

namespace gradtomo::io {

// Binary layouts, all little-endian:
//
//   SinogramFile    "SINO1" | u32 version (=1) | u32 n_angles | u32 n_s | f64 s_spacing |
//                   f64 angles[n_angles] | f32 payload[n_angles * n_s] (angle-major)
//   FloatImageFile  "IMGF1" | u32 n | f64 pixel_size | f32 payload[n * n] (row-major)
//
// Payloads are narrowed to 32-bit floats on write.

inline constexpr std::uint32_t kSinogramVersion = 1;

void write_sinogram(std::ostream& out, const Sinogram& sino);
Sinogram read_sinogram(std::istream& in);
void write_sinogram(const std::filesystem::path& path, const Sinogram& sino);
Sinogram read_sinogram(const std::filesystem::path& path);

void write_image(std::ostream& out, const ImageGrid& img);
ImageGrid read_image(std::istream& in);
void write_image(const std::filesystem::path& path, const ImageGrid& img);
ImageGrid read_image(const std::filesystem::path& path);

/// Edge maps travel as FloatImageFiles holding 0/1.
ImageGrid edge_map_to_image(const EdgeMap& edges, double pixel_size = 1.0);
EdgeMap edge_map_from_image(const ImageGrid& img);

/// One row per angle, comma-separated detector values. Angles are taken as evenly distributed
/// over [0, pi). Ragged or non-numeric rows raise FormatError naming the 1-based row.
Sinogram import_sinogram_csv(std::istream& in, double s_spacing);
Sinogram import_sinogram_csv(const std::filesystem::path& path, double s_spacing);

/// Display export: min/max-normalized 16-bit binary PGM plus a "<path>.range" sidecar holding
/// "min max". A constant image maps to mid-gray 32768. Lossy; never read back into compute paths.
void export_view(const ImageGrid& img, const std::filesystem::path& path);

/// Edge map as a 16-bit PGM with values 0 and 65535.
void export_view(const EdgeMap& edges, const std::filesystem::path& path);

/// Physical values recovered from an exported view and its sidecar (for inspection and tests).
ImageGrid read_view(const std::filesystem::path& path, double pixel_size = 1.0);

}  // namespace gradtomo::io
