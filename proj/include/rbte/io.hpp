#pragma once

#include <filesystem>
#include <variant>

#include "rbte/image.hpp"

namespace rbte {

using AnyImage = std::variant<RgbImage, GrayImage>;

/// Reads PNG (8/16-bit gray, gray+alpha, RGB, RGBA, palette) or binary
/// PGM/PPM. Samples are divided by the format maximum; alpha is dropped.
/// Single-channel files yield GrayImage.
AnyImage load_image(const std::filesystem::path& path);

/// load_image followed by to_grayscale when the file is colour.
GrayImage load_gray(const std::filesystem::path& path);

/// 8-bit single-channel, true -> 255, false -> 0. Format chosen by extension
/// (.pgm writes binary PGM, anything else PNG).
void save_binary(const BinaryMap& map, const std::filesystem::path& path);

/// 8-bit single-channel, each value quantized to round(v * 255).
void save_gray(const GrayImage& img, const std::filesystem::path& path);

/// 8-bit RGB, mainly for fixtures.
void save_rgb(const RgbImage& img, const std::filesystem::path& path);

}  // namespace rbte
