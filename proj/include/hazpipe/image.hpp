// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hazpipe {

/// A frame flowing through the pipeline. Pixels are interleaved RGB 8-bit,
/// row-major; the buffer may be empty when a detector only needs the index
/// and source path (scripted / external detectors load lazily).
struct Frame {
    std::int64_t index = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
    std::string source_path;

    bool has_pixels() const { return !pixels.empty(); }

    std::uint8_t* rgb(int x, int y) {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* rgb(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

/// Integer pixel rectangle, half-open: x in [x0, x1), y in [y0, y1).
struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }
};

/// Pixels whose centers (x+0.5, y+0.5) fall inside the box, clamped to the image.
PixelRect rasterize_box(const BBox& box, int image_width, int image_height);

/// Loads PNG (8-bit gray/gray-alpha/RGB/RGBA, non-interlaced) or PPM/PGM by
/// extension sniffing the magic bytes. Throws IoFailure.
Frame load_image(const std::filesystem::path& path);

void save_png_rgb(const std::filesystem::path& path, int width, int height,
                  const std::vector<std::uint8_t>& rgb);

void save_png_gray(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& gray);

/// Mask PNG convention: 8-bit grayscale, 0 = background, 255 = foreground.
void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask load_mask_png(const std::filesystem::path& path);

void save_ppm(const std::filesystem::path& path, const Frame& frame);

Frame crop_frame(const Frame& frame, const PixelRect& rect);

}  // namespace hazpipe
