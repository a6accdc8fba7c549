// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/image.hpp"

#include "hazpipe/errors.hpp"

#include <zlib.h>

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

namespace hazpipe {

PixelRect rasterize_box(const BBox& box, int image_width, int image_height) {
    PixelRect r;
    r.x0 = std::max(0, static_cast<int>(std::ceil(box.x_min - 0.5)));
    r.y0 = std::max(0, static_cast<int>(std::ceil(box.y_min - 0.5)));
    r.x1 = std::min(image_width, static_cast<int>(std::floor(box.x_max - 0.5)) + 1);
    r.y1 = std::min(image_height, static_cast<int>(std::floor(box.y_max - 0.5)) + 1);
    if (r.x1 < r.x0) r.x1 = r.x0;
    if (r.y1 < r.y0) r.y1 = r.y0;
    return r;
}

namespace {

constexpr std::array<std::uint8_t, 8> kPngMagic = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t len, std::uint32_t seed = 0) {
    return static_cast<std::uint32_t>(
        ::crc32(seed, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const std::uint32_t crc = crc32_of(out.data() + type_at, 4 + payload.size());
    put_u32(out, crc);
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& raw) {
    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> out(bound);
    if (::compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw IoFailure("zlib compression failed");
    }
    out.resize(bound);
    return out;
}

std::vector<std::uint8_t> zlib_inflate(const std::uint8_t* data, std::size_t len,
                                       std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    uLongf out_len = static_cast<uLongf>(expected);
    if (::uncompress(out.data(), &out_len, data, static_cast<uLong>(len)) != Z_OK ||
        out_len != expected) {
        throw IoFailure("corrupt PNG stream");
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoFailure("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open: " + path.string());
    f.seekg(0, std::ios::end);
    const auto size = f.tellg();
    f.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) throw IoFailure("read failed: " + path.string());
    return bytes;
}

// channels: 1 = gray, 3 = rgb
void save_png(const std::filesystem::path& path, int width, int height, int channels,
              const std::vector<std::uint8_t>& data) {
    if (width <= 0 || height <= 0 ||
        data.size() != static_cast<std::size_t>(width) * height * channels) {
        throw IoFailure("image buffer size mismatch");
    }
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        raw.insert(raw.end(), data.begin() + y * stride, data.begin() + (y + 1) * stride);
    }

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);                                      // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);                  // color type
    ihdr.push_back(0);                                      // compression
    ihdr.push_back(0);                                      // filter
    ihdr.push_back(0);                                      // interlace

    std::vector<std::uint8_t> out(kPngMagic.begin(), kPngMagic.end());
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", zlib_deflate(raw));
    append_chunk(out, "IEND", {});
    write_file(path, out);
}

struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;  // after palette/alpha expansion: 1 or 3
    std::vector<std::uint8_t> data;
};

int png_source_channels(int color_type) {
    switch (color_type) {
        case 0: return 1;  // gray
        case 2: return 3;  // rgb
        case 4: return 2;  // gray + alpha
        case 6: return 4;  // rgba
        default: throw IoFailure("unsupported PNG color type");
    }
}

std::uint8_t paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

DecodedPng decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || !std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
        throw IoFailure("not a PNG file");
    }
    std::size_t pos = 8;
    int width = 0, height = 0, color_type = 0, bit_depth = 0;
    std::vector<std::uint8_t> idat;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t len = read_u32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) throw IoFailure("truncated PNG");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* payload = &bytes[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            width = static_cast<int>(read_u32(payload));
            height = static_cast<int>(read_u32(payload + 4));
            bit_depth = payload[8];
            color_type = payload[9];
            if (bit_depth != 8) throw IoFailure("unsupported PNG bit depth");
            if (payload[12] != 0) throw IoFailure("interlaced PNG not supported");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (width <= 0 || height <= 0 || idat.empty()) throw IoFailure("invalid PNG");

    const int src_ch = png_source_channels(color_type);
    const std::size_t stride = static_cast<std::size_t>(width) * src_ch;
    const std::size_t raw_size = (stride + 1) * height;
    std::vector<std::uint8_t> raw = zlib_inflate(idat.data(), idat.size(), raw_size);

    // undo per-scanline filters in place
    std::vector<std::uint8_t> img(stride * height);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t filter = raw[y * (stride + 1)];
        const std::uint8_t* src = &raw[y * (stride + 1) + 1];
        std::uint8_t* dst = &img[y * stride];
        const std::uint8_t* up = y > 0 ? &img[(y - 1) * stride] : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            const int left = x >= static_cast<std::size_t>(src_ch) ? dst[x - src_ch] : 0;
            const int above = up ? up[x] : 0;
            const int upleft = (up && x >= static_cast<std::size_t>(src_ch)) ? up[x - src_ch] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += above; break;
                case 3: v += (left + above) / 2; break;
                case 4: v += paeth(left, above, upleft); break;
                default: throw IoFailure("unsupported PNG filter");
            }
            dst[x] = static_cast<std::uint8_t>(v);
        }
    }

    DecodedPng out;
    out.width = width;
    out.height = height;
    if (src_ch == 1) {
        out.channels = 1;
        out.data = std::move(img);
    } else if (src_ch == 2) {  // drop alpha
        out.channels = 1;
        out.data.resize(static_cast<std::size_t>(width) * height);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = img[2 * i];
    } else if (src_ch == 3) {
        out.channels = 3;
        out.data = std::move(img);
    } else {  // rgba -> rgb
        out.channels = 3;
        out.data.resize(static_cast<std::size_t>(width) * height * 3);
        for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
            out.data[3 * i] = img[4 * i];
            out.data[3 * i + 1] = img[4 * i + 1];
            out.data[3 * i + 2] = img[4 * i + 2];
        }
    }
    return out;
}

int parse_pnm_int(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
    while (pos < bytes.size() &&
           (std::isspace(bytes[pos]) || bytes[pos] == '#')) {
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else {
            ++pos;
        }
    }
    int v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
        v = v * 10 + (bytes[pos] - '0');
        ++pos;
        any = true;
    }
    if (!any) throw IoFailure("malformed PNM header");
    return v;
}

Frame decode_pnm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2) throw IoFailure("not a PNM file");
    const bool gray = bytes[1] == '5';
    const bool rgb = bytes[1] == '6';
    if (bytes[0] != 'P' || (!gray && !rgb)) throw IoFailure("unsupported PNM variant");
    std::size_t pos = 2;
    const int width = parse_pnm_int(bytes, pos);
    const int height = parse_pnm_int(bytes, pos);
    const int maxval = parse_pnm_int(bytes, pos);
    if (maxval != 255) throw IoFailure("only 8-bit PNM supported");
    ++pos;  // single whitespace after header
    const std::size_t n = static_cast<std::size_t>(width) * height;
    const std::size_t need = gray ? n : 3 * n;
    if (bytes.size() < pos + need) throw IoFailure("truncated PNM");

    Frame f;
    f.width = width;
    f.height = height;
    f.pixels.resize(3 * n);
    if (rgb) {
        std::copy(bytes.begin() + pos, bytes.begin() + pos + need, f.pixels.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            f.pixels[3 * i] = f.pixels[3 * i + 1] = f.pixels[3 * i + 2] = bytes[pos + i];
        }
    }
    return f;
}

}  // namespace

Frame load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    Frame f;
    if (bytes.size() >= 8 && std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
        DecodedPng png = decode_png(bytes);
        f.width = png.width;
        f.height = png.height;
        const std::size_t n = static_cast<std::size_t>(png.width) * png.height;
        f.pixels.resize(3 * n);
        if (png.channels == 3) {
            f.pixels = std::move(png.data);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                f.pixels[3 * i] = f.pixels[3 * i + 1] = f.pixels[3 * i + 2] = png.data[i];
            }
        }
    } else {
        f = decode_pnm(bytes);
    }
    f.source_path = path.string();
    return f;
}

void save_png_rgb(const std::filesystem::path& path, int width, int height,
                  const std::vector<std::uint8_t>& rgb) {
    save_png(path, width, height, 3, rgb);
}

void save_png_gray(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& gray) {
    save_png(path, width, height, 1, gray);
}

void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> gray(mask.data.size());
    for (std::size_t i = 0; i < mask.data.size(); ++i) gray[i] = mask.data[i] ? 255 : 0;
    save_png(path, mask.width, mask.height, 1, gray);
}

BinaryMask load_mask_png(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    DecodedPng png = decode_png(bytes);
    BinaryMask mask(png.width, png.height);
    const std::size_t n = static_cast<std::size_t>(png.width) * png.height;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t v = png.channels == 1 ? png.data[i] : png.data[3 * i];
        mask.data[i] = v >= 128 ? 1 : 0;
    }
    return mask;
}

void save_ppm(const std::filesystem::path& path, const Frame& frame) {
    std::vector<std::uint8_t> out;
    const std::string header =
        "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    write_file(path, out);
}

Frame crop_frame(const Frame& frame, const PixelRect& rect) {
    Frame out;
    out.index = frame.index;
    out.width = rect.width();
    out.height = rect.height();
    out.pixels.resize(3 * static_cast<std::size_t>(out.width) * out.height);
    for (int y = 0; y < out.height; ++y) {
        const std::uint8_t* src = frame.rgb(rect.x0, rect.y0 + y);
        std::uint8_t* dst = out.pixels.data() + 3 * static_cast<std::size_t>(y) * out.width;
        std::copy(src, src + 3 * static_cast<std::size_t>(out.width), dst);
    }
    return out;
}

}  // namespace hazpipe
