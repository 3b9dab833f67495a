// Copyright 2026 The shadowkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// 8-bit PNG/JPEG codecs. Samples convert as value/255 on read and
// round(value*255), clamped, on write.

#pragma once

#include <cmath>
#include <csetjmp>
#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "shadowkit/image.hpp"

namespace shadowkit {

using Bytes = std::vector<uint8_t>;

inline uint8_t to_u8(double v) noexcept {
    const double s = std::round(v * 255.0);
    return uint8_t(s < 0.0 ? 0.0 : (s > 255.0 ? 255.0 : s));
}

inline double from_u8(uint8_t v) noexcept { return double(v) / 255.0; }

/// The image as it reads back after an 8-bit write.
inline Image quantize_u8(Image img) {
    for (double& v : img.data()) v = from_u8(to_u8(v));
    return img;
}

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Writes through a sibling temporary file and renames it into place, so
/// readers never observe a partial file.
inline void write_file(const std::filesystem::path& path, const Bytes& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

namespace detail {

inline Bytes encode_png_u8(int width, int height, int channels, const uint8_t* pixels) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = png_uint_32(width);
    image.height = png_uint_32(height);
    image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr))
        throw IoError(std::string("png encode failed: ") + image.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr))
        throw IoError(std::string("png encode failed: ") + image.message);
    out.resize(size);
    return out;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Only trivially destructible locals live between setjmp and longjmp.
inline bool decode_jpeg_raw(const uint8_t* data, size_t size, uint8_t** pixels, int* w, int* h, int* ch,
                            char* message) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    *pixels = nullptr;
    if (setjmp(err.jump)) {
        std::strncpy(message, err.message, JMSG_LENGTH_MAX);
        jpeg_destroy_decompress(&cinfo);
        std::free(*pixels);
        *pixels = nullptr;
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, data, (unsigned long)size);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    *w = int(cinfo.output_width);
    *h = int(cinfo.output_height);
    *ch = int(cinfo.output_components);
    const size_t stride = size_t(*w) * size_t(*ch);
    *pixels = static_cast<uint8_t*>(std::malloc(stride * size_t(*h)));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = *pixels + size_t(cinfo.output_scanline) * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

inline Image from_u8_pixels(int w, int h, int ch, const uint8_t* px) {
    std::vector<double> v(size_t(w) * size_t(h) * size_t(ch));
    for (size_t i = 0; i < v.size(); ++i) v[i] = from_u8(px[i]);
    return Image(w, h, ch, std::move(v));
}

}  // namespace detail

inline bool is_png(const Bytes& b) noexcept { return b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0; }
inline bool is_jpeg(const Bytes& b) noexcept { return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF; }

/// Decodes PNG (any bit depth, alpha dropped) or baseline/progressive JPEG.
inline Image decode_image(const Bytes& bytes) {
    if (is_png(bytes)) {
        png_image image;
        std::memset(&image, 0, sizeof image);
        image.version = PNG_IMAGE_VERSION;
        if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
            throw IoError(std::string("png decode failed: ") + image.message);
        const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
        image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
        const int ch = color ? 3 : 1;
        std::vector<uint8_t> px(PNG_IMAGE_SIZE(image));
        if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
            png_image_free(&image);
            throw IoError(std::string("png decode failed: ") + image.message);
        }
        return detail::from_u8_pixels(int(image.width), int(image.height), ch, px.data());
    }
    if (is_jpeg(bytes)) {
        uint8_t* px = nullptr;
        int w = 0, h = 0, ch = 0;
        char message[JMSG_LENGTH_MAX] = {};
        if (!detail::decode_jpeg_raw(bytes.data(), bytes.size(), &px, &w, &h, &ch, message))
            throw IoError(std::string("jpeg decode failed: ") + message);
        try {
            Image img = detail::from_u8_pixels(w, h, ch, px);
            std::free(px);
            return img;
        } catch (...) {
            std::free(px);
            throw;
        }
    }
    throw IoError("unrecognized image format (expected PNG or JPEG)");
}

inline Image read_image(const std::filesystem::path& path) {
    try {
        return decode_image(read_file(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

inline Bytes encode_png(const Image& img) {
    std::vector<uint8_t> px(img.data().size());
    auto d = img.data();
    for (size_t i = 0; i < px.size(); ++i) px[i] = to_u8(d[i]);
    return detail::encode_png_u8(img.width(), img.height(), img.channels(), px.data());
}

/// Grayscale PNG of a plane.
inline Bytes encode_png(const Plane& p) {
    std::vector<uint8_t> px(p.size());
    auto d = p.data();
    for (size_t i = 0; i < px.size(); ++i) px[i] = to_u8(d[i]);
    return detail::encode_png_u8(p.width(), p.height(), 1, px.data());
}

/// Grayscale PNG, 255 = set, 0 = clear.
template <class Tag>
Bytes encode_png(const BinaryRaster<Tag>& m) {
    std::vector<uint8_t> px(m.size());
    auto d = m.data();
    for (size_t i = 0; i < px.size(); ++i) px[i] = d[i] ? 255 : 0;
    return detail::encode_png_u8(m.width(), m.height(), 1, px.data());
}

inline void write_png(const std::filesystem::path& path, const Image& img) { write_file(path, encode_png(img)); }
inline void write_png(const std::filesystem::path& path, const Plane& p) { write_file(path, encode_png(p)); }
template <class Tag>
void write_png(const std::filesystem::path& path, const BinaryRaster<Tag>& m) {
    write_file(path, encode_png(m));
}

/// Any single- or multi-channel image; a pixel is set when its first channel is >= 0.5.
inline ShadowMask read_mask(const std::filesystem::path& path) {
    const Image img = read_image(path);
    ShadowMask m(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) m.set(x, y, img.at(x, y, 0) >= 0.5);
    return m;
}

/// First channel of an image file as a plane (e.g. a soft predicted mask).
inline Plane read_plane(const std::filesystem::path& path) {
    const Image img = read_image(path);
    Plane p(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) p.at(x, y) = img.at(x, y, 0);
    return p;
}

}  // namespace shadowkit
