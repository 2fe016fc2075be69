#include "rbte/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "rbte/error.hpp"

namespace rbte {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

std::string lower_ext(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Decoded samples before normalization.
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  unsigned maxval = 255;
  std::vector<std::uint16_t> samples;
};

AnyImage normalize(const RawImage& raw) {
  if (raw.width < 1 || raw.height < 1)
    throw DataError("zero-dimension image");
  const float scale = static_cast<float>(raw.maxval);
  std::vector<float> out(raw.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::min(1.0f, static_cast<float>(raw.samples[i]) / scale);
  if (raw.channels == 1) return GrayImage(raw.width, raw.height, std::move(out));
  return RgbImage(raw.width, raw.height, std::move(out));
}

// ---------------------------------------------------------------- PNG

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
};

// libpng reports errors by longjmp; nothing with a destructor may live
// between setjmp and the calls below.
bool png_read_header(png_structp png, png_infop info, std::FILE* fp,
                     PngHeader* hdr) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_read_info(png, info);
  png_get_IHDR(png, info, &hdr->width, &hdr->height, &hdr->bit_depth,
               &hdr->color_type, nullptr, nullptr, nullptr);

  if (hdr->color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (hdr->color_type == PNG_COLOR_TYPE_GRAY && hdr->bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  hdr->bit_depth = png_get_bit_depth(png, info);
  hdr->color_type = png_get_color_type(png, info);
  return true;
}

bool png_read_rows(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, info);
  return true;
}

RawImage read_png(const fs::path& path) {
  auto fp = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError("'" + path.string() + "' is not a PNG file");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialization failed");
  }
  png_set_sig_bytes(png, 8);

  PngHeader hdr;
  if (!png_read_header(png, info, fp.get(), &hdr)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG header in '" + path.string() + "'");
  }
  if (hdr.width == 0 || hdr.height == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("zero-dimension image '" + path.string() + "'");
  }
  if (hdr.bit_depth != 8 && hdr.bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("unsupported PNG bit depth " +
                    std::to_string(hdr.bit_depth));
  }

  const int channels = (hdr.color_type & PNG_COLOR_MASK_COLOR) ? 3 : 1;
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<png_byte> buffer(rowbytes * hdr.height);
  std::vector<png_bytep> rows(hdr.height);
  for (png_uint_32 y = 0; y < hdr.height; ++y)
    rows[y] = buffer.data() + y * rowbytes;

  if (!png_read_rows(png, info, rows.data())) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG data in '" + path.string() + "'");
  }
  png_destroy_read_struct(&png, &info, nullptr);

  RawImage raw;
  raw.width = static_cast<int>(hdr.width);
  raw.height = static_cast<int>(hdr.height);
  raw.channels = channels;
  raw.maxval = hdr.bit_depth == 16 ? 65535u : 255u;
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height * channels;
  raw.samples.resize(n);
  if (hdr.bit_depth == 8) {
    for (png_uint_32 y = 0; y < hdr.height; ++y)
      for (std::size_t i = 0; i < static_cast<std::size_t>(raw.width) * channels; ++i)
        raw.samples[y * raw.width * channels + i] = rows[y][i];
  } else {
    for (png_uint_32 y = 0; y < hdr.height; ++y)
      for (std::size_t i = 0; i < static_cast<std::size_t>(raw.width) * channels; ++i)
        raw.samples[y * raw.width * channels + i] = static_cast<std::uint16_t>(
            (rows[y][2 * i] << 8) | rows[y][2 * i + 1]);
  }
  return raw;
}

bool png_write_all(png_structp png, png_infop info, std::FILE* fp, int width,
                   int height, int color_type, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  // Fixed settings keep output byte-identical across runs.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, info);
  return true;
}

void write_png8(const fs::path& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& bytes) {
  auto fp = open_file(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialization failed");
  }
  std::vector<png_bytep> rows(height);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(bytes.data() + y * stride);
  const bool ok = png_write_all(
      png, info, fp.get(), width, height,
      channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, rows.data());
  png_destroy_write_struct(&png, &info);
  if (!ok) throw IoError("failed to write PNG '" + path.string() + "'");
  if (std::fflush(fp.get()) != 0)
    throw IoError("failed to flush '" + path.string() + "'");
}

// ------------------------------------------------------------ PGM/PPM

void skip_ws_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

unsigned read_header_int(std::istream& in, const fs::path& path) {
  skip_ws_and_comments(in);
  unsigned long v = 0;
  if (!(in >> v)) throw IoError("malformed PNM header in '" + path.string() + "'");
  return static_cast<unsigned>(v);
}

RawImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw IoError("'" + path.string() + "' is not a binary PGM/PPM file");

  RawImage raw;
  raw.channels = magic[1] == '5' ? 1 : 3;
  const unsigned w = read_header_int(in, path);
  const unsigned h = read_header_int(in, path);
  raw.maxval = read_header_int(in, path);
  if (w == 0 || h == 0) throw DataError("zero-dimension image '" + path.string() + "'");
  if (raw.maxval == 0 || raw.maxval > 65535)
    throw DataError("unsupported PNM maxval " + std::to_string(raw.maxval));
  in.get();  // single whitespace before the raster
  raw.width = static_cast<int>(w);
  raw.height = static_cast<int>(h);

  const std::size_t n = static_cast<std::size_t>(w) * h * raw.channels;
  const std::size_t bytes_per = raw.maxval > 255 ? 2 : 1;
  std::vector<unsigned char> buf(n * bytes_per);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw IoError("truncated PNM raster in '" + path.string() + "'");
  raw.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bytes_per == 2 ? (buf[2 * i] << 8) | buf[2 * i + 1] : buf[i];
    if (v > raw.maxval) throw DataError("PNM sample exceeds maxval");
    raw.samples[i] = static_cast<std::uint16_t>(v);
  }
  return raw;
}

void write_pnm8(const fs::path& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << (channels == 1 ? "P5" : "P6") << '\n'
      << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed to write '" + path.string() + "'");
}

void write8(const fs::path& path, int width, int height, int channels,
            const std::vector<std::uint8_t>& bytes) {
  const auto ext = lower_ext(path);
  if (ext == ".pgm" || ext == ".ppm")
    write_pnm8(path, width, height, channels, bytes);
  else
    write_png8(path, width, height, channels, bytes);
}

std::uint8_t quantize8(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

AnyImage load_image(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file '" + path.string() + "'");
  const auto ext = lower_ext(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm")
    return normalize(read_pnm(path));
  return normalize(read_png(path));
}

GrayImage load_gray(const fs::path& path) {
  auto img = load_image(path);
  if (auto* g = std::get_if<GrayImage>(&img)) return std::move(*g);
  return to_grayscale(std::get<RgbImage>(img));
}

void save_binary(const BinaryMap& map, const fs::path& path) {
  std::vector<std::uint8_t> bytes(map.size());
  const auto px = map.pixels();
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = px[i] ? 255 : 0;
  write8(path, map.width(), map.height(), 1, bytes);
}

void save_gray(const GrayImage& img, const fs::path& path) {
  std::vector<std::uint8_t> bytes(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize8(px[i]);
  write8(path, img.width(), img.height(), 1, bytes);
}

void save_rgb(const RgbImage& img, const fs::path& path) {
  const auto px = img.pixels();
  std::vector<std::uint8_t> bytes(px.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize8(px[i]);
  write8(path, img.width(), img.height(), 3, bytes);
}

}  // namespace rbte
