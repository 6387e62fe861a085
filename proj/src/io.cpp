#include "ils/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "ils/errors.hpp"

namespace ils {

namespace {

enum class Format { Png, Ppm, Pfm };

Format format_of(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == ".png") return Format::Png;
  if (ext == ".ppm") return Format::Ppm;
  if (ext == ".pfm") return Format::Pfm;
  throw IoError(path.string() + ": unsupported extension '" + ext + "'");
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const std::string& header,
          const unsigned char* payload, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
  if (!out) throw IoError(path.string() + ": write failed");
}

unsigned char quantize(double v) {
  return static_cast<unsigned char>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

// Whitespace-separated ASCII header fields of the Netpbm family, '#' comments allowed.
class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  std::string token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    if (pos_ == start) fail("unexpected end of header");
    return {bytes_.begin() + static_cast<std::ptrdiff_t>(start),
            bytes_.begin() + static_cast<std::ptrdiff_t>(pos_)};
  }

  long integer(const char* what) {
    const std::size_t at = pos_;
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0' || v <= 0) fail(std::string("bad ") + what + " '" + t + "'", at);
    return v;
  }

  double real(const char* what) {
    const std::size_t at = pos_;
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (*end != '\0' || !std::isfinite(v) || v == 0.0) {
      fail(std::string("bad ") + what + " '" + t + "'", at);
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::size_t payload_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("missing header terminator");
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw IoError(name_ + ": " + msg + " at byte " + std::to_string(at));
  }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

void check_payload(const HeaderReader& hdr, std::size_t start, std::size_t need,
                   std::size_t have) {
  if (have < start + need) {
    hdr.fail("truncated payload: expected " + std::to_string(need) + " bytes, found " +
                 std::to_string(have > start ? have - start : 0),
             have);
  }
}

MultiImage read_ppm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  HeaderReader hdr(bytes, path.string());
  if (hdr.token() != "P6") hdr.fail("not a binary PPM (P6)", 0);
  const long w = hdr.integer("width");
  const long h = hdr.integer("height");
  const long maxval = hdr.integer("maxval");
  if (maxval != 255) hdr.fail("maxval " + std::to_string(maxval) + " unsupported, only 255");
  const std::size_t start = hdr.payload_start();
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  check_payload(hdr, start, 3 * n, bytes.size());

  std::vector<ImagePlane> ch(3, ImagePlane(static_cast<int>(h), static_cast<int>(w)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 3; ++k) ch[k].data()[i] = bytes[start + 3 * i + k] / 255.0;
  }
  return MultiImage(std::move(ch), ColorSpace::RGB);
}

void write_ppm(const std::filesystem::path& path, const MultiImage& img) {
  if (img.channel_count() != 3) throw IoError(path.string() + ": PPM output needs 3 channels");
  const std::size_t n = img.channel(0).size();
  std::vector<unsigned char> buf(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) buf[3 * i + static_cast<std::size_t>(k)] = quantize(img.channel(k).data()[i]);
  }
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  dump(path, header, buf.data(), buf.size());
}

MultiImage read_pfm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  HeaderReader hdr(bytes, path.string());
  const std::string magic = hdr.token();
  int channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    hdr.fail("not a PFM file (magic '" + magic + "')", 0);
  }
  const long w = hdr.integer("width");
  const long h = hdr.integer("height");
  const double scale = hdr.real("scale");
  const bool little = scale < 0.0;
  const std::size_t start = hdr.payload_start();
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const std::size_t cn = static_cast<std::size_t>(channels);
  check_payload(hdr, start, 4 * cn * n, bytes.size());

  const bool swap = little != (std::endian::native == std::endian::little);
  std::vector<ImagePlane> ch(cn, ImagePlane(static_cast<int>(h), static_cast<int>(w)));
  const unsigned char* p = bytes.data() + start;
  for (long r = 0; r < h; ++r) {
    const long dst_row = h - 1 - r;
    for (long c = 0; c < w; ++c) {
      for (std::size_t k = 0; k < cn; ++k) {
        std::uint32_t bits;
        std::memcpy(&bits, p, 4);
        p += 4;
        if (swap) bits = __builtin_bswap32(bits);
        const float v = std::bit_cast<float>(bits);
        if (!std::isfinite(v)) {
          hdr.fail("non-finite sample", static_cast<std::size_t>(p - bytes.data()) - 4);
        }
        ch[k](static_cast<int>(dst_row), static_cast<int>(c)) = v;
      }
    }
  }
  return MultiImage(std::move(ch), channels == 1 ? ColorSpace::Gray : ColorSpace::RGB);
}

void write_pfm(const std::filesystem::path& path, const MultiImage& img) {
  const int h = img.height(), w = img.width(), cn = img.channel_count();
  std::vector<unsigned char> buf(4 * static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                                 static_cast<std::size_t>(cn));
  unsigned char* p = buf.data();
  for (int r = h - 1; r >= 0; --r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < cn; ++k) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(img.channel(k)(r, c)));
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
        std::memcpy(p, &bits, 4);
        p += 4;
      }
    }
  }
  const std::string header = std::string(cn == 1 ? "Pf" : "PF") + "\n" + std::to_string(w) + " " +
                             std::to_string(h) + "\n-1.0\n";
  dump(path, header, buf.data(), buf.size());
}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_to_exception(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = msg;
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

MultiImage read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError(path.string() + ": cannot open for reading");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + ": bad PNG signature at byte 0");
  }

  std::string what;
  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &what, png_error_to_exception,
                                 png_ignore_warning);
  if (!g.png) throw IoError("libpng initialisation failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw IoError("libpng initialisation failed");

  // No C++ objects with destructors may be created between setjmp and the
  // last libpng call, so the row buffers are sized after reading the header.
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  int channels = 0;
  if (setjmp(png_jmpbuf(g.png))) {
    throw IoError(path.string() + ": " + what + " (after row " +
                  std::to_string(png_get_current_row_number(g.png)) + ")");
  }
  png_init_io(g.png, file.get());
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);
  w = png_get_image_width(g.png, g.info);
  h = png_get_image_height(g.png, g.info);
  const int color = png_get_color_type(g.png, g.info);
  if (png_get_bit_depth(g.png, g.info) == 16) png_set_strip_16(g.png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(g.png, g.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(g.png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(g.png);
  png_read_update_info(g.png, g.info);
  channels = png_get_channels(g.png, g.info);
  pixels.resize(static_cast<std::size_t>(w) * h * static_cast<std::size_t>(channels));
  rows.resize(h);
  for (png_uint_32 r = 0; r < h; ++r) {
    rows[r] = pixels.data() + static_cast<std::size_t>(r) * w * static_cast<std::size_t>(channels);
  }
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  if (channels != 1 && channels != 3) {
    throw IoError(path.string() + ": unsupported PNG channel count " + std::to_string(channels));
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const auto cn = static_cast<std::size_t>(channels);
  std::vector<ImagePlane> ch(cn, ImagePlane(static_cast<int>(h), static_cast<int>(w)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < cn; ++k) ch[k].data()[i] = pixels[cn * i + k] / 255.0;
  }
  return MultiImage(std::move(ch), channels == 1 ? ColorSpace::Gray : ColorSpace::RGB);
}

bool encode_png(std::FILE* file, png_uint_32 w, png_uint_32 h, int color_type, png_bytepp rows,
                std::string& what) {
  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &what, png_error_to_exception,
                                  png_ignore_warning);
  if (!g.png) return what = "libpng initialisation failed", false;
  g.info = png_create_info_struct(g.png);
  if (!g.info) return what = "libpng initialisation failed", false;
  if (setjmp(png_jmpbuf(g.png))) return false;
  png_init_io(g.png, file);
  png_set_IHDR(g.png, g.info, w, h, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  png_write_image(g.png, rows);
  png_write_end(g.png, nullptr);
  return true;
}

void write_png(const std::filesystem::path& path, const MultiImage& img) {
  const int h = img.height(), w = img.width(), cn = img.channel_count();
  std::vector<unsigned char> pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                                    static_cast<std::size_t>(cn));
  const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < cn; ++k) {
      pixels[static_cast<std::size_t>(cn) * i + static_cast<std::size_t>(k)] =
          quantize(img.channel(k).data()[i]);
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  for (int r = 0; r < h; ++r) {
    rows[static_cast<std::size_t>(r)] =
        pixels.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w * cn);
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError(path.string() + ": cannot open for writing");
  std::string what;
  if (!encode_png(file.get(), static_cast<png_uint_32>(w), static_cast<png_uint_32>(h),
                  cn == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, rows.data(), what)) {
    throw IoError(path.string() + ": " + what);
  }
  if (std::fflush(file.get()) != 0) throw IoError(path.string() + ": write failed");
}

}  // namespace

MultiImage read_image(const std::filesystem::path& path) {
  switch (format_of(path)) {
    case Format::Png: return read_png(path);
    case Format::Ppm: return read_ppm(path);
    case Format::Pfm: return read_pfm(path);
  }
  throw IoError(path.string() + ": unsupported format");
}

void write_image(const std::filesystem::path& path, const MultiImage& img) {
  if (img.channel_count() == 0) throw IoError(path.string() + ": empty image");
  const MultiImage rgb = img.space() == ColorSpace::YUV ? yuv_to_rgb(img) : img;
  switch (format_of(path)) {
    case Format::Png: return write_png(path, rgb);
    case Format::Ppm: return write_ppm(path, rgb);
    case Format::Pfm: return write_pfm(path, rgb);
  }
}

void write_trace(const EnergyTrace& trace, const std::filesystem::path& path) {
  if (trace.energies.empty()) throw IoError(path.string() + ": empty energy trace");
  FilePtr file(std::fopen(path.c_str(), "w"));
  if (!file) throw IoError(path.string() + ": cannot open for writing");
  std::fprintf(file.get(), "iter,energy,rel_decrease\n");
  for (std::size_t i = 0; i < trace.energies.size(); ++i) {
    std::fprintf(file.get(), "%zu,%.12g,%.12g\n", i, trace.energies[i], trace.rel_decrease(i));
  }
  if (std::fflush(file.get()) != 0) throw IoError(path.string() + ": write failed");
}

}  // namespace ils
