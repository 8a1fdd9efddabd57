#include "patchad/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "patchad/errors.hpp"

namespace patchad {

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

BoundingBox BinaryMask::bounds() const noexcept {
  std::size_t x0 = width, y0 = height, x1 = 0, y1 = 0;
  bool any = false;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (!test(y, x)) continue;
      any = true;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (!any) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  return tok;
}

std::size_t header_number(std::istream& in, const std::filesystem::path& path) {
  const auto tok = header_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
    throw FormatError(path.string() + ": malformed netpbm header");
  }
  return std::stoul(tok);
}

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open image");
  const auto magic = header_token(in);
  std::size_t channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw FormatError(path.string() + ": expected binary netpbm (P5/P6), got '" + magic + "'");

  const auto width = header_number(in, path);
  const auto height = header_number(in, path);
  const auto maxval = header_number(in, path);
  if (width == 0 || height == 0) throw FormatError(path.string() + ": image dims must be positive");
  if (maxval != 255) throw FormatError(path.string() + ": only 8-bit netpbm (maxval 255) is supported");

  Image img(height, width, channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) {
    throw LengthError(path.string() + ": truncated pixel data");
  }
  return img;
}

void write_pnm(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) throw DimensionError("netpbm supports 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << (image.channels == 1 ? "P5" : "P6") << '\n' << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

BinaryMask read_mask(const std::filesystem::path& path) {
  const Image img = read_pnm(path);
  if (img.channels != 1) throw FormatError(path.string() + ": masks must be single-channel (P5)");
  BinaryMask mask(img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) mask.bits[i] = img.pixels[i] != 0 ? 1 : 0;
  return mask;
}

void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  Image img(mask.height, mask.width, 1);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) img.pixels[i] = mask.bits[i] ? 255 : 0;
  write_pnm(img, path);
}

}  // namespace patchad
