#include "sudonet/netpbm.hpp"

#include <fstream>

namespace sudonet {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in, const std::filesystem::path& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw ParseError("truncated netpbm header in " + path.string());
  return tok;
}

std::size_t parse_dim(const std::string& tok, const std::filesystem::path& path) {
  try {
    const long v = std::stol(tok);
    if (v < 1) throw ParseError("non-positive netpbm dimension in " + path.string());
    return static_cast<std::size_t>(v);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad netpbm header field '" + tok + "' in " + path.string());
  }
}

std::vector<std::uint8_t> read_raster(std::istream& in, std::size_t count,
                                      const std::filesystem::path& path) {
  std::vector<std::uint8_t> data(count);
  if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count))) {
    throw ParseError("truncated netpbm raster in " + path.string());
  }
  return data;
}

void read_header(std::istream& in, const char* magic, std::size_t& w, std::size_t& h,
                 const std::filesystem::path& path) {
  const std::string m = next_token(in, path);
  if (m != magic) {
    throw ParseError("expected " + std::string(magic) + " magic in " + path.string() +
                     ", found '" + m + "'");
  }
  w = parse_dim(next_token(in, path), path);
  h = parse_dim(next_token(in, path), path);
  const std::size_t maxval = parse_dim(next_token(in, path), path);
  if (maxval != 255) {
    throw ParseError("unsupported netpbm maxval " + std::to_string(maxval) + " in " +
                     path.string() + " (only 255)");
  }
  // The single whitespace byte after maxval was already consumed by the
  // tokenizer's terminating isspace.
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  GrayImage img;
  read_header(in, "P5", img.width, img.height, path);
  img.pixels = read_raster(in, img.width * img.height, path);
  return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw ParseError("failed writing " + path.string());
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  RgbImage img;
  read_header(in, "P6", img.width, img.height, path);
  img.pixels = read_raster(in, img.width * img.height * 3, path);
  return img;
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw ParseError("failed writing " + path.string());
}

}  // namespace sudonet
