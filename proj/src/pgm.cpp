#include "levprs/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace levprs {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  in >> tok;
  return tok;
}

int parse_int(const std::string& tok, const std::string& path) {
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw Error(ErrorKind::IOError, "malformed PGM header in " + path);
  }
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot open " + path);
  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P2") throw Error(ErrorKind::IOError, path + " is not a PGM");
  const int cols = parse_int(next_token(in), path);
  const int rows = parse_int(next_token(in), path);
  const int maxval = parse_int(next_token(in), path);
  if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 255) {
    throw Error(ErrorKind::IOError, "unsupported PGM geometry in " + path);
  }
  GrayImage img{rows, cols, Vector(static_cast<Index>(rows) * cols)};
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(img.pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw Error(ErrorKind::IOError, "truncated pixel data in " + path);
    }
    for (std::size_t k = 0; k < raw.size(); ++k) img.pixels(k) = raw[k] / double(maxval);
  } else {
    for (Index k = 0; k < img.pixels.size(); ++k) {
      const std::string tok = next_token(in);
      if (tok.empty()) throw Error(ErrorKind::IOError, "truncated pixel data in " + path);
      img.pixels(k) = parse_int(tok, path) / double(maxval);
    }
  }
  return img;
}

void write_pgm(const GrayImage& image, const std::string& path) {
  if (image.pixels.size() != image.rows * image.cols) {
    throw Error(ErrorKind::ShapeMismatch, "pixel count differs from rows * cols");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot open " + path + " for writing");
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  for (Index k = 0; k < image.pixels.size(); ++k) {
    const double v = std::clamp(image.pixels(k), 0.0, 1.0);
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  if (!out) throw Error(ErrorKind::IOError, "write to " + path + " failed");
}

}  // namespace levprs
