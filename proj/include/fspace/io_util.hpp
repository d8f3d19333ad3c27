#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fspace/errors.hpp"

namespace fspace {
namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

// temp file in the same directory, then rename over the target
inline void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("rename failed: " + path);
  }
}

// incremental FNV-1a over byte chunks
class Fnv1a {
 public:
  void feed(const std::string& chunk) {
    for (unsigned char c : chunk) {
      h_ ^= c;
      h_ *= 0x100000001B3ull;
    }
  }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h_));
    return std::string(buf);
  }

 private:
  std::uint64_t h_ = 0xCBF29CE484222325ull;
};

inline std::uint64_t fnv1a64(const std::string& text) {
  Fnv1a h;
  h.feed(text);
  return h.value();
}

inline std::string fnv1a64_hex(const std::string& text) {
  Fnv1a h;
  h.feed(text);
  return h.hex();
}

// shortest decimal with 17 significant digits: exact double round-trip
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return std::string(buf);
}

}  // namespace detail
}  // namespace fspace
