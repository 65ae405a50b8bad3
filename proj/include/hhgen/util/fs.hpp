#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hhgen/error.hpp"

namespace hhgen {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Writes through a sibling temp file and renames, so readers never see a
/// partial file. Parent directories are created.
inline void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << content;
    if (!out) fail(ErrorCode::io, "write failed for " + path);
  }
  fs::rename(tmp, p, ec);
  if (ec) fail(ErrorCode::io, "cannot rename into " + path + ": " + ec.message());
}

}  // namespace hhgen
