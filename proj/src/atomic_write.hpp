#pragma once
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "sqcorr/errors.hpp"

namespace sqcorr::detail {

/// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot rename " + tmp.string() + " -> " + path.string());
}

}  // namespace sqcorr::detail
