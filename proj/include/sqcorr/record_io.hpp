#pragma once
#include <cstdint>
#include <filesystem>

#include "sqcorr/simulate.hpp"

namespace sqcorr {

// Binary record format "SQC1", little-endian throughout:
//   bytes 0..3   magic 0x53 0x51 0x43 0x31 ("SQC1")
//   bytes 4..7   format version, u32 = 1
//   bytes 8..15  n_samples, u64
//   then n_samples interleaved pairs of IEEE-754 f64: (i1_k, i2_k)
// Total length is exactly 16 + 16 n_samples bytes. A sidecar at
// "<path>.meta" holds the producing scenario as UTF-8 key=value lines.

inline constexpr std::uint8_t kRecordMagic[4] = {0x53, 0x51, 0x43, 0x31};
inline constexpr std::uint32_t kRecordVersion = 1;

inline std::uint64_t record_file_size(std::uint64_t n_samples) {
  return 16 + 16 * n_samples;
}

/// Write record + sidecar atomically (temp file, then rename).
/// Throws IoError on filesystem failure.
void write_record(const SampleRecord& record, const std::filesystem::path& path);

/// Read a record; parses "<path>.meta" back into the scenario when present,
/// otherwise marks the record external. Throws FormatError on bad magic,
/// unsupported version, or a length different from 16 + 16 n; IoError on
/// filesystem failure.
SampleRecord read_record(const std::filesystem::path& path);

}  // namespace sqcorr
