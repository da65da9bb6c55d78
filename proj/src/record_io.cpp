#include "sqcorr/record_io.hpp"

#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include "atomic_write.hpp"
#include "sqcorr/config.hpp"
#include "sqcorr/errors.hpp"

namespace sqcorr {

namespace fs = std::filesystem;

namespace {

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

static_assert(sizeof(double) == 8, "record format requires 64-bit doubles");

}  // namespace

using detail::atomic_write;

void write_record(const SampleRecord& record, const fs::path& path) {
  const auto n = static_cast<std::uint64_t>(record.ch1.size());
  std::string bytes;
  bytes.reserve(record_file_size(n));
  bytes.append(reinterpret_cast<const char*>(kRecordMagic), 4);
  put_u32_le(bytes, kRecordVersion);
  put_u64_le(bytes, n);
  // Interleave the channels; doubles are stored little-endian, which is
  // native here (static_assert below the i/o helpers covers the width).
  for (std::uint64_t k = 0; k < n; ++k) {
    const double pair[2] = {record.ch1[static_cast<Eigen::Index>(k)],
                            record.ch2[static_cast<Eigen::Index>(k)]};
    bytes.append(reinterpret_cast<const char*>(pair), 16);
  }
  atomic_write(path, bytes);

  std::string meta;
  if (record.scenario) {
    for (const auto& [key, value] : scenario_to_key_values(*record.scenario))
      meta += key + "=" + value + "\n";
  } else {
    meta += "scenario=external\n";
    meta += "digitizer.seed=" + std::to_string(record.seed_used) + "\n";
  }
  atomic_write(path.string() + ".meta", meta);
}

SampleRecord read_record(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open record: " + path.string());
  std::error_code ec;
  const std::uint64_t size = fs::file_size(path, ec);
  if (ec) throw IoError("cannot stat record: " + path.string());
  if (size < 16) throw FormatError("record too small: " + path.string());

  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (!in) throw FormatError("cannot read header: " + path.string());
  if (std::memcmp(header, kRecordMagic, 4) != 0)
    throw FormatError("bad magic (not an SQC1 record): " + path.string());
  const std::uint32_t version = get_u32_le(header + 4);
  if (version != kRecordVersion)
    throw FormatError("unsupported record version " + std::to_string(version));
  const std::uint64_t n = get_u64_le(header + 8);
  if (size != record_file_size(n))
    throw FormatError("record length mismatch: expected " +
                      std::to_string(record_file_size(n)) + " bytes, file has " +
                      std::to_string(size));
  if (n < 2) throw FormatError("record holds fewer than 2 samples");

  SampleRecord rec;
  rec.ch1.resize(static_cast<Eigen::Index>(n));
  rec.ch2.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t k = 0; k < n; ++k) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), 16);
    rec.ch1[static_cast<Eigen::Index>(k)] = pair[0];
    rec.ch2[static_cast<Eigen::Index>(k)] = pair[1];
  }
  if (!in) throw FormatError("truncated record payload: " + path.string());

  const fs::path meta = path.string() + ".meta";
  if (fs::exists(meta)) {
    const KeyValueList kv = parse_key_value_file(meta);
    bool external = false;
    for (const auto& [key, value] : kv)
      if (key == "scenario" && value == "external") external = true;
    if (!external) {
      rec.scenario = scenario_from_key_values(kv);
      rec.seed_used = rec.scenario->digitizer.seed;
    }
  }
  return rec;
}

}  // namespace sqcorr
