#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mertens/mobius.hpp"

namespace mertens {

// On disk (UTF-8, '\n' line endings):
//   mertens-checkpoint v1
//   method=<tag>
//   n=<int>
//   M=<int>
//   crc32=<8 lowercase hex digits>
// The CRC-32 covers the bytes of lines 1-4 including their newlines.
struct MertensCheckpoint {
  std::uint64_t n = 0;
  std::int64_t m = 0;
  Method method = Method::segmented_sieve;
  std::uint32_t checksum = 0;

  friend bool operator==(const MertensCheckpoint&, const MertensCheckpoint&) = default;
};

MertensCheckpoint make_checkpoint(std::uint64_t n, std::int64_t m, Method method);

std::string checkpoint_body(const MertensCheckpoint& cp);  // lines 1-4
std::string serialize_checkpoint(const MertensCheckpoint& cp);
MertensCheckpoint parse_checkpoint(const std::string& text);

// Persists the last entry of `table`.
MertensCheckpoint checkpoint_write(const MertensTable& table, const std::filesystem::path& path);
MertensCheckpoint checkpoint_read(const std::filesystem::path& path);

// M(cp.n + 1 .. limit), continuing the segmented sieve from the checkpoint.
MertensTable mertens_extend(const MertensCheckpoint& cp, std::uint64_t limit,
                            const SieveOptions& options = {});

}  // namespace mertens
