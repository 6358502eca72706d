#include "mertens/checkpoint.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

constexpr std::string_view kMagic = "mertens-checkpoint v1";

std::uint32_t crc_of(const std::string& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string_view expect_field(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key ||
      line[key.size()] != '=') {
    throw IntegrityError("checkpoint: expected '" + std::string(key) + "=' line, got '" +
                         std::string(line) + "'");
  }
  return line.substr(key.size() + 1);
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what, int base = 10) {
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value, base);
  if (ec != std::errc{} || ptr != end) {
    throw IntegrityError("checkpoint: malformed " + std::string(what) + " '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

MertensCheckpoint make_checkpoint(std::uint64_t n, std::int64_t m, Method method) {
  MertensCheckpoint cp{n, m, method, 0};
  cp.checksum = crc_of(checkpoint_body(cp));
  return cp;
}

std::string checkpoint_body(const MertensCheckpoint& cp) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += "method=" + std::string(to_string(cp.method)) + '\n';
  out += "n=" + std::to_string(cp.n) + '\n';
  out += "M=" + std::to_string(cp.m) + '\n';
  return out;
}

std::string serialize_checkpoint(const MertensCheckpoint& cp) {
  return checkpoint_body(cp) + "crc32=" + hex32(cp.checksum) + '\n';
}

MertensCheckpoint parse_checkpoint(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    if (nl == std::string_view::npos) {
      throw IntegrityError("checkpoint: truncated (last line has no newline)");
    }
    lines.push_back(rest.substr(0, nl));
    rest.remove_prefix(nl + 1);
  }
  if (lines.size() != 5) {
    throw IntegrityError("checkpoint: expected 5 lines, found " + std::to_string(lines.size()));
  }
  if (lines[0] != kMagic) throw IntegrityError("checkpoint: bad header line");

  MertensCheckpoint cp;
  try {
    cp.method = method_from_string(expect_field(lines[1], "method"));
  } catch (const DomainError& e) {
    throw IntegrityError(std::string("checkpoint: ") + e.what());
  }
  cp.n = parse_int<std::uint64_t>(expect_field(lines[2], "n"), "n");
  cp.m = parse_int<std::int64_t>(expect_field(lines[3], "M"), "M");
  const auto crc_text = expect_field(lines[4], "crc32");
  if (crc_text.size() != 8) throw IntegrityError("checkpoint: crc32 must be 8 hex digits");
  cp.checksum = parse_int<std::uint32_t>(crc_text, "crc32", 16);

  const std::size_t body_len = lines[0].size() + lines[1].size() + lines[2].size() +
                               lines[3].size() + 4;
  const std::uint32_t actual = crc_of(text.substr(0, body_len));
  if (actual != cp.checksum) {
    throw IntegrityError("checkpoint: checksum mismatch (stored " + hex32(cp.checksum) +
                         ", computed " + hex32(actual) + ")");
  }
  if (cp.n == 0) throw IntegrityError("checkpoint: n must be >= 1");
  return cp;
}

MertensCheckpoint checkpoint_write(const MertensTable& table, const std::filesystem::path& path) {
  if (table.empty()) throw DomainError("checkpoint_write: table is empty");
  const auto cp = make_checkpoint(table.last_n(), table.last(), table.generated_by);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFoundError("checkpoint_write: cannot open " + path.string());
  out << serialize_checkpoint(cp);
  out.flush();
  if (!out) throw ResourceError("checkpoint_write: write failed for " + path.string());
  return cp;
}

MertensCheckpoint checkpoint_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("checkpoint_read: no such file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

MertensTable mertens_extend(const MertensCheckpoint& cp, std::uint64_t limit,
                            const SieveOptions& options) {
  if (limit <= cp.n) {
    throw DomainError("mertens_extend: limit " + std::to_string(limit) +
                      " does not exceed checkpoint n " + std::to_string(cp.n));
  }
  MertensTable table;
  table.start = cp.n + 1;
  table.generated_by = Method::segmented_sieve;
  table.values.reserve(limit - cp.n);
  for_each_mertens(cp.n + 1, limit, cp.m, options,
                   [&](std::uint64_t, std::span<const std::int64_t> values) {
                     table.values.insert(table.values.end(), values.begin(), values.end());
                   });
  return table;
}

}  // namespace mertens
