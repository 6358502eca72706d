#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "mertens/checkpoint.hpp"
#include "mertens/errors.hpp"

using namespace mertens;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* dir = std::getenv("MERTENS_TEST_TMP");
  fs::path base = dir ? fs::path(dir) : fs::temp_directory_path();
  base /= "checkpoint_tests";
  fs::create_directories(base);
  return base / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("checkpoint file layout") {
  const auto cp = make_checkpoint(10, -1, Method::segmented_sieve);
  const auto text = serialize_checkpoint(cp);
  CHECK(text.rfind("mertens-checkpoint v1\nmethod=segmented-sieve\nn=10\nM=-1\ncrc32=", 0) == 0);
  CHECK(text.size() == checkpoint_body(cp).size() + std::string("crc32=xxxxxxxx\n").size());
  // CRC-32 (IEEE) of the four header lines.
  CHECK(cp.checksum == parse_checkpoint(text).checksum);
}

TEST_CASE("write then read reproduces the record") {
  const auto table = mertens_prefix(10);
  const auto path = scratch("m10.ckpt");
  const auto written = checkpoint_write(table, path);
  CHECK(written.n == 10);
  CHECK(written.m == -1);
  const auto read = checkpoint_read(path);
  CHECK(read == written);
}

TEST_CASE("integrity failures") {
  const auto path = scratch("bad.ckpt");
  const auto good = serialize_checkpoint(make_checkpoint(1000, 2, Method::recurrence));

  SUBCASE("truncated file") {
    std::ofstream(path, std::ios::binary) << good.substr(0, good.size() / 2);
    CHECK_THROWS_AS(checkpoint_read(path), IntegrityError);
  }
  SUBCASE("missing final newline") {
    std::ofstream(path, std::ios::binary) << good.substr(0, good.size() - 1);
    CHECK_THROWS_AS(checkpoint_read(path), IntegrityError);
  }
  SUBCASE("tampered value keeps old checksum") {
    std::string bad = good;
    bad.replace(bad.find("M=2"), 3, "M=3");
    std::ofstream(path, std::ios::binary) << bad;
    CHECK_THROWS_AS(checkpoint_read(path), IntegrityError);
  }
  SUBCASE("unknown method") {
    std::string bad = good;
    bad.replace(bad.find("recurrence"), 10, "guesswork");
    CHECK_THROWS_AS(parse_checkpoint(bad), IntegrityError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(checkpoint_read(scratch("does-not-exist.ckpt")), NotFoundError);
  }
}

TEST_CASE("empty table cannot be checkpointed") {
  MertensTable empty;
  CHECK_THROWS_AS(checkpoint_write(empty, scratch("empty.ckpt")), DomainError);
}

TEST_CASE("resume from 10^6 to 2*10^6 equals a fresh run") {
  const auto path = scratch("m1e6.ckpt");
  checkpoint_write(mertens_prefix(1'000'000), path);
  const auto resumed = mertens_extend(checkpoint_read(path), 2'000'000, {1 << 16, 2});
  const auto fresh = mertens_prefix(2'000'000);
  REQUIRE(resumed.start == 1'000'001);
  REQUIRE(resumed.values.size() == 1'000'000);
  CHECK(std::equal(resumed.values.begin(), resumed.values.end(),
                   fresh.values.begin() + 1'000'000));
  CHECK_THROWS_AS(mertens_extend(checkpoint_read(path), 1'000'000), DomainError);
}

TEST_CASE("rewriting a checkpoint is byte-stable") {
  const auto a = scratch("stable_a.ckpt");
  const auto b = scratch("stable_b.ckpt");
  checkpoint_write(mertens_prefix(12345), a);
  const auto cp = checkpoint_read(a);
  MertensTable t;
  t.start = cp.n;
  t.values = {cp.m};
  t.generated_by = cp.method;
  checkpoint_write(t, b);
  CHECK(slurp(a) == slurp(b));
}
