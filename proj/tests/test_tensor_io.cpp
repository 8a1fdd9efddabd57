#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "patchad/errors.hpp"
#include "patchad/manifest.hpp"
#include "patchad/tensor_io.hpp"

using namespace patchad;

namespace {

std::string bytes_of(const FeatureTensor& t) {
  std::ostringstream out(std::ios::binary);
  write_tensor(t, out);
  return out.str();
}

}  // namespace

TEST_CASE("smallest tensor is header plus one float") {
  const auto bytes = bytes_of(FeatureTensor(1, 1, 1, 0.0f));
  // magic(4) + version(4) + dtype(1) + ndim(1) + 3 dims(12)
  CHECK(tensor_header_size(3) == 22);
  CHECK(bytes.size() == 26);
  CHECK(bytes.substr(0, 4) == "REBF");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[8]) == 0);
  CHECK(static_cast<unsigned char>(bytes[9]) == 3);
}

TEST_CASE("header fields are little-endian") {
  const auto bytes = bytes_of(FeatureTensor(2, 3, 258, 1.0f));
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  CHECK(p[10] == 2);
  CHECK(p[14] == 3);
  CHECK(p[18] == 2);  // 258 = 0x0102
  CHECK(p[19] == 1);
  // 1.0f = 0x3f800000
  CHECK(p[22] == 0x00);
  CHECK(p[25] == 0x3f);
}

TEST_CASE("roundtrip is bit-exact") {
  FeatureTensor t(2, 3, 4);
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<float>(i) * 0.1f - 1.3f;
  t.data[5] = -0.0f;
  t.data[6] = 1e-40f;  // subnormal
  std::istringstream in(bytes_of(t), std::ios::binary);
  const auto back = read_tensor(in);
  CHECK(back.channels == 2);
  CHECK(back.height == 3);
  CHECK(back.width == 4);
  CHECK(std::memcmp(back.data.data(), t.data.data(), t.data.size() * sizeof(float)) == 0);
}

TEST_CASE("row-major, channel-outermost indexing") {
  FeatureTensor t(2, 3, 4);
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<float>(i);
  std::istringstream in(bytes_of(t), std::ios::binary);
  const auto back = read_tensor(in);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t h = 0; h < 3; ++h) {
      for (std::size_t w = 0; w < 4; ++w) CHECK(back.at(c, h, w) == static_cast<float>(c * 12 + h * 4 + w));
    }
  }
  CHECK(back.at(1, 2, 3) == 23.0f);
}

TEST_CASE("bad magic names the expected magic") {
  auto bytes = bytes_of(FeatureTensor(1, 1, 1));
  bytes[0] = 'X';
  std::istringstream in(bytes, std::ios::binary);
  try {
    read_tensor(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("REBF") != std::string::npos);
  }
}

TEST_CASE("truncated payload reports expected and actual") {
  auto bytes = bytes_of(FeatureTensor(1, 2, 2));
  bytes.resize(bytes.size() - 4);
  std::istringstream in(bytes, std::ios::binary);
  try {
    read_tensor(in);
    FAIL("expected LengthError");
  } catch (const LengthError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("16") != std::string::npos);
    CHECK(msg.find("12") != std::string::npos);
  }
}

TEST_CASE("non-finite payload is a data error") {
  const RawTensor raw{{2}, {1.0f, 2.0f}};
  std::ostringstream out(std::ios::binary);
  write_raw_tensor(raw, out);
  auto bytes = out.str();
  const float inf = std::numeric_limits<float>::infinity();
  std::memcpy(bytes.data() + bytes.size() - 4, &inf, 4);
  std::istringstream in(bytes, std::ios::binary);
  CHECK_THROWS_AS(read_raw_tensor(in), DataError);
}

TEST_CASE("rank and dtype validation") {
  auto bytes = bytes_of(FeatureTensor(1, 1, 1));
  SUBCASE("unknown dtype") {
    bytes[8] = 7;
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_tensor(in), FormatError);
  }
  SUBCASE("rank 0") {
    bytes[9] = 0;
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_raw_tensor(in), FormatError);
  }
  SUBCASE("rank 5") {
    bytes[9] = 5;
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_raw_tensor(in), FormatError);
  }
}

TEST_CASE("rank-2 file reads as one channel") {
  RawTensor raw{{2, 3}, {1, 2, 3, 4, 5, 6}};
  std::ostringstream out(std::ios::binary);
  write_raw_tensor(raw, out);
  std::istringstream in(out.str(), std::ios::binary);
  const auto t = read_tensor(in);
  CHECK(t.channels == 1);
  CHECK(t.height == 2);
  CHECK(t.width == 3);
  CHECK(t.at(0, 1, 2) == 6.0f);
}

TEST_CASE("FeatureTensor rejects a wrong value count") {
  CHECK_THROWS_AS(FeatureTensor(2, 2, 2, std::vector<float>(7)), DimensionError);
}

TEST_CASE("file helpers add path context") {
  const auto missing = std::filesystem::temp_directory_path() / "patchad_no_such_dir" / "x.rebf";
  try {
    load_tensor(missing);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("x.rebf") != std::string::npos);
  }
}

TEST_CASE("manifest parsing") {
  SUBCASE("two and three field rows, blank lines, CRLF") {
    std::istringstream in("a b.ppm\t0\n\nc.ppm\t3\tc_mask.pgm\r\n");
    const auto rows = parse_manifest(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == SampleManifestRow{"a b.ppm", 0, ""});
    CHECK(rows[1] == SampleManifestRow{"c.ppm", 3, "c_mask.pgm"});
  }
  SUBCASE("short row names its line") {
    std::istringstream in("a.ppm\t0\nonly_one_field\n");
    try {
      parse_manifest(in);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("label bound") {
    std::istringstream in("a.ppm\t7\n");
    CHECK_THROWS_AS(parse_manifest(in), DataError);
  }
  SUBCASE("missing file is detected") {
    std::istringstream in("nope.ppm\t0\n");
    ManifestOptions opts;
    opts.check_files_under = std::filesystem::temp_directory_path();
    CHECK_THROWS_AS(parse_manifest(in, opts), IoError);
  }
  SUBCASE("write then parse") {
    const std::vector<SampleManifestRow> rows{{"x.ppm", 1, "m.pgm"}, {"y.ppm", 0, ""}};
    std::ostringstream out;
    write_manifest(rows, out);
    std::istringstream in(out.str());
    CHECK(parse_manifest(in) == rows);
  }
}
