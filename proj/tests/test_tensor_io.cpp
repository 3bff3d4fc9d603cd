#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hof/tensor_io.hpp"
#include "test_util.hpp"

using namespace hof;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

void dump(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("tensor round trip preserves dims and payload") {
  const std::string path = temp_path("hof_t1.hof");
  Tensor t;
  t.dims = {3, 4, 5};
  t.data = test::random_vector(60, 4);
  write_tensor(path, t);
  const Tensor back = read_tensor(path);
  CHECK(back.dims == t.dims);
  CHECK(back.data == t.data);
  std::remove(path.c_str());
}

TEST_CASE("typed round trips") {
  const Grid g = Grid::make(6, 7);

  SUBCASE("image sequence") {
    const std::string path = temp_path("hof_t2.hof");
    ImageSequence I = ImageSequence::zeros(g, 4);
    I.data = test::random_vector(I.data.size(), 5, 0.0, 9.0);
    write_image_sequence(path, I);
    const ImageSequence back = read_image_sequence(path);
    CHECK(back.grid == I.grid);
    CHECK(back.frames == I.frames);
    CHECK(back.data == I.data);
    std::remove(path.c_str());
  }

  SUBCASE("amplitude field 2D and 1D") {
    const std::string path = temp_path("hof_t3.hof");
    const AmplitudeField a = test::random_amplitude(g, 6);
    write_amplitude(path, a);
    const AmplitudeField back = read_amplitude(path);
    CHECK(back.grid == a.grid);
    CHECK(back.re == a.re);
    CHECK(back.im == a.im);

    const AmplitudeField a1 = test::random_amplitude(Grid::make(9, 1), 7);
    write_amplitude(path, a1);
    const AmplitudeField b1 = read_amplitude(path);
    CHECK(b1.grid.dim == 1);
    CHECK(b1.re == a1.re);
    CHECK(b1.im == a1.im);
    std::remove(path.c_str());
  }

  SUBCASE("velocity field") {
    const std::string path = temp_path("hof_t4.hof");
    VelocityField v = VelocityField::zeros(g, 3);
    v.data = test::random_vector(v.data.size(), 8);
    write_velocity(path, v);
    const Tensor t = read_tensor(path);
    REQUIRE(t.dims.size() == 4);
    CHECK(t.dims[0] == 3);
    CHECK(t.dims[1] == 2);
    CHECK(t.dims[2] == 6);
    CHECK(t.dims[3] == 7);
    CHECK(t.data == v.data);
    std::remove(path.c_str());
  }
}

TEST_CASE("malformed files are rejected") {
  const std::string good_path = temp_path("hof_t5.hof");
  Tensor t;
  t.dims = {2, 3};
  t.data = test::random_vector(6, 9);
  write_tensor(good_path, t);
  const std::vector<char> good = slurp(good_path);
  const std::string path = temp_path("hof_t6.hof");

  SUBCASE("missing file") { CHECK_THROWS_AS(read_tensor(temp_path("hof_nope.hof")), DataError); }

  SUBCASE("bad magic") {
    std::vector<char> bytes = good;
    bytes[0] = 'X';
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("bad version") {
    std::vector<char> bytes = good;
    bytes[4] = 9;
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("bad dtype") {
    std::vector<char> bytes = good;
    bytes[8] = 7;
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("implausible rank") {
    std::vector<char> bytes = good;
    bytes[12] = 9;
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("zero dimension") {
    std::vector<char> bytes = good;
    for (int i = 0; i < 8; ++i) bytes[16 + i] = 0;
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("truncated payload") {
    std::vector<char> bytes = good;
    bytes.resize(bytes.size() - 8);
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("trailing bytes") {
    std::vector<char> bytes = good;
    bytes.push_back(0);
    dump(path, bytes);
    CHECK_THROWS_AS(read_tensor(path), DataError);
  }

  SUBCASE("wrong rank for a typed reader") {
    dump(path, good);  // rank 2
    CHECK_THROWS_AS(read_image_sequence(path), DataError);
    CHECK_THROWS_AS(read_amplitude(path), DataError);
  }

  SUBCASE("amplitude axis 0 must be 2") {
    Tensor bad;
    bad.dims = {3, 2, 4, 5};
    bad.data.assign(3 * 2 * 4 * 5, 1.0);
    write_tensor(path, bad);
    CHECK_THROWS_AS(read_amplitude(path), DataError);
  }

  std::remove(good_path.c_str());
  std::remove(path.c_str());
}

TEST_CASE("pgm writer normalizes the plane") {
  const std::string path = temp_path("hof_t7.pgm");
  const int rows = 2, cols = 3;
  const double plane[6] = {-1.0, 0.0, 3.0, 1.0, -1.0, 3.0};
  const auto [lo, hi] = write_pgm(path, plane, rows, cols);
  CHECK(lo == -1.0);
  CHECK(hi == 3.0);
  const std::vector<char> bytes = slurp(path);
  const std::string header(bytes.begin(), bytes.begin() + 9);
  CHECK(header == "P5\n3 2\n25");  // "P5\n3 2\n255\n" prefix
  const unsigned char* pix = reinterpret_cast<const unsigned char*>(bytes.data() + bytes.size() - 6);
  CHECK(pix[0] == 0);    // lo -> 0
  CHECK(pix[2] == 255);  // hi -> 255
  CHECK(pix[3] == 128);  // (1 - (-1)) / 4 * 255 = 127.5, rounds to 128
  std::remove(path.c_str());
}
