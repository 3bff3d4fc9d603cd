#include "hof/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace hof {

static_assert(std::endian::native == std::endian::little,
              "TensorFile writer assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'H', 'O', 'F', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF64 = 1;

void put_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ofstream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::ifstream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::uint64_t get_u64(std::ifstream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_tensor(const std::string& path, const Tensor& t) {
  std::uint64_t count = 1;
  for (std::uint64_t d : t.dims) {
    if (d == 0) throw DataError("write_tensor: zero dimension");
    count *= d;
  }
  if (count != t.data.size()) throw DataError("write_tensor: dims/data mismatch");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("write_tensor: cannot open " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, kDtypeF64);
  put_u32(os, static_cast<std::uint32_t>(t.dims.size()));
  for (std::uint64_t d : t.dims) put_u64(os, d);
  os.write(reinterpret_cast<const char*>(t.data.data()),
           static_cast<std::streamsize>(t.data.size() * sizeof(double)));
  if (!os) throw DataError("write_tensor: short write to " + path);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("read_tensor: cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("read_tensor: bad magic in " + path);
  const std::uint32_t version = get_u32(is);
  const std::uint32_t dtype = get_u32(is);
  const std::uint32_t rank = get_u32(is);
  if (!is || version != kVersion) throw DataError("read_tensor: unsupported version");
  if (dtype != kDtypeF64) throw DataError("read_tensor: unsupported dtype");
  if (rank > 8) throw DataError("read_tensor: implausible rank");
  Tensor t;
  t.dims.resize(rank);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    t.dims[i] = get_u64(is);
    if (!is || t.dims[i] == 0 || t.dims[i] > (1ull << 32))
      throw DataError("read_tensor: bad dimension");
    count *= t.dims[i];
    if (count > (1ull << 34)) throw DataError("read_tensor: tensor too large");
  }
  t.data.resize(count);
  is.read(reinterpret_cast<char*>(t.data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is || static_cast<std::uint64_t>(is.gcount()) != count * sizeof(double))
    throw DataError("read_tensor: truncated payload in " + path);
  is.peek();
  if (!is.eof()) throw DataError("read_tensor: trailing bytes in " + path);
  return t;
}

void write_image_sequence(const std::string& path, const ImageSequence& I) {
  I.validate();
  Tensor t;
  t.dims = {static_cast<std::uint64_t>(I.frames), static_cast<std::uint64_t>(I.grid.rows),
            static_cast<std::uint64_t>(I.grid.cols)};
  t.data = I.data;
  write_tensor(path, t);
}

ImageSequence read_image_sequence(const std::string& path) {
  Tensor t = read_tensor(path);
  if (t.dims.size() != 3) throw DataError("read_image_sequence: expected rank 3");
  ImageSequence I;
  I.frames = static_cast<int>(t.dims[0]);
  I.grid = Grid::make(static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]));
  I.data = std::move(t.data);
  I.validate();
  return I;
}

void write_amplitude(const std::string& path, const AmplitudeField& a) {
  a.validate();
  Tensor t;
  t.dims = {2, static_cast<std::uint64_t>(a.grid.dim), static_cast<std::uint64_t>(a.grid.rows),
            static_cast<std::uint64_t>(a.grid.cols)};
  t.data.reserve(a.re.size() + a.im.size());
  t.data.insert(t.data.end(), a.re.begin(), a.re.end());
  t.data.insert(t.data.end(), a.im.begin(), a.im.end());
  write_tensor(path, t);
}

AmplitudeField read_amplitude(const std::string& path) {
  Tensor t = read_tensor(path);
  if (t.dims.size() != 4 || t.dims[0] != 2) throw DataError("read_amplitude: expected rank 4");
  const int dim = static_cast<int>(t.dims[1]);
  AmplitudeField a;
  a.grid = Grid::make(static_cast<int>(t.dims[2]), static_cast<int>(t.dims[3]));
  if (dim != a.grid.dim) throw DataError("read_amplitude: component/grid dim mismatch");
  const std::size_t half = t.data.size() / 2;
  a.re.assign(t.data.begin(), t.data.begin() + half);
  a.im.assign(t.data.begin() + half, t.data.end());
  a.validate();
  return a;
}

void write_velocity(const std::string& path, const VelocityField& v) {
  Tensor t;
  t.dims = {static_cast<std::uint64_t>(v.frames), static_cast<std::uint64_t>(v.grid.dim),
            static_cast<std::uint64_t>(v.grid.rows), static_cast<std::uint64_t>(v.grid.cols)};
  t.data = v.data;
  write_tensor(path, t);
}

std::pair<double, double> write_pgm(const std::string& path, const double* plane, int rows,
                                    int cols) {
  double lo = plane[0], hi = plane[0];
  const int N = rows * cols;
  for (int q = 0; q < N; ++q) {
    lo = std::min(lo, plane[q]);
    hi = std::max(hi, plane[q]);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("write_pgm: cannot open " + path);
  os << "P5\n" << cols << " " << rows << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<unsigned char> row(static_cast<std::size_t>(N));
  for (int q = 0; q < N; ++q) {
    const double v = (plane[q] - lo) / span * 255.0;
    row[q] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0) + 0.5);
  }
  os.write(reinterpret_cast<const char*>(row.data()), N);
  if (!os) throw DataError("write_pgm: short write to " + path);
  return {lo, hi};
}

}  // namespace hof
