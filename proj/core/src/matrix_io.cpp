#include "mtev/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mtev {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'T', 'E', 'V', 'F', 'F', 'M', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("matrix container truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_matrix(std::ostream& out, const FarFieldMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.meta.kind));
  put<std::uint64_t>(out, m.matrix.rows());
  put<std::uint64_t>(out, m.matrix.cols());
  const MediumParams& p = m.meta.params;
  for (double v : {p.k, p.eps, p.gamma, p.eta.real(), p.eta.imag(), m.meta.noise.level}) put<double>(out, v);
  put<std::uint64_t>(out, m.meta.noise.seed);
  for (std::int32_t v : {m.grid.n_polar(), m.grid.n_azimuth(), m.meta.n_max, 0}) put<std::int32_t>(out, v);
  for (const auto& z : m.matrix.data()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  if (!out) throw std::runtime_error("failed to write matrix container");
}

void write_matrix(const std::filesystem::path& path, const FarFieldMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix(out, m);
}

FarFieldMatrix read_matrix(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("not a matrix container");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported matrix container version");
  const auto kind = get<std::uint32_t>(in);
  if (kind > 2) throw std::runtime_error("unknown operator kind in container");
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  MediumParams p;
  p.k = get<double>(in);
  p.eps = get<double>(in);
  p.gamma = get<double>(in);
  const double eta_re = get<double>(in);
  const double eta_im = get<double>(in);
  p.eta = {eta_re, eta_im};
  NoiseDescriptor noise;
  noise.level = get<double>(in);
  noise.seed = get<std::uint64_t>(in);
  const auto n_polar = get<std::int32_t>(in);
  const auto n_azimuth = get<std::int32_t>(in);
  const auto n_max = get<std::int32_t>(in);
  get<std::int32_t>(in);

  DirectionGrid grid(n_polar, n_azimuth);
  if (rows != 2 * grid.size() || cols != 2 * grid.size()) {
    throw std::runtime_error("matrix container dimensions do not match its grid");
  }
  FarFieldMatrix m{std::move(grid), ComplexMatrix(rows, cols), {}};
  m.meta = {static_cast<OperatorKind>(kind), p, n_max, noise};
  for (auto& z : m.matrix.data()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    z = {re, im};
  }
  return m;
}

FarFieldMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(in);
}

}  // namespace mtev
