#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "mtev/matrix_io.hpp"

using namespace mtev;

namespace {

FarFieldMatrix sample() {
  MediumParams p{2.0, 1.9, 0.5, {7.25, 0.125}};
  FarFieldMatrix m = add_noise(assemble_F0(p, direction_grid(3, 6), 6), 0.0, 0);
  m.meta.noise = {0.02, 123456789012345ULL};
  return m;
}

template <typename T>
T read_at(const std::string& bytes, std::size_t offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

}  // namespace

TEST(MatrixIo, RoundTripIsBitwise) {
  const FarFieldMatrix m = sample();
  std::stringstream buf;
  write_matrix(buf, m);
  const FarFieldMatrix r = read_matrix(buf);
  EXPECT_EQ(r.matrix, m.matrix);
  EXPECT_TRUE(r.grid == m.grid);
  EXPECT_EQ(r.meta.kind, m.meta.kind);
  EXPECT_EQ(r.meta.params.k, m.meta.params.k);
  EXPECT_EQ(r.meta.params.eps, m.meta.params.eps);
  EXPECT_EQ(r.meta.params.gamma, m.meta.params.gamma);
  EXPECT_EQ(r.meta.params.eta, m.meta.params.eta);
  EXPECT_EQ(r.meta.n_max, m.meta.n_max);
  EXPECT_EQ(r.meta.noise.level, m.meta.noise.level);
  EXPECT_EQ(r.meta.noise.seed, m.meta.noise.seed);
}

TEST(MatrixIo, DocumentedLayout) {
  const FarFieldMatrix m = sample();
  std::stringstream buf;
  write_matrix(buf, m);
  const std::string bytes = buf.str();
  const std::size_t header = 8 + 4 + 4 + 8 + 8 + 6 * 8 + 8 + 4 * 4;
  ASSERT_EQ(bytes.size(), header + 16 * m.matrix.rows() * m.matrix.cols());
  EXPECT_EQ(bytes.substr(0, 8), "MTEVFFM1");
  EXPECT_EQ(read_at<std::uint32_t>(bytes, 8), 1u);
  EXPECT_EQ(read_at<std::uint32_t>(bytes, 12), 1u);
  EXPECT_EQ(read_at<std::uint64_t>(bytes, 16), m.matrix.rows());
  EXPECT_EQ(read_at<std::uint64_t>(bytes, 24), m.matrix.cols());
  EXPECT_EQ(read_at<double>(bytes, 32), 2.0);
  EXPECT_EQ(read_at<double>(bytes, 40), 1.9);
  EXPECT_EQ(read_at<double>(bytes, 48), 0.5);
  EXPECT_EQ(read_at<double>(bytes, 56), 7.25);
  EXPECT_EQ(read_at<double>(bytes, 64), 0.125);
  EXPECT_EQ(read_at<double>(bytes, 72), 0.02);
  EXPECT_EQ(read_at<std::uint64_t>(bytes, 80), 123456789012345ULL);
  EXPECT_EQ(read_at<std::int32_t>(bytes, 88), 3);
  EXPECT_EQ(read_at<std::int32_t>(bytes, 92), 6);
  EXPECT_EQ(read_at<std::int32_t>(bytes, 96), 6);
  EXPECT_EQ(read_at<double>(bytes, header), m.matrix(0, 0).real());
  EXPECT_EQ(read_at<double>(bytes, header + 8), m.matrix(0, 0).imag());
  EXPECT_EQ(read_at<double>(bytes, header + 16), m.matrix(0, 1).real());
}

TEST(MatrixIo, RejectsMalformedInput) {
  const FarFieldMatrix m = sample();
  std::stringstream buf;
  write_matrix(buf, m);
  std::string bytes = buf.str();

  std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(read_matrix(truncated), std::runtime_error);

  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream bad_magic(bad);
  EXPECT_THROW(read_matrix(bad_magic), std::runtime_error);

  std::istringstream empty("");
  EXPECT_THROW(read_matrix(empty), std::runtime_error);
}

TEST(MatrixIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "mtev_matrix_io_test.bin";
  const FarFieldMatrix m = sample();
  write_matrix(path, m);
  EXPECT_EQ(read_matrix(path).matrix, m.matrix);
  std::filesystem::remove(path);
  EXPECT_THROW(read_matrix(path), std::runtime_error);
}
