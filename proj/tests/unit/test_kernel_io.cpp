#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <unistd.h>
#include <vector>

#include "grushin/error.hpp"
#include "grushin/nonlocal.hpp"

using namespace grushin;
namespace fs = std::filesystem;

namespace {

const ProblemParams kParams(1, 2, 1.0, 1.0, 2.0);

std::vector<unsigned char> bytes_of(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

class KernelIo : public ::testing::Test {
 protected:
  void SetUp() override {
    grid_ = build_grid(6, 5, 2.0, 3.0, kParams);
    KernelOptions opt;
    opt.n_theta = 12;
    kernel_ = std::make_unique<KernelMatrix>(KernelMatrix::build(grid_, kParams, opt));
    path_ = fs::temp_directory_path() / ("grushin_kernel_" + std::to_string(::getpid()) + ".bin");
    save_kernel(path_, *kernel_);
  }
  void TearDown() override { fs::remove(path_); }

  GridPtr grid_;
  std::unique_ptr<KernelMatrix> kernel_;
  fs::path path_;
};

}  // namespace

TEST_F(KernelIo, LayoutIsLittleEndianGkrn1) {
  const auto b = bytes_of(path_);
  const std::size_t n = grid_->size();
  ASSERT_EQ(b.size(), 5 + 4 * 2 + 8 * 4 + 4 * 3 + 8 * n * n);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 5), "GKRN1");
  auto u32 = [&](std::size_t off) {
    return b[off] | (b[off + 1] << 8) | (b[off + 2] << 16) | (std::uint32_t(b[off + 3]) << 24);
  };
  auto f64 = [&](std::size_t off) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t(b[off + k]) << (8 * k);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  EXPECT_EQ(u32(5), 6u);
  EXPECT_EQ(u32(9), 5u);
  EXPECT_EQ(f64(13), 2.0);
  EXPECT_EQ(f64(21), 3.0);
  EXPECT_EQ(f64(29), 1.0);
  EXPECT_EQ(f64(37), 1.0);
  EXPECT_EQ(u32(45), 1u);
  EXPECT_EQ(u32(49), 2u);
  EXPECT_EQ(u32(53), 12u);
  EXPECT_EQ(f64(57), kernel_->entry(0, 0));
  EXPECT_EQ(f64(57 + 8 * 7), kernel_->entry(0, 7));

  const KernelHeader h = read_kernel_header(path_);
  EXPECT_EQ(h.nr, 6u);
  EXPECT_EQ(h.n_theta, 12u);
}

TEST_F(KernelIo, RoundTripIsBitExact) {
  const KernelMatrix back = load_kernel(path_, grid_, kParams, 12);
  const auto a = kernel_->entries(), b = back.entries();
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
  const auto again = fs::temp_directory_path() / "grushin_kernel_again.bin";
  save_kernel(again, back);
  EXPECT_EQ(bytes_of(again), bytes_of(path_));
  fs::remove(again);
}

TEST_F(KernelIo, MismatchesAreRejected) {
  auto key_of = [&](const GridPtr& g, const ProblemParams& p, int n_theta) {
    try {
      load_kernel(path_, g, p, n_theta);
    } catch (const FormatError& e) {
      return e.key();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(key_of(build_grid(7, 5, 2.0, 3.0, kParams), kParams, 12), "nr");
  EXPECT_EQ(key_of(build_grid(6, 5, 2.5, 3.0, kParams), kParams, 12), "R");
  EXPECT_EQ(key_of(grid_, kParams.with_gamma(0.5), 12), "gamma");
  EXPECT_EQ(key_of(grid_, kParams.with_mu(2.0), 12), "mu");
  EXPECT_EQ(key_of(grid_, kParams, 16), "n_theta");
  // p does not enter the kernel.
  EXPECT_EQ(key_of(grid_, kParams.with_p(2.5), 12), "<accepted>");
}

TEST_F(KernelIo, CorruptFilesAreRejected) {
  auto b = bytes_of(path_);
  const auto bad = fs::temp_directory_path() / "grushin_kernel_bad.bin";
  auto write = [&](const std::vector<unsigned char>& data) {
    std::ofstream os(bad, std::ios::binary);
    os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  };
  auto b_magic = b;
  b_magic[4] = '2';
  write(b_magic);
  EXPECT_THROW(load_kernel(bad, grid_, kParams, 12), FormatError);
  write(std::vector<unsigned char>(b.begin(), b.end() - 8));
  EXPECT_THROW(load_kernel(bad, grid_, kParams, 12), FormatError);
  auto longer = b;
  longer.push_back(0);
  write(longer);
  EXPECT_THROW(load_kernel(bad, grid_, kParams, 12), FormatError);
  fs::remove(bad);
  EXPECT_THROW(load_kernel(bad, grid_, kParams, 12), FormatError);
}

TEST(KernelIoMatrixFree, CannotBeSaved) {
  const GridPtr g = build_grid(4, 4, 1.0, 1.0, kParams);
  KernelOptions opt;
  opt.matrix_free = true;
  const KernelMatrix k = KernelMatrix::build(g, kParams, opt);
  EXPECT_THROW(save_kernel(fs::temp_directory_path() / "never.bin", k), InvalidArgument);
}
