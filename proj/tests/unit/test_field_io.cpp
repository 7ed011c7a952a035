#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "grushin/error.hpp"
#include "grushin/field_io.hpp"

using namespace grushin;

namespace {

const ProblemParams kParams(1, 2, 1.0, 1.0, 2.0);

RadialField awkward_field(const GridPtr& g) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RadialField f(g);
  for (std::size_t a = 0; a < f.size(); ++a) f[a] = u(rng) * std::pow(10.0, (a % 40) - 20.0);
  f[0] = 0.1 + 0.2;  // not representable in short decimals
  f[1] = -0.0;
  f[2] = 5e-324;
  return f;
}

std::string header_with(const std::string& gamma_text) {
  return "# grushin-field v1\n# m=1,ell=2,gamma=" + gamma_text +
         ",mu=1,p=2,nr=4,ns=4,R=1,S=1\n";
}

}  // namespace

TEST(FieldIo, RoundTripIsBitExact) {
  const GridPtr g = build_grid(7, 5, 3.3, 1.7, kParams);
  const RadialField f = awkward_field(g);
  std::stringstream ss;
  write_field_csv(ss, f, kParams);
  const LoadedField back = read_field_csv(ss, kParams, g);
  ASSERT_EQ(back.field.size(), f.size());
  for (std::size_t a = 0; a < f.size(); ++a)
    EXPECT_EQ(std::memcmp(&back.field.values()[a], &f.values()[a], sizeof(double)), 0) << a;
}

TEST(FieldIo, LayoutOfFile) {
  const GridPtr g = build_grid(4, 4, 1.0, 1.0, kParams);
  std::stringstream ss;
  write_field_csv(ss, RadialField(g), kParams);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "# grushin-field v1");
  std::getline(ss, line);
  EXPECT_EQ(line, "# m=1,ell=2,gamma=1,mu=1,p=2,nr=4,ns=4,R=1,S=1");
  std::getline(ss, line);
  EXPECT_EQ(line, "0.125,0.125,0");
  std::getline(ss, line);
  EXPECT_EQ(line, "0.125,0.375,0");
  int rows = 2;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 16);
}

TEST(FieldIo, FileRoundTripBuildsGrid) {
  const GridPtr g = build_grid(6, 6, 2.0, 3.0, kParams);
  const RadialField f = awkward_field(g);
  const auto path = std::filesystem::temp_directory_path() / "grushin_field_io_test.csv";
  write_field_csv(path, f, kParams);
  const LoadedField back = read_field_csv(path, std::nullopt, nullptr);
  EXPECT_TRUE(back.field.grid().same_layout(*g));
  EXPECT_EQ(back.header.nr, 6);
  EXPECT_EQ(back.header.S, 3.0);
  for (std::size_t a = 0; a < f.size(); ++a) EXPECT_EQ(back.field[a], f[a]);
  std::filesystem::remove(path);
}

TEST(FieldIo, MismatchNamesFirstKey) {
  const GridPtr g = build_grid(4, 4, 1.0, 1.0, kParams);
  std::stringstream ss;
  write_field_csv(ss, RadialField(g), kParams.with_gamma(0.5).with_p(2.5));
  try {
    read_field_csv(ss, kParams, g);
    FAIL() << "accepted mismatched header";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.key(), "gamma");
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
  std::stringstream grid_case;
  write_field_csv(grid_case, RadialField(g), kParams);
  try {
    read_field_csv(grid_case, kParams, build_grid(4, 5, 1.0, 1.0, kParams));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.key(), "ns");
  }
}

TEST(FieldIo, MalformedInput) {
  const GridPtr g = build_grid(4, 4, 1.0, 1.0, kParams);
  auto key_of = [&](const std::string& text) {
    std::stringstream ss(text);
    try {
      read_field_csv(ss, kParams, g);
    } catch (const FormatError& e) {
      return e.key().empty() ? std::string("<none>") : e.key();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(key_of(""), "<none>");
  EXPECT_EQ(key_of("# grushin-field v2\n"), "<none>");
  EXPECT_EQ(key_of(header_with("1.x")), "gamma");
  EXPECT_EQ(key_of("# grushin-field v1\n# m=1,ell=2,gam=1,mu=1,p=2,nr=4,ns=4,R=1,S=1\n"), "gamma");
  EXPECT_EQ(key_of(header_with("1")), "<none>");  // truncated body
  EXPECT_EQ(key_of(header_with("1") + "0.125,0.125,nan\n"), "value");
}
