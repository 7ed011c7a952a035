#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "grushin/error.hpp"
#include "grushin/nonlocal.hpp"

namespace grushin {

namespace {

constexpr std::array<char, 5> kMagic{'G', 'K', 'R', 'N', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  char buf[sizeof(U)];
  for (std::size_t k = 0; k < sizeof(U); ++k)
    buf[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
  os.write(buf, sizeof buf);
}

template <class T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  unsigned char buf[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof buf))
    throw FormatError("", "truncated kernel file");
  U bits = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) bits |= U(buf[k]) << (8 * k);
  return std::bit_cast<T>(bits);
}

KernelHeader read_header(std::istream& is) {
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw FormatError("magic", "not a GKRN1 kernel file");
  KernelHeader h{};
  h.nr = get_le<std::uint32_t>(is);
  h.ns = get_le<std::uint32_t>(is);
  h.R = get_le<double>(is);
  h.S = get_le<double>(is);
  h.gamma = get_le<double>(is);
  h.mu = get_le<double>(is);
  h.m = get_le<std::uint32_t>(is);
  h.ell = get_le<std::uint32_t>(is);
  h.n_theta = get_le<std::uint32_t>(is);
  return h;
}

}  // namespace

void save_kernel(const std::filesystem::path& path, const KernelMatrix& kernel) {
  if (!kernel.dense())
    throw InvalidArgument("only dense kernels can be written to a cache");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open kernel cache for writing: " + path.string());
  const RadialGrid& g = kernel.grid();
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(g.nr()));
  put_le(os, static_cast<std::uint32_t>(g.ns()));
  put_le(os, g.R());
  put_le(os, g.S());
  put_le(os, kernel.gamma());
  put_le(os, kernel.mu());
  put_le(os, static_cast<std::uint32_t>(kernel.m()));
  put_le(os, static_cast<std::uint32_t>(kernel.ell()));
  put_le(os, static_cast<std::uint32_t>(kernel.n_theta()));
  const auto entries = kernel.entries();
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(entries.data()),
             static_cast<std::streamsize>(entries.size() * sizeof(double)));
  } else {
    for (double v : entries) put_le(os, v);
  }
  if (!os) throw Error("failed writing kernel cache: " + path.string());
}

KernelHeader read_kernel_header(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("", "cannot open kernel cache: " + path.string());
  return read_header(is);
}

KernelMatrix load_kernel(const std::filesystem::path& path, GridPtr grid,
                         const ProblemParams& params, int n_theta) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("", "cannot open kernel cache: " + path.string());
  const KernelHeader h = read_header(is);
  auto mismatch = [](const char* key) {
    throw FormatError(key, std::string("kernel cache mismatch on '") + key +
                               "'");
  };
  if (h.nr != std::uint32_t(grid->nr())) mismatch("nr");
  if (h.ns != std::uint32_t(grid->ns())) mismatch("ns");
  if (h.R != grid->R()) mismatch("R");
  if (h.S != grid->S()) mismatch("S");
  if (h.gamma != params.gamma()) mismatch("gamma");
  if (h.mu != params.mu()) mismatch("mu");
  if (h.m != std::uint32_t(params.m())) mismatch("m");
  if (h.ell != std::uint32_t(params.ell())) mismatch("ell");
  if (h.n_theta != std::uint32_t(n_theta)) mismatch("n_theta");
  const std::size_t n = grid->size();
  std::vector<double> entries(n * n);
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(entries.data()),
                 static_cast<std::streamsize>(entries.size() * sizeof(double))))
      throw FormatError("", "truncated kernel file");
  } else {
    for (double& v : entries) v = get_le<double>(is);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw FormatError("", "trailing bytes after kernel entries");
  return KernelMatrix(std::move(grid), params, n_theta, std::move(entries));
}

}  // namespace grushin
