#include "xsb/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace xsb {

namespace {

constexpr char kMagic[5] = {'X', 'S', 'B', 'K', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated XSBK1 stream");
  return v;
}

std::int64_t to_i64(const BigInt& b) { return static_cast<std::int64_t>(b); }

void write_header(std::ostream& os, const GroupSpec& g, std::uint32_t k) {
  os.write(kMagic, 5);
  std::uint8_t kind = static_cast<std::uint8_t>(g.kind());
  if (g.time_axis()) kind |= 0x80;
  put(os, kind);
  put(os, static_cast<std::uint32_t>(g.dim()));
  put(os, static_cast<std::uint32_t>(g.points_per_axis()));
  put(os, to_i64(numerator(g.spacing())));
  put(os, to_i64(denominator(g.spacing())));
  put(os, k);
  if (g.time_axis()) {
    put(os, static_cast<std::uint32_t>(g.time_axis()->points));
    put(os, to_i64(numerator(g.time_axis()->spacing)));
    put(os, to_i64(denominator(g.time_axis()->spacing)));
  }
}

GroupSpec read_header(std::istream& is, std::uint32_t& k) {
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, kMagic, 5) != 0)
    throw std::runtime_error("not an XSBK1 container");
  std::uint8_t kind = get<std::uint8_t>(is);
  bool has_time = kind & 0x80;
  kind &= 0x7f;
  auto d = get<std::uint32_t>(is);
  auto m = get<std::uint32_t>(is);
  auto hn = get<std::int64_t>(is);
  auto hd = get<std::int64_t>(is);
  k = get<std::uint32_t>(is);
  std::optional<TimeAxis> time;
  if (has_time) {
    auto mt = get<std::uint32_t>(is);
    auto tn = get<std::int64_t>(is);
    auto td = get<std::int64_t>(is);
    time = TimeAxis{static_cast<int>(mt), Rat(tn, td)};
  }
  return GroupSpec(static_cast<GroupKind>(kind), static_cast<int>(d),
                   static_cast<int>(m), Rat(hn, hd), std::move(time));
}

void write_values(std::ostream& os, const std::vector<cplx>& v) {
  for (const auto& z : v) {
    put(os, z.real());
    put(os, z.imag());
  }
}

std::vector<cplx> read_values(std::istream& is, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& z : v) {
    double re = get<double>(is);
    double im = get<double>(is);
    z = {re, im};
  }
  return v;
}

}  // namespace

void write_grid_function(const std::string& path, const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_header(os, f.group, 1);
  write_values(os, f.values);
}

GridFunction read_grid_function(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::uint32_t k = 0;
  GroupSpec g = read_header(is, k);
  if (k != 1) throw std::runtime_error("expected a grid function (k = 1)");
  auto v = read_values(is, static_cast<std::size_t>(g.total_points()));
  return GridFunction(std::move(g), std::move(v));
}

void write_dense_multiplier(const std::string& path, const MultiplierK& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  const GroupSpec& g = m.group();
  write_header(os, g, static_cast<std::uint32_t>(m.k()));
  const std::int64_t total = g.total_points();
  std::vector<cplx> v;
  if (m.k() == 2) {
    v.reserve(static_cast<std::size_t>(total));
    std::int64_t pts[2];
    for (std::int64_t i = 0; i < total; ++i) {
      pts[0] = i;
      auto n = g.neg(i);
      if (!n) {
        v.push_back({});
        continue;
      }
      pts[1] = *n;
      v.push_back(m.eval(pts));
    }
  } else if (m.k() == 3) {
    v.reserve(static_cast<std::size_t>(total * total));
    std::int64_t pts[3];
    for (std::int64_t i = 0; i < total; ++i)
      for (std::int64_t j = 0; j < total; ++j) {
        pts[0] = i;
        pts[1] = j;
        auto t = g.forced_third(i, j);
        if (!t) {
          v.push_back({});
          continue;
        }
        pts[2] = *t;
        v.push_back(m.eval(pts));
      }
  } else {
    throw std::invalid_argument("dense serialization supports k in {2,3}");
  }
  write_values(os, v);
}

MultiplierK read_dense_multiplier(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::uint32_t k = 0;
  GroupSpec g = read_header(is, k);
  const std::int64_t total = g.total_points();
  if (k == 2) {
    auto v = read_values(is, static_cast<std::size_t>(total));
    auto table = std::make_shared<std::vector<cplx>>(std::move(v));
    return MultiplierK::from_rule(
        2, g, [table](const std::int64_t* pts) { return (*table)[static_cast<std::size_t>(pts[0])]; });
  }
  if (k == 3) {
    auto v = read_values(is, static_cast<std::size_t>(total * total));
    return MultiplierK::dense3(std::move(g), std::move(v));
  }
  throw std::runtime_error("dense deserialization supports k in {2,3}");
}

}  // namespace xsb
