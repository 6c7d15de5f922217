#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xsb/rational.hpp"

namespace xsb {

enum class GroupKind : std::uint8_t { cycle = 0, torus_grid = 1, real_grid = 2 };

inline const char* kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::cycle: return "cycle";
    case GroupKind::torus_grid: return "torus-grid";
    case GroupKind::real_grid: return "real-grid";
  }
  return "?";
}

struct TimeAxis {
  int points = 0;
  Rat spacing = 1;
  bool operator==(const TimeAxis& o) const {
    return points == o.points && spacing == o.spacing;
  }
};

// A discretized abelian group: cyclic Z_M^d, a torus grid, or a truncated
// real grid, optionally crossed with a truncated time-frequency axis.
// Addition is modular for cycle/torus and truncated for real grids: sums
// leaving the box carry no mass.
class GroupSpec {
 public:
  static constexpr int kMaxAxes = 5;

  GroupSpec() = default;
  GroupSpec(GroupKind kind, int dim, int points_per_axis, Rat spacing,
            std::optional<TimeAxis> time = std::nullopt);

  static GroupSpec cycle(int m, int dim = 1) {
    return GroupSpec(GroupKind::cycle, dim, m, 1);
  }
  static GroupSpec torus(int m, int dim) {
    return GroupSpec(GroupKind::torus_grid, dim, m, 1);
  }
  static GroupSpec real_grid(int m, Rat h, int dim = 1,
                             std::optional<TimeAxis> time = std::nullopt) {
    return GroupSpec(GroupKind::real_grid, dim, m, std::move(h), std::move(time));
  }

  GroupKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int points_per_axis() const { return m_; }
  const Rat& spacing() const { return h_; }
  const std::optional<TimeAxis>& time_axis() const { return time_; }

  int axes() const { return dim_ + (time_ ? 1 : 0); }
  std::int64_t axis_points(int a) const { return a < dim_ ? m_ : time_->points; }
  std::int64_t total_points() const { return total_; }

  // Measure of a single point, exact: h^dim (times the time spacing).
  const Rat& point_measure() const { return measure_; }
  double point_measure_d() const { return measure_d_; }

  bool modular() const { return kind_ != GroupKind::real_grid; }

  bool operator==(const GroupSpec& o) const {
    return kind_ == o.kind_ && dim_ == o.dim_ && m_ == o.m_ && h_ == o.h_ &&
           time_ == o.time_;
  }

  void decode(std::int64_t idx, std::array<std::int32_t, kMaxAxes>& c) const {
    for (int a = axes() - 1; a >= 0; --a) {
      std::int64_t n = axis_points(a);
      c[a] = static_cast<std::int32_t>(idx % n);
      idx /= n;
    }
  }
  std::int64_t encode(const std::array<std::int32_t, kMaxAxes>& c) const {
    std::int64_t idx = 0;
    for (int a = 0; a < axes(); ++a) idx = idx * axis_points(a) + c[a];
    return idx;
  }

  // Centered integer offset along a truncated axis: c - floor(n/2).
  std::int32_t offset(int a, std::int32_t c) const {
    return c - static_cast<std::int32_t>(axis_points(a) / 2);
  }

  // Group addition; nullopt when a truncated sum leaves the box.
  std::optional<std::int64_t> add(std::int64_t a, std::int64_t b) const;
  std::optional<std::int64_t> neg(std::int64_t a) const;
  // -(a+b), the forced last coordinate of a hyperplane tuple.
  std::optional<std::int64_t> forced_third(std::int64_t a, std::int64_t b) const;
  std::optional<std::int64_t> forced_last(const std::int64_t* pts, int n) const;

  // Physical frequency values (spatial axes only) and time-frequency value.
  void xi(std::int64_t idx, double* out) const;
  double tau(std::int64_t idx) const;
  double xi_norm(std::int64_t idx) const;

  // Largest representable |xi| per axis and |tau|.
  double xi_extent() const;
  double tau_extent() const;

  std::string describe() const;

 private:
  GroupKind kind_ = GroupKind::cycle;
  int dim_ = 1;
  int m_ = 1;
  Rat h_ = 1;
  std::optional<TimeAxis> time_;
  std::int64_t total_ = 1;
  Rat measure_ = 1;
  double measure_d_ = 1.0;
  double hd_ = 1.0, htd_ = 1.0;
};

}  // namespace xsb
