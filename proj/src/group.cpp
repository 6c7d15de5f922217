#include "xsb/group.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xsb {

GroupSpec::GroupSpec(GroupKind kind, int dim, int points_per_axis, Rat spacing,
                     std::optional<TimeAxis> time)
    : kind_(kind), dim_(dim), m_(points_per_axis), h_(std::move(spacing)),
      time_(std::move(time)) {
  if (dim_ < 1 || dim_ + (time_ ? 1 : 0) > kMaxAxes)
    throw std::invalid_argument("unsupported dimension");
  if (m_ < 1) throw std::invalid_argument("points_per_axis must be positive");
  if (h_ <= 0) throw std::invalid_argument("spacing must be positive");
  if (kind_ != GroupKind::real_grid && h_ != 1)
    throw std::invalid_argument("counting measure uses spacing 1");
  if (time_ && (time_->points < 1 || time_->spacing <= 0))
    throw std::invalid_argument("bad time axis");
  total_ = 1;
  measure_ = 1;
  for (int a = 0; a < dim_; ++a) {
    total_ *= m_;
    measure_ *= h_;
  }
  if (time_) {
    total_ *= time_->points;
    measure_ *= time_->spacing;
  }
  measure_d_ = to_double(measure_);
  hd_ = to_double(h_);
  htd_ = time_ ? to_double(time_->spacing) : 1.0;
}

std::optional<std::int64_t> GroupSpec::add(std::int64_t a, std::int64_t b) const {
  std::array<std::int32_t, kMaxAxes> ca{}, cb{};
  decode(a, ca);
  decode(b, cb);
  for (int ax = 0; ax < axes(); ++ax) {
    std::int64_t n = axis_points(ax);
    bool trunc = !modular() || ax >= dim_;
    if (!trunc) {
      ca[ax] = static_cast<std::int32_t>((ca[ax] + cb[ax]) % n);
    } else {
      std::int32_t o = offset(ax, ca[ax]) + offset(ax, cb[ax]);
      std::int32_t c = o + static_cast<std::int32_t>(n / 2);
      if (c < 0 || c >= n) return std::nullopt;
      ca[ax] = c;
    }
  }
  return encode(ca);
}

std::optional<std::int64_t> GroupSpec::neg(std::int64_t a) const {
  std::array<std::int32_t, kMaxAxes> c{};
  decode(a, c);
  for (int ax = 0; ax < axes(); ++ax) {
    std::int64_t n = axis_points(ax);
    bool trunc = !modular() || ax >= dim_;
    if (!trunc) {
      c[ax] = static_cast<std::int32_t>((n - c[ax]) % n);
    } else {
      std::int32_t o = -offset(ax, c[ax]);
      std::int32_t cc = o + static_cast<std::int32_t>(n / 2);
      if (cc < 0 || cc >= n) return std::nullopt;
      c[ax] = cc;
    }
  }
  return encode(c);
}

std::optional<std::int64_t> GroupSpec::forced_third(std::int64_t a,
                                                    std::int64_t b) const {
  const std::int64_t other[2] = {a, b};
  return forced_last(other, 2);
}

// Only the forced coordinate itself is range-checked: intermediate sums are
// accumulated exactly in offset space.
std::optional<std::int64_t> GroupSpec::forced_last(const std::int64_t* pts,
                                                   int n) const {
  std::array<std::int64_t, kMaxAxes> acc{};
  std::array<std::int32_t, kMaxAxes> c{};
  for (int i = 0; i < n; ++i) {
    decode(pts[i], c);
    for (int ax = 0; ax < axes(); ++ax) {
      bool trunc = !modular() || ax >= dim_;
      acc[static_cast<std::size_t>(ax)] +=
          trunc ? offset(ax, c[static_cast<std::size_t>(ax)])
                : c[static_cast<std::size_t>(ax)];
    }
  }
  for (int ax = 0; ax < axes(); ++ax) {
    std::int64_t nax = axis_points(ax);
    bool trunc = !modular() || ax >= dim_;
    if (!trunc) {
      std::int64_t r = (-acc[static_cast<std::size_t>(ax)]) % nax;
      if (r < 0) r += nax;
      c[static_cast<std::size_t>(ax)] = static_cast<std::int32_t>(r);
    } else {
      std::int64_t o = -acc[static_cast<std::size_t>(ax)];
      std::int64_t cc = o + nax / 2;
      if (cc < 0 || cc >= nax) return std::nullopt;
      c[static_cast<std::size_t>(ax)] = static_cast<std::int32_t>(cc);
    }
  }
  return encode(c);
}

void GroupSpec::xi(std::int64_t idx, double* out) const {
  std::array<std::int32_t, kMaxAxes> c{};
  decode(idx, c);
  for (int a = 0; a < dim_; ++a) {
    if (kind_ == GroupKind::real_grid)
      out[a] = offset(a, c[a]) * hd_;
    else
      out[a] = static_cast<double>(c[a]);
  }
}

double GroupSpec::tau(std::int64_t idx) const {
  if (!time_) return 0.0;
  std::array<std::int32_t, kMaxAxes> c{};
  decode(idx, c);
  return offset(dim_, c[dim_]) * htd_;
}

double GroupSpec::xi_norm(std::int64_t idx) const {
  double v[kMaxAxes];
  xi(idx, v);
  double s = 0;
  for (int a = 0; a < dim_; ++a) s += v[a] * v[a];
  return std::sqrt(s);
}

double GroupSpec::xi_extent() const {
  if (kind_ == GroupKind::real_grid) return (m_ / 2) * hd_;
  return static_cast<double>(m_ - 1);
}

double GroupSpec::tau_extent() const {
  if (!time_) return 0.0;
  return (time_->points / 2) * htd_;
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  os << kind_name(kind_) << "(M=" << m_ << ",d=" << dim_ << ",h=" << rat_str(h_);
  if (time_) os << ",Mt=" << time_->points << ",ht=" << rat_str(time_->spacing);
  os << ")";
  return os.str();
}

}  // namespace xsb
