#pragma once

#include <vector>

#include "xsb/group.hpp"
#include "xsb/parallel.hpp"

namespace xsb {

// A complex-valued function on a discretized group.
struct GridFunction {
  GroupSpec group;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(GroupSpec g)
      : group(std::move(g)), values(static_cast<std::size_t>(group.total_points())) {}
  GridFunction(GroupSpec g, std::vector<cplx> v);

  static GridFunction constant(const GroupSpec& g, cplx c);
  static GridFunction indicator(const GroupSpec& g, const std::vector<std::int64_t>& pts);

  bool finite() const;
  bool is_zero() const;
};

// (sum |f|^2 * measure)^(1/2), pairwise-summed.
double l2_norm(const GridFunction& f);
double l2_norm_sq(const GridFunction& f);

}  // namespace xsb
