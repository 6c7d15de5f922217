#include "xsb/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace xsb {

GridFunction::GridFunction(GroupSpec g, std::vector<cplx> v)
    : group(std::move(g)), values(std::move(v)) {
  if (static_cast<std::int64_t>(values.size()) != group.total_points())
    throw std::invalid_argument("value count does not match group size");
}

GridFunction GridFunction::constant(const GroupSpec& g, cplx c) {
  GridFunction f(g);
  for (auto& v : f.values) v = c;
  return f;
}

GridFunction GridFunction::indicator(const GroupSpec& g,
                                     const std::vector<std::int64_t>& pts) {
  GridFunction f(g);
  for (auto p : pts) f.values[static_cast<std::size_t>(p)] = 1.0;
  return f;
}

bool GridFunction::finite() const {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool GridFunction::is_zero() const {
  for (const auto& v : values)
    if (v != cplx{}) return false;
  return true;
}

double l2_norm_sq(const GridFunction& f) {
  std::vector<double> sq(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) sq[i] = std::norm(f.values[i]);
  return pairwise_sum(sq) * f.group.point_measure_d();
}

double l2_norm(const GridFunction& f) { return std::sqrt(l2_norm_sq(f)); }

}  // namespace xsb
