#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "xsb/grid_function.hpp"
#include "xsb/group.hpp"

namespace xsb {

// Nonzero hyperplane tuples of a multiplier: k point indices per entry plus
// the multiplier value there.  This is the working representation for the
// alternating-maximization and section kernels.
struct Support {
  int k = 0;
  std::vector<std::int64_t> tuples;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  const std::int64_t* tuple(std::size_t e) const { return &tuples[e * k]; }
  void push(const std::int64_t* pts, cplx v) {
    tuples.insert(tuples.end(), pts, pts + k);
    values.push_back(v);
  }
};

// A k-argument weight on the hyperplane Gamma_k(Z).  The evaluation backend
// is one of: a pure rule on point tuples, a per-variable factor product, a
// dense pair table (k=3), or an explicit support list.
class MultiplierK {
 public:
  using Rule = std::function<cplx(const std::int64_t*)>;

  MultiplierK() = default;

  static MultiplierK from_rule(int k, GroupSpec g, Rule r, bool full_space = false,
                               bool real_valued = false);
  // k = factors.size(); m(xi) = prod_j factors[j][xi_j].
  static MultiplierK from_factors(GroupSpec g, std::vector<std::vector<cplx>> factors);
  static MultiplierK from_support(int k, GroupSpec g, Support s);
  static MultiplierK constant(int k, GroupSpec g, cplx c);
  // k=3 dense table indexed by i1 * total + i2 (xi3 forced).
  static MultiplierK dense3(GroupSpec g, std::vector<cplx> table);

  int k() const { return k_; }
  const GroupSpec& group() const { return group_; }
  bool full_space() const { return full_space_; }
  bool real_valued() const { return real_valued_; }
  bool factored() const { return !factors_.empty(); }
  const std::vector<std::vector<cplx>>& factors() const { return factors_; }

  // Value at a hyperplane tuple of k point indices.
  cplx eval(const std::int64_t* pts) const;

  // Enumerates the nonzero hyperplane tuples (cached).  `budget` caps the
  // entry count; exceeding it is an error.
  const Support& support(std::size_t budget = kDefaultBudget) const;
  bool has_precomputed_support() const { return support_ != nullptr; }

  static constexpr std::size_t kDefaultBudget = std::size_t(1) << 25;

 private:
  int k_ = 0;
  GroupSpec group_;
  Rule rule_;
  std::vector<std::vector<cplx>> factors_;
  std::vector<cplx> dense3_;
  bool full_space_ = false;
  bool real_valued_ = false;
  mutable std::shared_ptr<Support> support_;
};

}  // namespace xsb
