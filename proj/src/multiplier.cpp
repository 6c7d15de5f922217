#include "xsb/multiplier.hpp"

namespace xsb {

MultiplierK MultiplierK::from_rule(int k, GroupSpec g, Rule r, bool full_space,
                                   bool real_valued) {
  if (k < 1) throw std::invalid_argument("multiplier needs k >= 1");
  MultiplierK m;
  m.k_ = k;
  m.group_ = std::move(g);
  m.rule_ = std::move(r);
  m.full_space_ = full_space;
  m.real_valued_ = real_valued;
  return m;
}

MultiplierK MultiplierK::from_factors(GroupSpec g,
                                      std::vector<std::vector<cplx>> factors) {
  MultiplierK m;
  m.k_ = static_cast<int>(factors.size());
  if (m.k_ < 2) throw std::invalid_argument("multiplier needs k >= 2");
  for (const auto& f : factors)
    if (static_cast<std::int64_t>(f.size()) != g.total_points())
      throw std::invalid_argument("factor size mismatch");
  m.group_ = std::move(g);
  m.factors_ = std::move(factors);
  m.full_space_ = true;
  return m;
}

MultiplierK MultiplierK::from_support(int k, GroupSpec g, Support s) {
  if (s.k != k) throw std::invalid_argument("support arity mismatch");
  MultiplierK m;
  m.k_ = k;
  m.group_ = std::move(g);
  m.support_ = std::make_shared<Support>(std::move(s));
  return m;
}

MultiplierK MultiplierK::constant(int k, GroupSpec g, cplx c) {
  std::vector<std::vector<cplx>> factors(
      static_cast<std::size_t>(k),
      std::vector<cplx>(static_cast<std::size_t>(g.total_points()), 1.0));
  for (auto& v : factors[0]) v = c;
  auto m = from_factors(std::move(g), std::move(factors));
  m.real_valued_ = (c.imag() == 0.0);
  return m;
}

MultiplierK MultiplierK::dense3(GroupSpec g, std::vector<cplx> table) {
  std::int64_t t = g.total_points();
  if (static_cast<std::int64_t>(table.size()) != t * t)
    throw std::invalid_argument("dense3 table size mismatch");
  MultiplierK m;
  m.k_ = 3;
  m.group_ = std::move(g);
  m.dense3_ = std::move(table);
  return m;
}

cplx MultiplierK::eval(const std::int64_t* pts) const {
  if (!factors_.empty()) {
    cplx v = 1.0;
    for (int j = 0; j < k_; ++j) v *= factors_[j][static_cast<std::size_t>(pts[j])];
    return v;
  }
  if (!dense3_.empty())
    return dense3_[static_cast<std::size_t>(pts[0] * group_.total_points() + pts[1])];
  if (rule_) return rule_(pts);
  // Support-only multipliers: linear scan is fine for the small cases where
  // point evaluation is actually requested.
  if (support_) {
    for (std::size_t e = 0; e < support_->size(); ++e) {
      const std::int64_t* t = support_->tuple(e);
      bool match = true;
      for (int j = 0; j < k_ && match; ++j) match = (t[j] == pts[j]);
      if (match) return support_->values[e];
    }
    return {};
  }
  throw std::logic_error("multiplier has no evaluation backend");
}

const Support& MultiplierK::support(std::size_t budget) const {
  if (support_) return *support_;
  auto s = std::make_shared<Support>();
  s->k = k_;
  const std::int64_t total = group_.total_points();
  std::array<std::int64_t, 8> pts{};

  // Per-variable candidate lists: for factored multipliers only indices with
  // a nonzero factor can contribute.
  std::vector<std::vector<std::int64_t>> cand(static_cast<std::size_t>(k_ - 1));
  for (int j = 0; j + 1 < k_; ++j) {
    auto& c = cand[static_cast<std::size_t>(j)];
    c.reserve(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) {
      if (!factors_.empty() && factors_[static_cast<std::size_t>(j)]
                                       [static_cast<std::size_t>(i)] == cplx{})
        continue;
      c.push_back(i);
    }
  }

  bool any_empty = false;
  for (const auto& c : cand) any_empty = any_empty || c.empty();
  if (any_empty) {
    support_ = std::move(s);
    return *support_;
  }

  std::vector<std::size_t> at(static_cast<std::size_t>(k_ - 1), 0);
  bool done = false;
  while (!done) {
    for (int j = 0; j + 1 < k_; ++j)
      pts[static_cast<std::size_t>(j)] =
          cand[static_cast<std::size_t>(j)][at[static_cast<std::size_t>(j)]];
    auto last = group_.forced_last(pts.data(), k_ - 1);
    if (last) {
      pts[static_cast<std::size_t>(k_ - 1)] = *last;
      cplx v = eval(pts.data());
      if (v != cplx{}) {
        if (s->size() >= budget)
          throw std::runtime_error("multiplier support exceeds budget");
        s->push(pts.data(), v);
      }
    }
    int j = k_ - 2;
    while (j >= 0) {
      auto& aj = at[static_cast<std::size_t>(j)];
      if (++aj < cand[static_cast<std::size_t>(j)].size()) break;
      aj = 0;
      --j;
    }
    if (j < 0) done = true;
  }
  support_ = std::move(s);
  return *support_;
}

}  // namespace xsb
