#pragma once

#include <array>
#include <string>

#include "xsb/dyadic.hpp"

namespace xsb {

enum class Family { kdv_r, kdv_t, wave, schro_ppp, schro_ppm };

const char* family_name(Family f);
Family family_from_name(const std::string& s);

// Dyadic block parameters, stored as log2 exponents: frequencies N_j = 2^n,
// modulations L_j = 2^l (l >= 0), resonance magnitude H = 2^h.
struct BlockParams {
  std::array<long, 3> n{0, 0, 0};
  std::array<long, 3> l{0, 0, 0};
  long h = 0;
  std::array<int, 3> signs{+1, +1, +1};
  int dim = 1;
  bool periodic = false;
  Rat eps = Rat(1, 20);

  static BlockParams from_values(double n1, double n2, double n3, double l1, double l2,
                                 double l3, double hh);

  long nmax() const;
  long nmed() const;
  long nmin() const;
  long lmax() const;
  long lmed() const;
  long lmin() const;

  std::string describe() const;
};

struct SymbolicPiece {
  DyadicRegion guard;       // constraints that held at this parameter point
  DyadicMonomial monomial;  // in symbols N1,N2,N3,L1,L2,L3,H
  Rat log2_const = 0;
};

struct BlockBound {
  double value = 0.0;
  Rat log2_value = 0;  // meaningful when value > 0
  bool vanishes = false;
  std::string case_label;
  std::vector<SymbolicPiece> symbolic;

  // Evaluates each symbolic piece at the parameter point; all must equal
  // log2_value exactly.
  bool symbolic_consistent(const BlockParams& p) const;
};

// Closed-form dyadic block bounds.  Case selection: frequency-pattern
// comparisons treat ~ as |dlog2| <= 1 and >> as dlog2 >= 2; modulation and
// resonance ties are exact dyadic equalities.  Vanishing checks use factor-4
// slack windows matched to the block support geometry.
BlockBound kdv_block(const BlockParams& p);
BlockBound wave_block(const BlockParams& p);
BlockBound schro_ppp_block(const BlockParams& p);
BlockBound schro_ppm_block(const BlockParams& p);

BlockBound block_bound(Family f, const BlockParams& p);

// Bound for the interaction of nearly orthogonal frequencies:
// r^(d/2) theta^(1/2) min(1, R theta / r)^(1/2 - eps); eps = 0 when d = 2.
double rotate_bound(double big_r, double small_r, double theta, int dim, const Rat& eps);

// min of the transversality estimate sqrt(L1 L2 / theta * proj) and the
// crude bound sqrt(min(L1,L2) min(|E1|,|E2|)).
double transversality_bound(double l1, double l2, double theta, double proj_measure,
                            double e1_measure, double e2_measure);

// Wave/Schrodinger sign normalization to (+,+,-): a permutation moving the
// odd sign to slot 3 plus an optional global sign flip (time reversal).
struct SignNormalization {
  std::array<int, 3> perm{0, 1, 2};  // new index j takes old index perm[j]
  bool time_reversed = false;
  bool all_equal = false;
};
SignNormalization normalize_signs(const std::array<int, 3>& signs);

}  // namespace xsb
