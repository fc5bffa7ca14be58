#pragma once

#include <utility>
#include <vector>

#include "multinorm/abgroup.hpp"

namespace multinorm {

/// Basis bookkeeping for a square construction on generator pairs: entry p
/// is the pair (i, j) of generator indices with its cyclic order
/// gcd(d_i, d_j).
struct PairBasis {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Int> orders;
};

/// G (x) G on the basis g_i (x) g_j over all ordered pairs, renormalized to
/// invariant-factor form.  The encoder expands an element pair bilinearly.
struct TensorSquare {
  FinAbGroup source;
  PairBasis basis;
  FinAbGroup group;
  Renormalization renorm;

  std::vector<Int> encode_raw(const Element& a, const Element& b) const;
  Element encode(const Element& a, const Element& b) const;
};

/// G /\ G on the basis g_i /\ g_j, i < j; expanding a /\ b uses bilinearity
/// and antisymmetry, so swapping arguments negates the coordinates.
struct WedgeSquare {
  FinAbGroup source;
  PairBasis basis;
  FinAbGroup group;
  Renormalization renorm;

  std::vector<Int> encode_raw(const Element& a, const Element& b) const;
  Element encode(const Element& a, const Element& b) const;
};

TensorSquare tensor_square(const FinAbGroup& g);
WedgeSquare exterior_square(const FinAbGroup& g);

/// The induced map f /\ f between exterior squares: on pair bases it is given
/// by the 2x2 minors of f's matrix.
AbHom wedge_hom(const AbHom& f, const WedgeSquare& ws, const WedgeSquare& wt);
AbHom wedge_hom(const AbHom& f);

}  // namespace multinorm
