#include "multinorm/wedge.hpp"

#include "multinorm/errors.hpp"

namespace multinorm {

namespace {

std::vector<Int> reduce_raw(std::vector<Int> v, const std::vector<Int>& orders) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(v[i], orders[i]);
  return v;
}

}  // namespace

std::vector<Int> TensorSquare::encode_raw(const Element& a, const Element& b) const {
  Element ra = source.reduce(a), rb = source.reduce(b);
  std::vector<Int> out(basis.pairs.size());
  for (std::size_t p = 0; p < basis.pairs.size(); ++p)
    out[p] = ra[basis.pairs[p].first] * rb[basis.pairs[p].second];
  return reduce_raw(std::move(out), basis.orders);
}

Element TensorSquare::encode(const Element& a, const Element& b) const {
  return group.reduce(apply(renorm.raw_to_canon, encode_raw(a, b)));
}

std::vector<Int> WedgeSquare::encode_raw(const Element& a, const Element& b) const {
  Element ra = source.reduce(a), rb = source.reduce(b);
  std::vector<Int> out(basis.pairs.size());
  for (std::size_t p = 0; p < basis.pairs.size(); ++p) {
    auto [i, j] = basis.pairs[p];
    out[p] = ra[i] * rb[j] - ra[j] * rb[i];
  }
  return reduce_raw(std::move(out), basis.orders);
}

Element WedgeSquare::encode(const Element& a, const Element& b) const {
  return group.reduce(apply(renorm.raw_to_canon, encode_raw(a, b)));
}

TensorSquare tensor_square(const FinAbGroup& g) {
  const auto& d = g.invariant_factors();
  PairBasis basis;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) {
      basis.pairs.emplace_back(i, j);
      basis.orders.push_back(gcd_int(d[i], d[j]));
    }
  Renormalization ren = renormalize_orders(basis.orders);
  return TensorSquare{g, std::move(basis), ren.group, std::move(ren)};
}

WedgeSquare exterior_square(const FinAbGroup& g) {
  const auto& d = g.invariant_factors();
  PairBasis basis;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      basis.pairs.emplace_back(i, j);
      basis.orders.push_back(gcd_int(d[i], d[j]));
    }
  Renormalization ren = renormalize_orders(basis.orders);
  return WedgeSquare{g, std::move(basis), ren.group, std::move(ren)};
}

AbHom wedge_hom(const AbHom& f, const WedgeSquare& ws, const WedgeSquare& wt) {
  if (!(ws.source == f.source()) || !(wt.source == f.target()))
    throw input_error("wedge_hom square mismatch");
  const IntMatrix& m = f.matrix();
  IntMatrix raw(wt.basis.pairs.size(), ws.basis.pairs.size());
  for (std::size_t q = 0; q < ws.basis.pairs.size(); ++q) {
    auto [i, j] = ws.basis.pairs[q];
    for (std::size_t p = 0; p < wt.basis.pairs.size(); ++p) {
      auto [k, l] = wt.basis.pairs[p];
      raw(p, q) = m(k, i) * m(l, j) - m(l, i) * m(k, j);
    }
  }
  IntMatrix canon = wt.renorm.raw_to_canon * raw * ws.renorm.canon_to_raw;
  return AbHom(ws.group, wt.group, std::move(canon));
}

AbHom wedge_hom(const AbHom& f) {
  return wedge_hom(f, exterior_square(f.source()), exterior_square(f.target()));
}

}  // namespace multinorm
