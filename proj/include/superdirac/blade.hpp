#pragma once

// Generator kernels on the exterior module, indexed by bitmask blades
// (bit i stands for dx^{i+1}). Coefficients may be plain numbers or jets; the
// pairing functor returns B(dx^i, dx^j) in whatever type multiplies them.

#include <bit>
#include <vector>

#include "superdirac/jet.hpp"

namespace superdirac {

using Blade = unsigned;

inline int blade_grade(Blade b) { return std::popcount(b); }

inline std::vector<int> blade_indices(Blade b) {
  std::vector<int> r;
  for (int i = 0; b; ++i, b >>= 1)
    if (b & 1u) r.push_back(i);
  return r;
}

inline Blade blade_of(const std::vector<int>& idx) {
  Blade b = 0;
  for (int i : idx) b |= 1u << i;
  return b;
}

// Sign of dx^a ^ dx^b against the sorted blade a|b, zero on overlap.
inline int wedge_sign(Blade a, Blade b) {
  if (a & b) return 0;
  int swaps = 0;
  for (Blade t = b; t; t &= t - 1) {
    const int j = std::countr_zero(t);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

// Number of set bits of b strictly below bit i.
inline int bits_below(Blade b, int i) { return std::popcount(b & ((1u << i) - 1u)); }

namespace detail {

template <class C>
C zero_coeff(const C& like) {
  if constexpr (is_jet<C>::value)
    return C(like.dim(), kMaxJetOrder, zero_like(like.value()));
  else
    return C(0);
}

}  // namespace detail

template <class C>
std::vector<C> epsilon_generator(int i, const std::vector<C>& in) {
  std::vector<C> out(in.size(), detail::zero_coeff(in[0]));
  for (Blade I = 0; I < in.size(); ++I) {
    if (I & (1u << i)) continue;
    C t = in[I];
    if (bits_below(I, i) & 1) t *= -1.0;
    out[I | (1u << i)] += t;
  }
  return out;
}

template <class C, class P>
std::vector<C> iota_generator(int i, const std::vector<C>& in, const P& pair) {
  std::vector<C> out(in.size(), detail::zero_coeff(in[0]));
  const int n = std::countr_zero(static_cast<unsigned>(in.size()));
  std::vector<std::decay_t<decltype(pair(0, 0))>> row;
  row.reserve(n);
  for (int j = 0; j < n; ++j) row.push_back(pair(i, j));
  for (Blade I = 1; I < in.size(); ++I) {
    int r = 0;
    for (Blade t = I; t; t &= t - 1, ++r) {
      const int j = std::countr_zero(t);
      auto term = row[j] * in[I];
      if (r & 1) term *= -1.0;
      out[I & ~(1u << j)] += term;
    }
  }
  return out;
}

template <class C, class P>
std::vector<C> clifford_generator(int i, const std::vector<C>& in, const P& pair) {
  std::vector<C> e = epsilon_generator(i, in);
  const std::vector<C> t = iota_generator(i, in, pair);
  for (size_t k = 0; k < e.size(); ++k) e[k] -= t[k];
  return e;
}

// c(q(dx^I)) applied to phi, from q(dx^I) = dx^{i1} q(dx^{I'}) + q(iota(dx^{i1}) dx^{I'}).
template <class C, class P>
std::vector<C> quantized_blade_apply(Blade I, const std::vector<C>& phi, const P& pair) {
  if (I == 0) return phi;
  const int i1 = std::countr_zero(I);
  const Blade rest = I & ~(1u << i1);
  std::vector<C> out = clifford_generator(i1, quantized_blade_apply(rest, phi, pair), pair);
  int r = 0;
  for (Blade t = rest; t; t &= t - 1, ++r) {
    const int j = std::countr_zero(t);
    const auto b = pair(i1, j);
    std::vector<C> sub = quantized_blade_apply(rest & ~(1u << j), phi, pair);
    for (size_t k = 0; k < out.size(); ++k) {
      auto term = b * sub[k];
      if (r & 1) term *= -1.0;
      out[k] += term;
    }
  }
  return out;
}

}  // namespace superdirac
