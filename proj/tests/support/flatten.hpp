#pragma once

#include <functional>

#include "deeppm/types.hpp"

namespace deeppm::testing {

/// Concatenates every parameter block of `params` (in for_each_block order).
template <typename Params>
VectorX flatten(const Params& params) {
  Index total = 0;
  params.for_each_block([&](const auto& block) { total += block.size(); });
  VectorX out(total);
  Index offset = 0;
  params.for_each_block([&](const auto& block) {
    for (Index i = 0; i < block.size(); ++i) out[offset + i] = block.data()[i];
    offset += block.size();
  });
  return out;
}

/// Inverse of flatten: writes `values` back into the blocks of `params`.
template <typename Params>
void unflatten(Params& params, const VectorX& values) {
  Index offset = 0;
  params.for_each_block([&](auto& block) {
    for (Index i = 0; i < block.size(); ++i) block.data()[i] = values[offset + i];
    offset += block.size();
  });
}

/// f(flat) evaluated after writing flat into a copy of `base`.
template <typename Params>
std::function<Scalar(const VectorX&)> as_flat_function(const Params& base, std::function<Scalar(const Params&)> f) {
  return [base, f](const VectorX& flat) {
    Params p = base;
    unflatten(p, flat);
    return f(p);
  };
}

}  // namespace deeppm::testing
