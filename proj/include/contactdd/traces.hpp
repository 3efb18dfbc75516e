// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "contactdd/linalg.hpp"

namespace cdd {

/// Transmission data on the subdomain interface. Primal formulations carry a
/// 2-vector per interface node; mixed formulations a 2-vector per sample of
/// the active interface quadrature rule. Layout is sample-major (x, y).
struct TraceData {
  enum class Side { g12, g21 };
  Side side = Side::g12;
  int iteration = 0;
  Vec values;

  static TraceData zero(Side side, int n_samples) {
    return {side, 0, Vec::Zero(2 * n_samples)};
  }
};

}  // namespace cdd
