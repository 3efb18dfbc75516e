// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "contactdd/fem_primal.hpp"
#include "contactdd/linalg.hpp"

namespace cdd {

struct ZeroReference : InvalidArgument {
  explicit ZeroReference(const std::string& what) : InvalidArgument(what) {}
};

struct ErrorReport {
  double e_sigma = 0;  // relative stress error in the compliance energy norm
  double e_u = 0;      // relative displacement error in L2
  double residual = 0;
  int iterations = 0;
};

/// sqrt((r-i)^T M (r-i)) / sqrt(r^T M r) for an SPD weight M.
inline double relative_error_energy(const Vec& ref, const Vec& iter, const SpMat& M) {
  const Vec d = ref - iter;
  const double denom = ref.dot(M * ref);
  if (denom <= 0) throw ZeroReference("relative_error_energy: reference has zero norm");
  return std::sqrt(std::max(0.0, d.dot(M * d)) / denom);
}

inline double stress_error_A(const Vec& sigma_ref, const Vec& sigma_iter, const SpMat& M_A) {
  return relative_error_energy(sigma_ref, sigma_iter, M_A);
}

inline double displacement_error_L2(const Vec& u_ref, const Vec& u_iter, const SpMat& M_mass) {
  return relative_error_energy(u_ref, u_iter, M_mass);
}

/// One sample of the contact boundary: arc coordinate, normal displacement
/// and normal stress.
struct ContactSample {
  double y;
  double u_c;
  double sigma_c;
};

/// Contact trace of a primal solution; the normal stress is recovered from
/// the penalty relation sigma_c = -(1/delta) (u_c)^+.
inline std::vector<ContactSample> contact_trace_primal(const PrimalOperators& ops, const Vec& u,
                                                       double delta) {
  const Vec uc = ops.contact_values(u);
  std::vector<ContactSample> out(uc.size());
  for (int p = 0; p < uc.size(); ++p) {
    const double y = ops.space.mesh().vertex(ops.contact_vertex[p]).y();
    out[p] = {y, uc(p), -(std::max(uc(p), 0.0)) / delta};
  }
  return out;
}

/// max_p |sigma_c u_c| over the samples, for complementarity checks.
inline double complementarity_product(const std::vector<ContactSample>& trace) {
  double m = 0;
  for (const auto& s : trace) m = std::max(m, std::abs(s.sigma_c * s.u_c));
  return m;
}

inline double max_abs_sigma_c(const std::vector<ContactSample>& trace) {
  double m = 0;
  for (const auto& s : trace) m = std::max(m, std::abs(s.sigma_c));
  return m;
}

inline double max_abs_u_c(const std::vector<ContactSample>& trace) {
  double m = 0;
  for (const auto& s : trace) m = std::max(m, std::abs(s.u_c));
  return m;
}

}  // namespace cdd
