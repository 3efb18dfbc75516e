// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "contactdd/linalg.hpp"
#include "contactdd/mesh.hpp"

namespace cdd {

struct InvalidPoisson : InvalidArgument {
  explicit InvalidPoisson(const std::string& what) : InvalidArgument(what) {}
};
struct UnknownModel : InvalidArgument {
  explicit UnknownModel(const std::string& what) : InvalidArgument(what) {}
};

struct LameConstants {
  double lambda;
  double mu;
};

/// lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu)).
/// nu = 0 is accepted (lambda = 0); nu >= 0.5 is rejected.
inline LameConstants lame_from_engineering(double E, double nu) {
  if (E <= 0) throw InvalidArgument("lame_from_engineering: E must be positive");
  if (nu < 0 || nu >= 0.5) throw InvalidPoisson("lame_from_engineering: need 0 <= nu < 0.5");
  return {E * nu / ((1 + nu) * (1 - 2 * nu)), E / (2 * (1 + nu))};
}

/// Voigt stiffness acting on tensor strain (e11, e22, e12).
inline Eigen::Matrix3d stiffness_voigt(double lambda, double mu) {
  Eigen::Matrix3d C;
  C << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, 2 * mu;
  return C;
}

/// Inverse of stiffness_voigt; maps stress (s11, s22, s12) to strain.
inline Eigen::Matrix3d compliance_voigt(double lambda, double mu) {
  if (mu <= 0) throw InvalidArgument("compliance_voigt: mu must be positive");
  if (lambda < 0) throw InvalidArgument("compliance_voigt: lambda must be nonnegative");
  const double det = (lambda + 2 * mu) * (lambda + 2 * mu) - lambda * lambda;
  Eigen::Matrix3d A;
  A << (lambda + 2 * mu) / det, -lambda / det, 0, -lambda / det, (lambda + 2 * mu) / det, 0, 0, 0,
      1.0 / (2 * mu);
  return A;
}

/// Heterogeneity pattern: a background, a list of covering shapes (later
/// entries win), and a fixed override for subdomain 2.
struct PatternSpec {
  struct Region {
    double E = 1.0;
    double nu = 0.35;
  };
  enum class Kind { Rectangle, Channel };
  struct Shape {
    Kind kind = Kind::Rectangle;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // closed box in unit coordinates
    double E = 1.0;
    double nu = 0.35;
    bool covers(const Eigen::Vector2d& p) const {
      return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
    }
  };
  Region background;
  std::vector<Shape> shapes;
  Region omega2{1.0, 0.35};
};

/// Cellwise-constant coefficients on the fine grid with derived Voigt
/// matrices and the coarse-scale weight k H^{-2}, k = lambda + 2 mu.
class MaterialField {
public:
  MaterialField(const TwoScaleMesh& mesh, const PatternSpec& spec) {
    const int n = mesh.n_cells();
    E_.resize(n);
    nu_.resize(n);
    lambda_.resize(n);
    mu_.resize(n);
    inv_H2_ = 1.0 / (mesh.H() * mesh.H());
    for (int q = 0; q < n; ++q) {
      double E = spec.background.E, nu = spec.background.nu;
      if (mesh.cell_subdomain(q) == 2) {
        E = spec.omega2.E;
        nu = spec.omega2.nu;
      } else {
        const Eigen::Vector2d c = mesh.cell_centroid(q);
        for (const auto& s : spec.shapes)
          if (s.covers(c)) {
            E = s.E;
            nu = s.nu;
          }
      }
      const auto lame = lame_from_engineering(E, nu);
      E_[q] = E;
      nu_[q] = nu;
      lambda_[q] = lame.lambda;
      mu_[q] = lame.mu;
    }
  }

  int n_cells() const { return static_cast<int>(E_.size()); }
  double E(int q) const { return E_[q]; }
  double nu(int q) const { return nu_[q]; }
  double lambda(int q) const { return lambda_[q]; }
  double mu(int q) const { return mu_[q]; }

  Eigen::Matrix3d stiffness(int q) const { return stiffness_voigt(lambda_[q], mu_[q]); }
  Eigen::Matrix3d compliance(int q) const { return compliance_voigt(lambda_[q], mu_[q]); }

  /// Engineering-strain stiffness (e11, e22, gamma12): same energy as the
  /// tensor form, convenient for B-matrix assembly.
  Eigen::Matrix3d stiffness_eng(int q) const {
    Eigen::Matrix3d C;
    const double l = lambda_[q], m = mu_[q];
    C << l + 2 * m, l, 0, l, l + 2 * m, 0, 0, 0, m;
    return C;
  }

  /// Weight of the stress-energy inner product (A s) : t in Voigt form,
  /// i.e. compliance() right-multiplied by diag(1,1,2); symmetric.
  Eigen::Matrix3d compliance_energy(int q) const {
    Eigen::Matrix3d W = compliance(q);
    W.col(2) *= 2.0;
    return W;
  }

  double k(int q) const { return lambda_[q] + 2 * mu_[q]; }
  double k_tilde(int q) const { return k(q) * inv_H2_; }

private:
  std::vector<double> E_, nu_, lambda_, mu_;
  double inv_H2_ = 1.0;
};

inline MaterialField build_material(const TwoScaleMesh& mesh, const PatternSpec& spec) {
  return MaterialField(mesh, spec);
}

/// Canned heterogeneity layouts: channels plus inclusions of material
/// (E1, nu1) over a (E2, nu2) background, drawn on a 1/32 lattice.
inline PatternSpec builtin_pattern(const std::string& name, double E1, double nu1, double E2,
                                   double nu2) {
  PatternSpec spec;
  spec.background = {E2, nu2};
  spec.omega2 = {1.0, 0.35};
  auto rect = [&](double x0, double y0, double x1, double y1) {
    spec.shapes.push_back({PatternSpec::Kind::Rectangle, x0, y0, x1, y1, E1, nu1});
  };
  auto hchan = [&](double y0, double y1) {
    spec.shapes.push_back({PatternSpec::Kind::Channel, 0.0, y0, 1.0, y1, E1, nu1});
  };
  auto vchan = [&](double x0, double x1) {
    spec.shapes.push_back({PatternSpec::Kind::Channel, x0, 0.0, x1, 1.0, E1, nu1});
  };
  const double u = 1.0 / 32.0;
  if (name == "model1") {
    hchan(7 * u, 8 * u);
    hchan(15 * u, 16 * u);
    hchan(23 * u, 24 * u);
    vchan(10 * u, 11 * u);
    vchan(20 * u, 21 * u);
    rect(2 * u, 2 * u, 5 * u, 5 * u);
    rect(26 * u, 2 * u, 29 * u, 5 * u);
    rect(2 * u, 26 * u, 5 * u, 29 * u);
    rect(26 * u, 11 * u, 29 * u, 14 * u);
    rect(14 * u, 27 * u, 17 * u, 30 * u);
  } else if (name == "model2") {
    hchan(3 * u, 4 * u);
    hchan(17 * u, 18 * u);
    hchan(27 * u, 28 * u);
    vchan(5 * u, 6 * u);
    vchan(14 * u, 15 * u);
    vchan(24 * u, 25 * u);
    rect(8 * u, 8 * u, 12 * u, 12 * u);
    rect(18 * u, 21 * u, 22 * u, 25 * u);
    rect(26 * u, 6 * u, 29 * u, 9 * u);
    rect(2 * u, 21 * u, 5 * u, 24 * u);
  } else {
    throw UnknownModel("builtin_pattern: unknown model '" + name + "'");
  }
  return spec;
}

}  // namespace cdd
