// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "contactdd/material.hpp"

using namespace cdd;

TEST_CASE("Lame constants from engineering parameters", "[material]") {
  auto l = lame_from_engineering(1.0, 0.35);
  REQUIRE(l.lambda == Catch::Approx(0.35 / (1.35 * 0.30)).epsilon(1e-12));
  REQUIRE(l.lambda == Catch::Approx(0.864198).epsilon(1e-5));
  REQUIRE(l.mu == Catch::Approx(0.370370).epsilon(1e-5));

  auto l0 = lame_from_engineering(1.0, 0.0);  // degenerate but accepted
  REQUIRE(l0.lambda == 0.0);
  REQUIRE(l0.mu == Catch::Approx(0.5));

  auto lhi = lame_from_engineering(1000.0, 0.49);
  REQUIRE(lhi.lambda == Catch::Approx(16442.95).epsilon(1e-5));
  REQUIRE(lhi.mu == Catch::Approx(335.570).epsilon(1e-5));

  REQUIRE_THROWS_AS(lame_from_engineering(1.0, 0.5), InvalidPoisson);
  REQUIRE_THROWS_AS(lame_from_engineering(-1.0, 0.3), InvalidArgument);
}

TEST_CASE("Voigt compliance inverts the stiffness", "[material]") {
  // lambda=0, mu=1/2 decouples: C = I
  Eigen::Matrix3d A0 = compliance_voigt(0.0, 0.5);
  REQUIRE((A0 - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-14);

  Eigen::Matrix3d A1 = compliance_voigt(1.0, 1.0);
  Eigen::Matrix3d expected;
  expected << 3.0 / 8, -1.0 / 8, 0, -1.0 / 8, 3.0 / 8, 0, 0, 0, 0.5;
  REQUIRE((A1 - expected).cwiseAbs().maxCoeff() <= 1e-14);

  for (auto [lambda, mu] : {std::pair{0.86, 0.37}, {16442.95, 335.57}, {0.0, 2.0}}) {
    Eigen::Matrix3d AC = compliance_voigt(lambda, mu) * stiffness_voigt(lambda, mu);
    REQUIRE((AC - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("compliance is SPD with bounded eigenvalues", "[material]") {
  for (auto [lambda, mu] : {std::pair{1.0, 1.0}, {16442.95, 335.57}, {0.5, 0.25}}) {
    Eigen::Matrix3d A = compliance_voigt(lambda, mu);
    REQUIRE((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A);
    REQUIRE(es.eigenvalues().minCoeff() > 0);
    REQUIRE(es.eigenvalues().maxCoeff() <= 1.0 / (2 * mu) + 1e-12);
  }
}

TEST_CASE("build_material resolves covering shapes and the subdomain override", "[material]") {
  TwoScaleMesh mesh = build_mesh(8, 4);

  PatternSpec uniform;
  uniform.background = {2.0, 0.3};
  uniform.omega2 = {2.0, 0.3};
  MaterialField f0 = build_material(mesh, uniform);
  for (int q = 0; q < mesh.n_cells(); ++q) REQUIRE(f0.E(q) == 2.0);

  PatternSpec spec;
  spec.background = {1.0, 0.35};
  spec.shapes.push_back({PatternSpec::Kind::Rectangle, 0.0, 0.0, 0.5, 0.5, 1e3, 0.35});
  spec.omega2 = {1.0, 0.35};
  MaterialField f = build_material(mesh, spec);
  for (int q = 0; q < mesh.n_cells(); ++q) {
    const auto c = mesh.cell_centroid(q);
    if (mesh.cell_subdomain(q) == 2)
      REQUIRE(f.E(q) == 1.0);
    else if (c.x() < 0.5 && c.y() < 0.5)
      REQUIRE(f.E(q) == 1e3);
    else
      REQUIRE(f.E(q) == 1.0);
  }
}

TEST_CASE("builtin patterns realize the requested contrast in subdomain 1", "[material]") {
  TwoScaleMesh mesh = build_mesh(16, 4);
  for (const char* name : {"model1", "model2"}) {
    MaterialField f = build_material(mesh, builtin_pattern(name, 1e3, 0.35, 1.0, 0.35));
    double emin = 1e300, emax = 0;
    for (int q = 0; q < mesh.n_cells(); ++q) {
      if (mesh.cell_subdomain(q) != 1) continue;
      emin = std::min(emin, f.E(q));
      emax = std::max(emax, f.E(q));
    }
    REQUIRE(emax / emin == Catch::Approx(1e3));
  }
  REQUIRE_THROWS_AS(builtin_pattern("nope", 1, 0.3, 1, 0.3), UnknownModel);
}

TEST_CASE("k_tilde scales as H^-2", "[material]") {
  PatternSpec spec;  // uniform
  TwoScaleMesh coarse = build_mesh(8, 4);
  TwoScaleMesh fine = build_mesh(16, 4);
  MaterialField mc = build_material(coarse, spec);
  MaterialField mf = build_material(fine, spec);
  // same (lambda, mu) everywhere; halving H multiplies k_tilde by 4
  REQUIRE(mf.k_tilde(0) == Catch::Approx(4.0 * mc.k_tilde(0)));
  REQUIRE(mc.k(0) == Catch::Approx(mc.lambda(0) + 2 * mc.mu(0)));
}

TEST_CASE("compliance_energy is the symmetric energy weight", "[material]") {
  TwoScaleMesh mesh = build_mesh(4, 2);
  PatternSpec spec;
  spec.background = {3.0, 0.25};
  MaterialField f = build_material(mesh, spec);
  const Eigen::Matrix3d W = f.compliance_energy(0);
  REQUIRE((W - W.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  // (A s):t for s = t = pure shear s12=1 equals 2 * A33 = 1/mu
  Eigen::Vector3d shear(0, 0, 1);
  REQUIRE(shear.dot(W * shear) == Catch::Approx(1.0 / f.mu(0)));
}
