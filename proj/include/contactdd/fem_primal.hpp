// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "contactdd/linalg.hpp"
#include "contactdd/material.hpp"
#include "contactdd/mesh.hpp"
#include "contactdd/traces.hpp"

namespace cdd {

enum class Restriction { Omega, Omega1, Omega2 };

struct NewtonParams {
  double tol = 1e-12;  // relative algebraic residual
  int max_iter = 50;
};

using SourceFn = std::function<Eigen::Vector2d(double, double)>;

inline SourceFn zero_source() {
  return [](double, double) { return Eigen::Vector2d::Zero().eval(); };
}

/// Q1 vector space on the fine quads of a restriction, with homogeneous
/// Dirichlet dofs removed. Interface nodes stay free in the subdomain spaces
/// (the Dirichlet mask applies only where the subdomain boundary meets the
/// clamped part of the outer boundary).
class PrimalSpace {
public:
  PrimalSpace(const TwoScaleMesh& mesh, Restriction restriction, bool keep_dirichlet = false)
      : mesh_(&mesh), restriction_(restriction), dof_of_vertex_(mesh.n_vertices(), -1) {
    const int nf = mesh.nf(), cut = nf - mesh.refine();
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      const int i = mesh.vertex_i(v);
      const bool inside = restriction == Restriction::Omega ||
                          (restriction == Restriction::Omega1 && i <= cut) ||
                          (restriction == Restriction::Omega2 && i >= cut);
      if (!inside || (!keep_dirichlet && mesh.vertex_on_dirichlet(v))) continue;
      dof_of_vertex_[v] = 2 * static_cast<int>(vertices_.size());
      vertices_.push_back(v);
    }
    for (int q = 0; q < mesh.n_cells(); ++q) {
      const int sd = mesh.cell_subdomain(q);
      if (restriction == Restriction::Omega || (restriction == Restriction::Omega1 && sd == 1) ||
          (restriction == Restriction::Omega2 && sd == 2))
        cells_.push_back(q);
    }
  }

  const TwoScaleMesh& mesh() const { return *mesh_; }
  Restriction restriction() const { return restriction_; }
  int n_dofs() const { return 2 * static_cast<int>(vertices_.size()); }
  const std::vector<int>& cells() const { return cells_; }

  /// Base dof of a vertex (x component; y is +1), or -1 if constrained/outside.
  int dof(int vertex) const { return dof_of_vertex_[vertex]; }
  int dof(int vertex, int comp) const {
    const int d = dof_of_vertex_[vertex];
    return d < 0 ? -1 : d + comp;
  }
  const std::vector<int>& free_vertices() const { return vertices_; }

  /// Nodal values of a dof vector at a vertex (zero where constrained).
  Eigen::Vector2d value_at(const Vec& u, int vertex) const {
    const int d = dof_of_vertex_[vertex];
    return d < 0 ? Eigen::Vector2d::Zero().eval() : Eigen::Vector2d(u(d), u(d + 1));
  }

private:
  const TwoScaleMesh* mesh_;
  Restriction restriction_;
  std::vector<int> dof_of_vertex_;
  std::vector<int> vertices_;
  std::vector<int> cells_;
};

namespace detail {

/// Q1 shape values and reference gradients at a point of the unit square.
inline void q1_shape(double xi, double eta, double N[4], double dxi[4], double deta[4]) {
  N[0] = (1 - xi) * (1 - eta);
  N[1] = xi * (1 - eta);
  N[2] = xi * eta;
  N[3] = (1 - xi) * eta;
  dxi[0] = -(1 - eta);
  dxi[1] = (1 - eta);
  dxi[2] = eta;
  dxi[3] = -eta;
  deta[0] = -(1 - xi);
  deta[1] = -xi;
  deta[2] = xi;
  deta[3] = 1 - xi;
}

inline const double kGauss2[2] = {0.5 - 0.5 / 1.7320508075688772, 0.5 + 0.5 / 1.7320508075688772};

}  // namespace detail

/// Assembled matrices and vectors for one restriction of the primal problem.
struct PrimalOperators {
  PrimalSpace space;
  QuadRule iface_rule;
  SpMat K;        // stiffness on free dofs
  SpMat M_iface;  // quadrature interface mass on free dofs
  SpMat G_iface;  // pairing (free dofs) x (nodal interface values, 2 per node)
  SpMat M_mass;   // L2 mass on free dofs
  Vec b;          // load vector

  std::vector<int> contact_vertex;  // contact nodes, ascending y
  std::vector<int> contact_dof;     // x dof per contact node, -1 where constrained
  std::vector<double> contact_w;    // trapezoid weight per contact node

  int n_iface_nodes() const { return space.mesh().nf() + 1; }

  /// Nodal u values on the interface, node-major (x, y); zeros at clamped nodes.
  Vec interface_values(const Vec& u) const {
    const auto nodes = space.mesh().interface_nodes();
    Vec out = Vec::Zero(2 * nodes.size());
    for (size_t p = 0; p < nodes.size(); ++p) {
      const Eigen::Vector2d v = space.value_at(u, nodes[p]);
      out(2 * p) = v.x();
      out(2 * p + 1) = v.y();
    }
    return out;
  }

  /// Normal contact trace u_c = u . n_c at the contact nodes (n_c = (1,0)).
  Vec contact_values(const Vec& u) const {
    Vec out = Vec::Zero(contact_vertex.size());
    for (size_t p = 0; p < contact_vertex.size(); ++p)
      if (contact_dof[p] >= 0) out(p) = u(contact_dof[p]);
    return out;
  }

  /// Lumped penalty functional (1/delta) int_{Gamma_C} (u_c)^+ v_c applied to u.
  Vec penalty_residual(const Vec& u, double delta) const {
    Vec r = Vec::Zero(u.size());
    for (size_t p = 0; p < contact_vertex.size(); ++p) {
      const int d = contact_dof[p];
      if (d >= 0 && u(d) > 0) r(d) += contact_w[p] / delta * u(d);
    }
    return r;
  }
};

inline PrimalOperators assemble_primal(const TwoScaleMesh& mesh, const MaterialField& material,
                                       Restriction restriction, const SourceFn& f,
                                       QuadRule iface_rule = QuadRule::NewtonCotes,
                                       bool keep_dirichlet = false) {
  PrimalOperators ops{PrimalSpace(mesh, restriction, keep_dirichlet),
                      iface_rule, {}, {}, {}, {}, {}, {}, {}, {}};
  const PrimalSpace& sp = ops.space;
  const int n = sp.n_dofs();
  const double h = mesh.h();

  SparseBuilder K(n, n), M(n, n);
  Vec b = Vec::Zero(n);

  double Nv[4], dxi[4], deta[4];
  for (int q : sp.cells()) {
    const auto cv = mesh.cell_vertices(q);
    const Eigen::Matrix3d C = material.stiffness_eng(q);
    Eigen::Matrix<double, 8, 8> Ke = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 8> Me = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> be = Eigen::Matrix<double, 8, 1>::Zero();
    const Eigen::Vector2d p0 = mesh.vertex(cv[0]);
    for (double xi : detail::kGauss2)
      for (double eta : detail::kGauss2) {
        detail::q1_shape(xi, eta, Nv, dxi, deta);
        const double w = 0.25 * h * h;
        Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
        for (int a = 0; a < 4; ++a) {
          const double dNx = dxi[a] / h, dNy = deta[a] / h;
          B(0, 2 * a) = dNx;
          B(1, 2 * a + 1) = dNy;
          B(2, 2 * a) = dNy;
          B(2, 2 * a + 1) = dNx;
        }
        Ke += w * B.transpose() * C * B;
        const Eigen::Vector2d x = p0 + h * Eigen::Vector2d(xi, eta);
        const Eigen::Vector2d fv = f(x.x(), x.y());
        for (int a = 0; a < 4; ++a)
          for (int c = 0; c < 2; ++c) {
            be(2 * a + c) += w * Nv[a] * fv(c);
            for (int a2 = 0; a2 < 4; ++a2) Me(2 * a + c, 2 * a2 + c) += w * Nv[a] * Nv[a2];
          }
      }
    int ld[8];
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) ld[2 * a + c] = sp.dof(cv[a], c);
    for (int r = 0; r < 8; ++r) {
      if (ld[r] < 0) continue;
      b(ld[r]) += be(r);
      for (int c = 0; c < 8; ++c)
        if (ld[c] >= 0) {
          K.add(ld[r], ld[c], Ke(r, c));
          M.add(ld[r], ld[c], Me(r, c));
        }
    }
  }
  ops.K = K.finalize();
  ops.M_mass = M.finalize();
  ops.b = b;

  // interface quadrature matrices (skipped for the full-domain restriction,
  // which has no Robin term)
  const auto nodes = mesh.interface_nodes();
  const int nn = static_cast<int>(nodes.size());
  SparseBuilder Mi(n, n), Gi(n, 2 * nn);
  if (restriction != Restriction::Omega) {
    const auto rule = mesh.interface_quadrature(iface_rule);
    if (iface_rule == QuadRule::NewtonCotes) {
      for (int p = 0; p < nn; ++p) {
        const double w = rule.samples[p].w;
        for (int c = 0; c < 2; ++c) {
          const int d = sp.dof(nodes[p], c);
          if (d < 0) continue;
          Mi.add(d, d, w);
          Gi.add(d, 2 * p + c, w);
        }
      }
    } else {
      for (const auto& s : rule.samples) {
        const int e = s.segment;  // between nodes e and e+1
        const double t = s.y / mesh.h() - e;
        const double phi[2] = {1 - t, t};
        for (int a = 0; a < 2; ++a) {
          for (int c = 0; c < 2; ++c) {
            const int da = sp.dof(nodes[e + a], c);
            if (da < 0) continue;
            for (int bnode = 0; bnode < 2; ++bnode) {
              Gi.add(da, 2 * (e + bnode) + c, s.w * phi[a] * phi[bnode]);
              const int db = sp.dof(nodes[e + bnode], c);
              if (db >= 0) Mi.add(da, db, s.w * phi[a] * phi[bnode]);
            }
          }
        }
      }
    }
  }
  ops.M_iface = Mi.finalize();
  ops.G_iface = Gi.finalize();

  // contact boundary data (x = 1); only the full and Omega2 restrictions see it
  if (restriction != Restriction::Omega1) {
    ops.contact_vertex = mesh.contact_nodes();
    ops.contact_w = mesh.contact_nc_weights();
    ops.contact_dof.resize(ops.contact_vertex.size());
    for (size_t p = 0; p < ops.contact_vertex.size(); ++p)
      ops.contact_dof[p] = sp.dof(ops.contact_vertex[p], 0);
  }
  return ops;
}

/// Semismooth Newton for A u + (1/delta) P(u) = rhs with the nodal penalty
/// P(u) = sum_p w_p (u_{c,p})^+ on the given contact dofs. The slant
/// derivative of max(0,.) gives an active-set iteration; on this piecewise
/// linear system repetition of the active set is exact termination.
class ContactNewton {
public:
  ContactNewton(SpMat A, std::vector<int> contact_dofs, std::vector<double> contact_w,
                double delta)
      : A_(std::move(A)), dofs_(std::move(contact_dofs)), w_(std::move(contact_w)),
        delta_(delta) {
    if (delta_ <= 0) throw InvalidArgument("ContactNewton: delta must be positive");
  }

  Vec solve(const Vec& rhs, const NewtonParams& np = {}, const Vec* warm = nullptr) const {
    std::vector<char> active(dofs_.size(), 0);
    if (warm && warm->size() == A_.rows()) computeActive(*warm, active);
    Vec u;
    std::vector<char> prev;
    for (int it = 0; it < np.max_iter; ++it) {
      u = solverFor(active)->solve(rhs);
      prev = active;
      computeActive(u, active);
      const double res = residual(u, rhs);
      if (active == prev || res <= np.tol * std::max(1.0, rhs.norm())) {
        if (res <= np.tol * std::max(1.0, rhs.norm())) return u;
        // active set repeated but residual high: linear algebra failure
        throw NewtonDiverged("ContactNewton: stalled with residual " + std::to_string(res));
      }
    }
    throw NewtonDiverged("ContactNewton: no convergence within max_iter");
  }

  double residual(const Vec& u, const Vec& rhs) const {
    Vec r = A_ * u - rhs;
    for (size_t p = 0; p < dofs_.size(); ++p) {
      const int d = dofs_[p];
      if (d >= 0 && u(d) > 0) r(d) += w_[p] / delta_ * u(d);
    }
    return r.norm();
  }

  const SpMat& matrix() const { return A_; }

private:
  void computeActive(const Vec& u, std::vector<char>& active) const {
    for (size_t p = 0; p < dofs_.size(); ++p)
      active[p] = (dofs_[p] >= 0 && u(dofs_[p]) > 0) ? 1 : 0;
  }

  const SparseSolver* solverFor(const std::vector<char>& active) const {
    const std::string key(active.begin(), active.end());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second.get();
    SparseBuilder P(A_.rows(), A_.cols());
    for (size_t p = 0; p < dofs_.size(); ++p)
      if (active[p] && dofs_[p] >= 0) P.add(dofs_[p], dofs_[p], w_[p] / delta_);
    SpMat An = A_ + P.finalize();
    auto solver = std::make_unique<SparseSolver>(An, SparseSolver::Kind::LDLT);
    return cache_.emplace(key, std::move(solver)).first->second.get();
  }

  SpMat A_;
  std::vector<int> dofs_;
  std::vector<double> w_;
  double delta_;
  mutable std::map<std::string, std::unique_ptr<SparseSolver>> cache_;
};

/// Reference solution of the penalized contact problem on the whole domain.
inline Vec solve_monolithic_contact(const PrimalOperators& ops, double delta,
                                    const NewtonParams& np = {}) {
  ContactNewton newton(ops.K, ops.contact_dof, ops.contact_w, delta);
  return newton.solve(ops.b, np);
}

/// Linear Robin subproblem on subdomain 1.
inline Vec solve_sub1_primal(const PrimalOperators& ops, double alpha12, const TraceData& g12) {
  SpMat A = ops.K + alpha12 * ops.M_iface;
  SparseSolver solver(A, SparseSolver::Kind::LDLT);
  return solver.solve(Vec(ops.b + ops.G_iface * g12.values));
}

/// Contact subproblem on subdomain 2 (Robin on the interface plus penalty).
inline Vec solve_sub2_contact(const PrimalOperators& ops, double alpha21, const TraceData& g21,
                              double delta, const NewtonParams& np = {}) {
  SpMat A = ops.K + alpha21 * ops.M_iface;
  ContactNewton newton(A, ops.contact_dof, ops.contact_w, delta);
  return newton.solve(Vec(ops.b + ops.G_iface * g21.values), np);
}

/// Cached-factorization versions used by the iteration driver.
class PrimalSub1Solver {
public:
  PrimalSub1Solver(const PrimalOperators& ops, double alpha12)
      : ops_(&ops), solver_(SpMat(ops.K + alpha12 * ops.M_iface), SparseSolver::Kind::LDLT) {}
  Vec solve(const TraceData& g12) const {
    return solver_.solve(Vec(ops_->b + ops_->G_iface * g12.values));
  }

private:
  const PrimalOperators* ops_;
  SparseSolver solver_;
};

class PrimalSub2Solver {
public:
  PrimalSub2Solver(const PrimalOperators& ops, double alpha21, double delta)
      : ops_(&ops),
        newton_(SpMat(ops.K + alpha21 * ops.M_iface), ops.contact_dof, ops.contact_w, delta) {}
  Vec solve(const TraceData& g21, const NewtonParams& np, const Vec* warm) const {
    return newton_.solve(Vec(ops_->b + ops_->G_iface * g21.values), np, warm);
  }

private:
  const PrimalOperators* ops_;
  ContactNewton newton_;
};

/// Transmission data that makes the split subproblems stationary at the
/// monolithic solution: g* = alpha u + Mff^{-1} r on the interface nodes,
/// where r collects the subdomain residuals of the monolithic solution
/// tested with the interface nodal basis.
struct SplitTraces {
  TraceData g12, g21;
};

inline SplitTraces theorem31_split(const TwoScaleMesh& mesh, const MaterialField& material,
                                   const SourceFn& f, const PrimalOperators& ops_omega,
                                   const Vec& u_h, double alpha, double delta,
                                   QuadRule rule = QuadRule::NewtonCotes) {
  PrimalOperators o1 = assemble_primal(mesh, material, Restriction::Omega1, f, rule);
  PrimalOperators o2 = assemble_primal(mesh, material, Restriction::Omega2, f, rule);
  const auto nodes = mesh.interface_nodes();
  const int nn = static_cast<int>(nodes.size());

  auto restrict_to = [&](const PrimalSpace& sp) {
    Vec v = Vec::Zero(sp.n_dofs());
    for (int vert : sp.free_vertices())
      for (int c = 0; c < 2; ++c) {
        const int src = ops_omega.space.dof(vert, c);
        if (src >= 0) v(sp.dof(vert, c)) = u_h(src);
      }
    return v;
  };
  const Vec u1 = restrict_to(o1.space), u2 = restrict_to(o2.space);

  // subdomain residual functionals at the interface basis
  Vec r1 = o1.K * u1 - o1.b;
  Vec r2 = o2.K * u2 - o2.b + o2.penalty_residual(u2, delta);

  auto interface_rhs = [&](const PrimalOperators& o, const Vec& r, const Vec& u_loc) {
    Vec rhs = Vec::Zero(2 * nn);
    Vec au = o.M_iface * u_loc;
    for (int p = 0; p < nn; ++p)
      for (int c = 0; c < 2; ++c) {
        const int d = o.space.dof(nodes[p], c);
        if (d >= 0) rhs(2 * p + c) = r(d) + alpha * au(d);
      }
    return rhs;
  };

  // Solve the square nodal system M g = rhs with M(p',p) the pairing of the
  // nodal value at p against the basis at p' (diagonal under Newton-Cotes,
  // tridiagonal under Gauss). Clamped interface endpoints pin g to zero.
  auto solve_nodal = [&](const PrimalOperators& o, const Vec& rhs) {
    std::vector<int> node_of_dof(o.space.n_dofs(), -1);
    for (int p = 0; p < nn; ++p) {
      const int d = o.space.dof(nodes[p], 0);
      if (d >= 0) node_of_dof[d] = p;
    }
    SparseBuilder Mff(2 * nn, 2 * nn);
    for (int p = 0; p < nn; ++p)
      for (int c = 0; c < 2; ++c) {
        const int d = o.space.dof(nodes[p], c);
        if (d < 0) {
          Mff.add(2 * p + c, 2 * p + c, 1.0);
          continue;
        }
        for (SpMat::InnerIterator it(o.G_iface, 2 * p + c); it; ++it) {
          const int p2 = node_of_dof[it.row() - c];
          if (p2 >= 0) Mff.add(2 * p2 + c, 2 * p + c, it.value());
        }
      }
    return solve_sparse(Mff.finalize(), rhs);
  };

  SplitTraces out;
  out.g12 = {TraceData::Side::g12, 0, solve_nodal(o1, interface_rhs(o1, r1, u1))};
  out.g21 = {TraceData::Side::g21, 0, solve_nodal(o2, interface_rhs(o2, r2, u2))};
  return out;
}

}  // namespace cdd
