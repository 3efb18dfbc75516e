// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "contactdd/linalg.hpp"

namespace cdd {

struct InvalidResolution : InvalidArgument {
  explicit InvalidResolution(const std::string& what) : InvalidArgument(what) {}
};
struct NotInOmega1 : InvalidArgument {
  explicit NotInOmega1(const std::string& what) : InvalidArgument(what) {}
};

enum class QuadRule { NewtonCotes, Gauss };

/// One sample point of an interface quadrature rule on the vertical line
/// x = 1-H (the subdomain interface), ordered by y.
struct InterfaceSample {
  double y;
  double w;
  int segment;  // fine interface segment index; for nodal rules the node index
};

struct InterfaceRule {
  QuadRule rule;
  std::vector<InterfaceSample> samples;
  int n() const { return static_cast<int>(samples.size()); }
};

/// m-layer coarse-cell extension of a coarse cell, clipped to subdomain 1.
struct Oversample {
  int center;                 // coarse cell index
  int layers;                 // m
  std::vector<int> members;   // coarse cell indices, sorted
  int ci_lo, ci_hi, cj_lo, cj_hi;  // inclusive coarse index bounds of the block
};

/// Structured two-scale grid on the unit square. Coarse cells are nc x nc
/// quads of width H = 1/nc; each is refined into `refine` x `refine` fine
/// quads of width h. Subdomain 2 is the last coarse column [1-H,1]x[0,1],
/// which carries the contact boundary at x = 1; the other three sides are
/// clamped. Fine quads are split along the SW-NE diagonal into two triangles
/// for the stress element.
class TwoScaleMesh {
public:
  TwoScaleMesh(int nc, int refine) : nc_(nc), refine_(refine), nf_(nc * refine) {
    if (nc < 4) throw InvalidResolution("TwoScaleMesh: need at least 4 coarse cells per side");
    if (refine < 2) throw InvalidResolution("TwoScaleMesh: refine must be >= 2");
    H_ = 1.0 / nc_;
    h_ = 1.0 / nf_;
  }

  int nc() const { return nc_; }
  int refine() const { return refine_; }
  int nf() const { return nf_; }
  double H() const { return H_; }
  double h() const { return h_; }

  // --- fine vertices -------------------------------------------------------
  int n_vertices() const { return (nf_ + 1) * (nf_ + 1); }
  int vertex_id(int i, int j) const { return j * (nf_ + 1) + i; }
  int vertex_i(int v) const { return v % (nf_ + 1); }
  int vertex_j(int v) const { return v / (nf_ + 1); }
  Eigen::Vector2d vertex(int v) const {
    return {vertex_i(v) * h_, vertex_j(v) * h_};
  }

  bool vertex_on_dirichlet(int v) const {
    const int i = vertex_i(v), j = vertex_j(v);
    return i == 0 || j == 0 || j == nf_;
  }
  bool vertex_on_contact(int v) const { return vertex_i(v) == nf_; }
  bool vertex_on_interface(int v) const { return vertex_i(v) == nf_ - refine_; }

  // --- fine quads ----------------------------------------------------------
  int n_cells() const { return nf_ * nf_; }
  int cell_id(int i, int j) const { return j * nf_ + i; }
  int cell_i(int q) const { return q % nf_; }
  int cell_j(int q) const { return q / nf_; }
  Eigen::Vector2d cell_centroid(int q) const {
    return {(cell_i(q) + 0.5) * h_, (cell_j(q) + 0.5) * h_};
  }
  std::array<int, 4> cell_vertices(int q) const {  // SW, SE, NE, NW
    const int i = cell_i(q), j = cell_j(q);
    return {vertex_id(i, j), vertex_id(i + 1, j), vertex_id(i + 1, j + 1), vertex_id(i, j + 1)};
  }

  // --- coarse cells --------------------------------------------------------
  int n_coarse() const { return nc_ * nc_; }
  int coarse_id(int ci, int cj) const { return cj * nc_ + ci; }
  int coarse_i(int k) const { return k % nc_; }
  int coarse_j(int k) const { return k / nc_; }
  int cell_coarse(int q) const {
    return coarse_id(cell_i(q) / refine_, cell_j(q) / refine_);
  }
  bool coarse_in_omega1(int k) const { return coarse_i(k) < nc_ - 1; }
  int n_coarse_omega1() const { return (nc_ - 1) * nc_; }

  /// 1 for x < 1-H, 2 for x > 1-H.
  int cell_subdomain(int q) const { return cell_i(q) < nf_ - refine_ ? 1 : 2; }

  std::vector<int> coarse_fine_cells(int k) const {
    std::vector<int> out;
    out.reserve(refine_ * refine_);
    const int i0 = coarse_i(k) * refine_, j0 = coarse_j(k) * refine_;
    for (int j = j0; j < j0 + refine_; ++j)
      for (int i = i0; i < i0 + refine_; ++i) out.push_back(cell_id(i, j));
    return out;
  }

  // --- interface and contact ----------------------------------------------
  /// Interface nodes at x = 1-H, ascending y; count nf+1.
  std::vector<int> interface_nodes() const {
    std::vector<int> out(nf_ + 1);
    for (int j = 0; j <= nf_; ++j) out[j] = vertex_id(nf_ - refine_, j);
    return out;
  }
  /// Contact-boundary nodes at x = 1, ascending y.
  std::vector<int> contact_nodes() const {
    std::vector<int> out(nf_ + 1);
    for (int j = 0; j <= nf_; ++j) out[j] = vertex_id(nf_, j);
    return out;
  }

  InterfaceRule interface_quadrature(QuadRule rule) const {
    InterfaceRule r;
    r.rule = rule;
    if (rule == QuadRule::NewtonCotes) {
      r.samples.resize(nf_ + 1);
      for (int j = 0; j <= nf_; ++j)
        r.samples[j] = {j * h_, (j == 0 || j == nf_) ? h_ / 2 : h_, j};
    } else {
      const double off = 0.5 / std::sqrt(3.0);
      r.samples.resize(2 * nf_);
      for (int e = 0; e < nf_; ++e) {
        r.samples[2 * e] = {(e + 0.5 - off) * h_, h_ / 2, e};
        r.samples[2 * e + 1] = {(e + 0.5 + off) * h_, h_ / 2, e};
      }
    }
    return r;
  }

  /// Trapezoidal weights over the contact nodes (used for the nodal penalty).
  std::vector<double> contact_nc_weights() const {
    std::vector<double> w(nf_ + 1, h_);
    w.front() = w.back() = h_ / 2;
    return w;
  }

  // --- triangulation (mixed element) ---------------------------------------
  // Quad (i,j) splits into the lower triangle (SW,SE,NE) and the upper
  // triangle (SW,NE,NW); triangle ids are 2*quad and 2*quad+1.
  int n_tris() const { return 2 * n_cells(); }
  int tri_quad(int t) const { return t / 2; }
  std::array<int, 3> tri_vertices(int t) const {
    const auto v = cell_vertices(t / 2);
    return (t % 2 == 0) ? std::array<int, 3>{v[0], v[1], v[2]}
                        : std::array<int, 3>{v[0], v[2], v[3]};
  }
  int tri_subdomain(int t) const { return cell_subdomain(tri_quad(t)); }

  // Edge ids: horizontal, then vertical, then diagonal; endpoints (a,b), a<b.
  int n_h_edges() const { return (nf_ + 1) * nf_; }
  int n_v_edges() const { return (nf_ + 1) * nf_; }
  int n_edges() const { return 2 * (nf_ + 1) * nf_ + nf_ * nf_; }
  int h_edge_id(int i, int j) const { return j * nf_ + i; }                       // (i,j)-(i+1,j)
  int v_edge_id(int i, int j) const { return n_h_edges() + i * nf_ + j; }         // (i,j)-(i,j+1)
  int d_edge_id(int i, int j) const { return 2 * n_h_edges() + j * nf_ + i; }     // (i,j)-(i+1,j+1)

  std::array<int, 2> edge_vertices(int e) const {
    if (e < n_h_edges()) {
      const int i = e % nf_, j = e / nf_;
      return {vertex_id(i, j), vertex_id(i + 1, j)};
    }
    if (e < 2 * n_h_edges()) {
      const int k = e - n_h_edges(), i = k / nf_, j = k % nf_;
      return {vertex_id(i, j), vertex_id(i, j + 1)};
    }
    const int k = e - 2 * n_h_edges(), i = k % nf_, j = k / nf_;
    return {vertex_id(i, j), vertex_id(i + 1, j + 1)};
  }

  /// Unit tangent from lower to higher vertex id and the normal obtained by
  /// rotating it clockwise; both sides of a shared edge see the same pair.
  void edge_frame(int e, Eigen::Vector2d& t, Eigen::Vector2d& n, double& len) const {
    const auto [a, b] = edge_vertices(e);
    const Eigen::Vector2d d = vertex(b) - vertex(a);
    len = d.norm();
    t = d / len;
    n = {t.y(), -t.x()};
  }

  std::array<int, 3> tri_edges(int t) const {
    const int q = t / 2, i = cell_i(q), j = cell_j(q);
    if (t % 2 == 0) return {h_edge_id(i, j), v_edge_id(i + 1, j), d_edge_id(i, j)};
    return {d_edge_id(i, j), h_edge_id(i, j + 1), v_edge_id(i, j)};
  }

  /// Interface segment e (ascending y) as a vertical fine edge id.
  int interface_edge(int seg) const { return v_edge_id(nf_ - refine_, seg); }
  /// Contact segment e (ascending y) at x = 1.
  int contact_edge(int seg) const { return v_edge_id(nf_, seg); }

  bool edge_on_boundary(int e) const {
    const auto [a, b] = edge_vertices(e);
    const int ia = vertex_i(a), ja = vertex_j(a), ib = vertex_i(b), jb = vertex_j(b);
    return (ia == 0 && ib == 0) || (ia == nf_ && ib == nf_) || (ja == 0 && jb == 0) ||
           (ja == nf_ && jb == nf_);
  }
  bool edge_on_contact(int e) const {
    const auto [a, b] = edge_vertices(e);
    return vertex_i(a) == nf_ && vertex_i(b) == nf_;
  }
  bool edge_on_interface(int e) const {
    const auto [a, b] = edge_vertices(e);
    return vertex_i(a) == nf_ - refine_ && vertex_i(b) == nf_ - refine_;
  }

  // --- oversampling ---------------------------------------------------------
  Oversample oversample(int k, int m) const {
    if (!coarse_in_omega1(k))
      throw NotInOmega1("oversample: coarse cell lies in subdomain 2");
    Oversample os;
    os.center = k;
    os.layers = m;
    const int ci = coarse_i(k), cj = coarse_j(k);
    os.ci_lo = std::max(0, ci - m);
    os.ci_hi = std::min(nc_ - 2, ci + m);  // clipped at the interface column
    os.cj_lo = std::max(0, cj - m);
    os.cj_hi = std::min(nc_ - 1, cj + m);
    for (int j = os.cj_lo; j <= os.cj_hi; ++j)
      for (int i = os.ci_lo; i <= os.ci_hi; ++i) os.members.push_back(coarse_id(i, j));
    return os;
  }

  std::string summary_json() const;

private:
  int nc_, refine_, nf_;
  double H_, h_;
};

inline TwoScaleMesh build_mesh(int nc, int refine) { return TwoScaleMesh(nc, refine); }

inline std::string TwoScaleMesh::summary_json() const {
  std::string s = "{";
  s += "\"coarse_per_side\":" + std::to_string(nc_);
  s += ",\"refine\":" + std::to_string(refine_);
  s += ",\"fine_per_side\":" + std::to_string(nf_);
  s += ",\"H\":" + std::to_string(H_);
  s += ",\"h\":" + std::to_string(h_);
  s += ",\"vertices\":" + std::to_string(n_vertices());
  s += ",\"fine_cells\":" + std::to_string(n_cells());
  s += ",\"coarse_cells\":" + std::to_string(n_coarse());
  s += ",\"interface_nodes\":" + std::to_string(nf_ + 1);
  s += ",\"dirichlet\":\"x=0,y=0,y=1\",\"contact\":\"x=1\"}";
  return s;
}

}  // namespace cdd
