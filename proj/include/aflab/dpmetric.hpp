#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "aflab/metric.hpp"
#include "aflab/quadrature.hpp"

namespace aflab {

// Graph discretization of a coordinate ball: a center vertex plus nshells
// spherical shells carrying the 12 icosahedron directions (a spherical
// 5-design, so shell averages integrate quadratics exactly). Edge lengths
// come from the metric, vertex volumes from a midpoint rule per shell.
struct MeshGraph {
  struct Edge {
    int a, b;        // orientation a -> b
    double len;      // metric length
    double measure;  // volume share V_a/deg_a + V_b/deg_b
  };

  std::vector<std::array<double, 3>> pos;  // chart coordinates
  std::vector<double> radius;              // coordinate radius per vertex
  std::vector<double> vol;                 // vertex volume
  std::vector<int> degree;
  std::vector<char> boundary;              // outermost shell marker
  std::vector<Edge> edges;
  int nshells = 0;
  double ball_radius = 0.0;

  int vertex(int shell, int dir) const { return 1 + 12 * shell + dir; }
  std::size_t size() const { return pos.size(); }
  double total_volume() const { return std::accumulate(vol.begin(), vol.end(), 0.0); }
};

namespace detail {

inline const std::vector<std::array<double, 3>>& icosahedron_directions() {
  static const std::vector<std::array<double, 3>> dirs = [] {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const double n = std::sqrt(1.0 + phi * phi);
    std::vector<std::array<double, 3>> d;
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {1.0, -1.0}) {
        d.push_back({0.0, s1 / n, s2 * phi / n});
        d.push_back({s1 / n, s2 * phi / n, 0.0});
        d.push_back({s2 * phi / n, 0.0, s1 / n});
      }
    }
    return d;
  }();
  return dirs;
}

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

// Builds the shell mesh. inner_radius = 0 gives uniformly spaced shells
// (best volume convergence); inner_radius > 0 gives geometric shells from
// inner_radius to ball_radius (self-similar, used for scaling studies).
inline MeshGraph build_mesh(const RadialMetric& m, double ball_radius, int nshells,
                            double inner_radius = 0.0) {
  if (m.form() != MetricForm::conformal) {
    throw std::invalid_argument("build_mesh: conformal form required");
  }
  if (nshells < 4) throw std::invalid_argument("build_mesh: need at least 4 shells");
  if (!(ball_radius > 0.0)) throw std::invalid_argument("build_mesh: radius must be positive");

  const auto& dirs = detail::icosahedron_directions();
  MeshGraph g;
  g.nshells = nshells;
  g.ball_radius = ball_radius;

  std::vector<double> r(nshells);
  for (int k = 0; k < nshells; ++k) {
    if (inner_radius > 0.0) {
      r[k] = inner_radius * std::pow(ball_radius / inner_radius,
                                     static_cast<double>(k) / (nshells - 1));
    } else {
      r[k] = ball_radius * (k + 1) / nshells;
    }
  }

  auto u2 = [&m](double t) {
    const double u = m.factor(t);
    return u * u;
  };
  // metric arc coordinate at shell radii and at cell boundaries
  std::vector<double> cut(nshells + 1);
  cut[0] = inner_radius > 0.0 ? 0.5 * r[0] : 0.5 * r[0];
  for (int k = 1; k < nshells; ++k) cut[k] = 0.5 * (r[k - 1] + r[k]);
  cut[nshells] = ball_radius;

  const std::size_t nv = 1 + 12 * static_cast<std::size_t>(nshells);
  g.pos.resize(nv);
  g.radius.assign(nv, 0.0);
  g.vol.assign(nv, 0.0);
  g.boundary.assign(nv, 0);
  g.pos[0] = {0.0, 0.0, 0.0};
  g.vol[0] = ball_volume(m, cut[0]);
  for (int k = 0; k < nshells; ++k) {
    const double ds = integrate(u2, cut[k], cut[k + 1]);
    const double shell_vol = sphere_area(m, r[k]) * ds;
    for (int j = 0; j < 12; ++j) {
      const int v = g.vertex(k, j);
      g.pos[v] = {r[k] * dirs[j][0], r[k] * dirs[j][1], r[k] * dirs[j][2]};
      g.radius[v] = r[k];
      g.vol[v] = shell_vol / 12.0;
      if (k == nshells - 1) g.boundary[v] = 1;
    }
  }

  // edges: center spokes, radial spokes, intra-shell arcs (adjacent pairs of
  // the icosahedron have direction dot product 1/sqrt(5))
  const double theta = std::acos(1.0 / std::sqrt(5.0));
  std::vector<std::pair<int, int>> raw;
  for (int j = 0; j < 12; ++j) raw.push_back({0, g.vertex(0, j)});
  for (int k = 0; k + 1 < nshells; ++k) {
    for (int j = 0; j < 12; ++j) raw.push_back({g.vertex(k, j), g.vertex(k + 1, j)});
  }
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      if (detail::dot3(dirs[i], dirs[j]) > 0.4) arcs.push_back({i, j});
    }
  }
  g.degree.assign(nv, 0);
  auto add_edge = [&](int a, int b, double len) {
    g.edges.push_back({a, b, len, 0.0});
    ++g.degree[a];
    ++g.degree[b];
  };
  const double s0 = integrate(u2, 0.0, r[0]);
  for (int j = 0; j < 12; ++j) add_edge(0, g.vertex(0, j), s0);
  for (int k = 0; k + 1 < nshells; ++k) {
    const double len = integrate(u2, r[k], r[k + 1]);
    for (int j = 0; j < 12; ++j) add_edge(g.vertex(k, j), g.vertex(k + 1, j), len);
  }
  for (int k = 0; k < nshells; ++k) {
    const double len = theta * r[k] * u2(r[k]);
    for (auto [i, j] : arcs) add_edge(g.vertex(k, i), g.vertex(k, j), len);
  }
  for (auto& e : g.edges) {
    e.measure = g.vol[e.a] / g.degree[e.a] + g.vol[e.b] / g.degree[e.b];
  }
  return g;
}

// One d_p solve with a certified enclosure: the normalized potential gives a
// feasible lower bound, a divergence-exact flow gives an upper bound.
struct DpSolution {
  std::vector<double> f;
  std::vector<double> flow;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // dual - primal
  int outer_iterations = 0;
  bool converged = false;
};

struct DpOptions {
  int max_outer = 48;
  int cg_max_iter = 4000;
  double cg_tol = 1e-13;
  double eps_decay = 0.25;
  double gap_tol = 0.05;  // relative enclosure width for `converged`
};

namespace detail {

// Jacobi-preconditioned CG for the singular edge Laplacian; b must be
// orthogonal to constants, iterates are kept mean-free.
inline void cg_laplacian(const MeshGraph& g, const std::vector<double>& a,
                         const std::vector<double>& b, std::vector<double>& x,
                         int max_iter, double tol) {
  const std::size_t n = g.size();
  auto demean = [n](std::vector<double>& v) {
    double mu = std::accumulate(v.begin(), v.end(), 0.0) / n;
    for (double& t : v) t -= mu;
  };
  std::vector<double> diag(n, 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    diag[g.edges[e].a] += a[e];
    diag[g.edges[e].b] += a[e];
  }
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& ed = g.edges[e];
      const double d = a[e] * (v[ed.b] - v[ed.a]);
      out[ed.b] += d;
      out[ed.a] -= d;
    }
  };
  demean(x);
  std::vector<double> rvec(n), z(n), p(n), Ap(n);
  apply(x, Ap);
  for (std::size_t i = 0; i < n; ++i) rvec[i] = b[i] - Ap[i];
  demean(rvec);
  const double b_norm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rvec[i] / std::max(diag[i], 1e-300);
    rz += rvec[i] * z[i];
  }
  p = z;
  for (int it = 0; it < max_iter; ++it) {
    const double rn = std::sqrt(std::inner_product(rvec.begin(), rvec.end(), rvec.begin(), 0.0));
    if (rn <= tol * b_norm) break;
    apply(p, Ap);
    const double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      rvec[i] -= alpha * Ap[i];
    }
    demean(rvec);
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = rvec[i] / std::max(diag[i], 1e-300);
      rz_new += rvec[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  demean(x);
}

// Routes the divergence defect of a flow through a BFS spanning tree so that
// div(flow) equals the charge vector exactly (up to round-off at the root).
inline void fix_divergence(const MeshGraph& g, const std::vector<double>& charge,
                           std::vector<double>& flow) {
  const std::size_t n = g.size();
  std::vector<double> defect(charge);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    defect[ed.b] -= flow[e];
    defect[ed.a] += flow[e];
  }
  // BFS tree from vertex 0: parent edge index per vertex
  std::vector<int> parent_edge(n, -1), order;
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> incident(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    incident[g.edges[e].a].push_back(static_cast<int>(e));
    incident[g.edges[e].b].push_back(static_cast<int>(e));
  }
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int v = order[head];
    for (int e : incident[v]) {
      const auto& ed = g.edges[e];
      const int w = ed.a == v ? ed.b : ed.a;
      if (!seen[w]) {
        seen[w] = 1;
        parent_edge[w] = e;
        order.push_back(w);
      }
    }
  }
  for (std::size_t i = order.size(); i-- > 1;) {
    const int v = order[i];
    const int e = parent_edge[v];
    const auto& ed = g.edges[e];
    // push defect at v along the parent edge; div contribution at v is
    // +flow if v == b, -flow if v == a
    if (ed.b == v) {
      flow[e] += defect[v];
      defect[ed.a] += defect[v];
    } else {
      flow[e] -= defect[v];
      defect[ed.b] += defect[v];
    }
    defect[v] = 0.0;
  }
}

}  // namespace detail

// IRLS solve of the p-Laplace extremality system with unit charges at x and y.
// Every outer iterate yields a valid primal lower bound (normalized potential)
// and a valid dual upper bound (divergence-corrected flow); the best of each
// across iterations forms the returned enclosure.
inline DpSolution dp_distance(const MeshGraph& g, int x, int y, double p,
                              DpOptions opt = {}, const std::vector<double>* warm = nullptr) {
  if (!(p > 3.0)) throw std::invalid_argument("dp_distance: p must exceed 3");
  if (x == y || x < 0 || y < 0 || x >= static_cast<int>(g.size()) ||
      y >= static_cast<int>(g.size())) {
    throw std::invalid_argument("dp_distance: invalid vertex pair");
  }
  const std::size_t n = g.size();
  const std::size_t ne = g.edges.size();
  const double pc = p / (p - 1.0);

  std::vector<double> charge(n, 0.0);
  charge[x] = 1.0;
  charge[y] = -1.0;

  std::vector<double> f(n, 0.0);
  if (warm && warm->size() == n) f = *warm;
  std::vector<double> a(ne), grad(ne);

  DpSolution best;
  best.primal = 0.0;
  best.dual = std::numeric_limits<double>::infinity();

  auto eval_bounds = [&](const std::vector<double>& fv) {
    // primal: scale fv to unit p-energy
    double energy = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = std::abs(fv[ed.b] - fv[ed.a]) / ed.len;
      energy += ed.measure * std::pow(ge, p);
    }
    if (energy > 0.0) {
      const double primal = std::abs(fv[x] - fv[y]) / std::pow(energy, 1.0 / p);
      if (primal > best.primal) {
        best.primal = primal;
        best.f = fv;
      }
    }
    // dual: the Holder-equality candidate flow F_e = measure g|g|^{p-2} / len
    // (the weights a carry an extra factor p relative to it), made exactly
    // divergence-consistent before pricing
    std::vector<double> flow(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      flow[e] = a[e] * (fv[ed.b] - fv[ed.a]) / p;
    }
    detail::fix_divergence(g, charge, flow);
    double dual = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      dual += std::pow(std::abs(flow[e]) * ed.len, pc) * std::pow(ed.measure, 1.0 - pc);
    }
    dual = std::pow(dual, 1.0 / pc);
    if (dual < best.dual) {
      best.dual = dual;
      best.flow = std::move(flow);
    }
  };

  // Convex objective of the extremality system: Phi(f) = E_p(f)/p - (f_x - f_y).
  auto phi = [&](const std::vector<double>& fv) {
    double energy = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = std::abs(fv[ed.b] - fv[ed.a]) / ed.len;
      energy += ed.measure * std::pow(ge, p);
    }
    return energy / p - (fv[x] - fv[y]);
  };

  // grad Phi(f) = L_{w0} f - charge with the exact (unsmoothed) p-Laplace
  // edge weights w0_e = measure |g_e|^{p-2} / len^2.
  auto phi_gradient = [&](const std::vector<double>& fv, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = (fv[ed.b] - fv[ed.a]) / ed.len;
      const double d = ed.measure * std::pow(std::abs(ge), p - 2.0) * ge / ed.len;
      out[ed.b] += d;
      out[ed.a] -= d;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] -= charge[i];
  };

  // Optimal scalar rescaling c f with c = (Delta f / E_p)^{1/(p-1)}; keeps the
  // iterate at the magnitude the p-energy actually prefers.
  auto rescale = [&](std::vector<double>& fv) {
    double energy = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = std::abs(fv[ed.b] - fv[ed.a]) / ed.len;
      energy += ed.measure * std::pow(ge, p);
    }
    const double df = fv[x] - fv[y];
    if (!(energy > 0.0) || !(df > 0.0)) return;
    const double c = std::pow(df / energy, 1.0 / (p - 1.0));
    for (double& t : fv) t *= c;
  };

  auto grad_max = [&](const std::vector<double>& fv) {
    double gmax = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      gmax = std::max(gmax, std::abs(fv[ed.b] - fv[ed.a]) / ed.len);
    }
    return gmax;
  };

  double eps = 0.0;
  bool bootstrapped = false;
  if (warm && warm->size() == n) {
    rescale(f);
    const double gm = grad_max(f);
    if (gm > 0.0) {
      eps = gm * gm;
      bootstrapped = true;
    }
  }

  std::vector<double> f_lin(n), trial(n), res(n), step(n);
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = (f[ed.b] - f[ed.a]) / ed.len;
      grad[e] = ge;
      const double base = bootstrapped ? ge * ge + eps : 1.0;
      a[e] = p * ed.measure * std::pow(base, 0.5 * (p - 2.0)) / (ed.len * ed.len);
    }
    if (!bootstrapped) {
      // first pass: uniform-weight (p = 2 like) solve fixes the shape, the
      // optimal rescaling fixes the magnitude
      f_lin = f;
      detail::cg_laplacian(g, a, charge, f_lin, opt.cg_max_iter, opt.cg_tol);
      f = f_lin;
      rescale(f);
      eps = std::max(grad_max(f) * grad_max(f), 1e-300);
      bootstrapped = true;
    } else {
      // preconditioned gradient step: solve A z = grad Phi(f) with the
      // smoothed IRLS Laplacian A as preconditioner. A is positive definite
      // on mean-free vectors, so -z is always a descent direction for the
      // convex Phi — unlike the raw IRLS move, which can point uphill once
      // eps is small. Backtrack with a sufficient-decrease test.
      phi_gradient(f, res);
      std::fill(step.begin(), step.end(), 0.0);
      detail::cg_laplacian(g, a, res, step, opt.cg_max_iter, opt.cg_tol);
      double slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope += res[i] * step[i];
      if (slope > 0.0) {
        const double phi0 = phi(f);
        double alpha = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
          for (std::size_t i = 0; i < n; ++i) trial[i] = f[i] - alpha * step[i];
          if (phi(trial) <= phi0 - 1e-4 * alpha * slope) {
            f = trial;
            break;
          }
          alpha *= 0.5;
        }
      }
      rescale(f);
      eps *= opt.eps_decay;
    }
    // recompute weights at the new iterate before pricing the dual flow
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& ed = g.edges[e];
      const double ge = (f[ed.b] - f[ed.a]) / ed.len;
      a[e] = p * ed.measure * std::pow(ge * ge + eps, 0.5 * (p - 2.0)) / (ed.len * ed.len);
    }
    eval_bounds(f);
    best.outer_iterations = outer + 1;
    if (best.dual - best.primal <= 1e-12 * best.dual) break;
  }
  best.gap = best.dual - best.primal;
  best.converged = best.gap <= opt.gap_tol * best.dual;
  return best;
}

// d_p ball around vertex x: per-target solves (warm-started along each radial
// spoke), then volume with linear interpolation in the boundary cells.
struct DpBall {
  std::vector<char> inside;
  std::vector<double> dist;
  double volume = 0.0;
  bool touches_boundary = false;
  double max_gap = 0.0;  // worst relative enclosure width among the solves
};

inline DpBall dp_ball(const MeshGraph& g, int x, double r, double p, DpOptions opt = {}) {
  if (!(r > 0.0)) throw std::invalid_argument("dp_ball: radius must be positive");
  const std::size_t n = g.size();
  DpBall ball;
  ball.dist.assign(n, 0.0);
  ball.inside.assign(n, 0);
  ball.inside[x] = 1;
  ball.volume = g.vol[x];

  // solve shell by shell along each direction so warm starts track the target
  std::vector<std::vector<double>> warm(12);
  for (int k = 0; k < g.nshells; ++k) {
    for (int j = 0; j < 12; ++j) {
      const int v = g.vertex(k, j);
      if (v == x) continue;
      DpSolution sol =
          dp_distance(g, x, v, p, opt, warm[j].empty() ? nullptr : &warm[j]);
      warm[j] = sol.f;
      ball.dist[v] = sol.primal;
      ball.max_gap = std::max(ball.max_gap, sol.gap / std::max(sol.dual, 1e-300));
      if (sol.primal <= r) {
        ball.inside[v] = 1;
        ball.volume += g.vol[v];
        if (g.boundary[v]) ball.touches_boundary = true;
      }
    }
  }
  // boundary interpolation along radial spokes: credit the fraction of the
  // first outside cell covered by the ball
  for (int j = 0; j < 12; ++j) {
    for (int k = 0; k < g.nshells; ++k) {
      const int v = g.vertex(k, j);
      if (ball.inside[v]) continue;
      const double d_in = k == 0 ? 0.0 : ball.dist[g.vertex(k - 1, j)];
      if (k > 0 && !ball.inside[g.vertex(k - 1, j)]) break;
      const double d_out = ball.dist[v];
      if (d_out > d_in) {
        const double frac = std::min(std::max((r - d_in) / (d_out - d_in), 0.0), 1.0);
        ball.volume += frac * g.vol[v];
      }
      break;
    }
  }
  return ball;
}

// Half the worst distance distortion over an index matching of two sampled
// balls; an upper bound for the Gromov-Hausdorff distance of the samples.
inline double gh_distortion(const std::vector<std::vector<double>>& dA,
                            const std::vector<std::vector<double>>& dB) {
  if (dA.size() != dB.size()) throw std::invalid_argument("gh_distortion: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < dA.size(); ++i) {
    if (dA[i].size() != dB[i].size()) {
      throw std::invalid_argument("gh_distortion: row size mismatch");
    }
    for (std::size_t j = 0; j < dA[i].size(); ++j) {
      worst = std::max(worst, std::abs(dA[i][j] - dB[i][j]));
    }
  }
  return 0.5 * worst;
}

// Flat binary dump: "AFDP", version, counts, p, shells; then positions, f,
// flow as little-endian 64-bit floats.
inline void dump_solution(const std::string& path, const MeshGraph& g, const DpSolution& s,
                          double p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_solution: cannot open " + path);
  const char magic[4] = {'A', 'F', 'D', 'P'};
  out.write(magic, 4);
  auto put_u32 = [&out](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_f64 = [&out](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put_u32(1);  // version
  put_u32(static_cast<std::uint32_t>(g.size()));
  put_u32(static_cast<std::uint32_t>(g.edges.size()));
  put_u32(static_cast<std::uint32_t>(g.nshells));
  put_f64(p);
  for (const auto& q : g.pos) {
    put_f64(q[0]);
    put_f64(q[1]);
    put_f64(q[2]);
  }
  for (double v : s.f) put_f64(v);
  for (double v : s.flow) put_f64(v);
}

}  // namespace aflab
