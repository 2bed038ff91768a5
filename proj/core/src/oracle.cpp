#include "ptwell/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptwell/error.hpp"

namespace ptwell {

FDGrid make_grid(const WellParams& p, int N, double L_min) {
  if (N < 3 || N % 2 == 0) throw InvalidParameter("grid needs an odd number of nodes >= 3");
  if (!(L_min > p.b())) throw InvalidParameter("box half-length must exceed b");
  const double b = p.b();
  const int m = static_cast<int>(std::floor(b * (N + 1) / (2.0 * L_min)));
  if (m < 1) throw InvalidParameter("too few nodes to resolve the well for this box");
  FDGrid g;
  g.N = N;
  g.h = b / m;
  g.L = 0.5 * g.h * (N + 1);
  g.delta_index = (N - 1) / 2;
  return g;
}

double box_half_length(const WellParams& p, double k) {
  const double ar = alpha_parts_real(p, k).alpha_r;
  if (!(ar > 0.0)) throw InvalidParameter("state is not localized (alpha_R = 0)");
  return p.b() + 30.0 / ar;
}

Tridiagonal discretize(const WellParams& p, const FDGrid& g) {
  const double inv_h2 = 1.0 / (g.h * g.h);
  const double b = p.b();
  const int nb = static_cast<int>(std::lround(b / g.h));
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(g.N));
  t.off.assign(static_cast<std::size_t>(g.N - 1), cplx(-inv_h2));
  for (int i = 0; i < g.N; ++i) {
    const int rel = i - g.delta_index;
    cplx V;
    if (rel == -nb) {
      V = 0.5 * cplx(p.v0(), p.vI());
    } else if (rel == nb) {
      V = 0.5 * cplx(p.v0(), -p.vI());
    } else {
      const double x = rel * g.h;
      V = cplx(real_potential(p, x), imaginary_potential(p, x));
    }
    t.diag[static_cast<std::size_t>(i)] = 2.0 * inv_h2 + V;
  }
  t.diag[static_cast<std::size_t>(g.delta_index)] += p.Lambda() / g.h;
  return t;
}

std::vector<cplx> tridiagonal_eigenvalues(const Tridiagonal& t) {
  const int n = static_cast<int>(t.diag.size());
  std::vector<cplx> d = t.diag;
  std::vector<cplx> e(static_cast<std::size_t>(n), cplx(0.0));
  std::copy(t.off.begin(), t.off.end(), e.begin());
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw EigensolverFailure("QL iteration did not converge");
      cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cplx r = std::sqrt(g * g + 1.0);
      g = d[m] - d[l] + e[l] / (std::abs(g + r) >= std::abs(g - r) ? g + r : g - r);
      cplx s = 1.0, c = 1.0, pp = 0.0;
      int i;
      bool deflated = false;
      for (i = m - 1; i >= l; --i) {
        const cplx f = s * e[i];
        const cplx bb = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (std::abs(r) <= eps * (std::abs(f) + std::abs(g))) {
          if (std::abs(f) + std::abs(g) != 0.0) throw EigensolverFailure("QL rotation breakdown");
          d[i + 1] -= pp;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - pp;
        r = (d[i] - g) * s + 2.0 * c * bb;
        pp = s * r;
        d[i + 1] = g + pp;
        g = c * r - bb;
      }
      if (deflated) continue;
      d[l] -= pp;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  return d;
}

std::vector<cplx> dense_eigenvalues(const Tridiagonal& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.diag.size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) H(i, i) = t.diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    H(i, i + 1) = t.off[static_cast<std::size_t>(i)];
    H(i + 1, i) = t.off[static_cast<std::size_t>(i)];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, false);
  if (solver.info() != Eigen::Success) throw EigensolverFailure("dense eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<cplx>(ev.data(), ev.data() + ev.size());
}

std::vector<cplx> oracle_spectrum(const WellParams& p, const FDGrid& g, int count, double max_abs_imag) {
  if (count < 0 || count > g.N) throw InvalidParameter("requested more eigenvalues than grid nodes");
  std::vector<cplx> ev = tridiagonal_eigenvalues(discretize(p, g));
  std::erase_if(ev, [&](cplx z) { return std::abs(z.imag()) > max_abs_imag; });
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a.real()) < std::abs(b.real()); });
  if (static_cast<int>(ev.size()) > count) ev.resize(static_cast<std::size_t>(count));
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return ev;
}

std::vector<cplx> match_nearest(const std::vector<cplx>& eigenvalues, const std::vector<cplx>& targets) {
  if (eigenvalues.empty()) throw InvalidParameter("no eigenvalues to match");
  std::vector<cplx> out;
  out.reserve(targets.size());
  for (cplx t : targets) {
    out.push_back(*std::min_element(eigenvalues.begin(), eigenvalues.end(),
                                    [&](cplx a, cplx b) { return std::abs(a - t) < std::abs(b - t); }));
  }
  return out;
}

namespace {

// Gaussian elimination with partial pivoting on (T − σ): row i of U holds
// u0[i], u1[i], u2[i] on diagonals 0, +1, +2.
class ShiftedLU {
 public:
  ShiftedLU(const Tridiagonal& t, cplx sigma) : n_(t.diag.size()), u0_(n_), u1_(n_), u2_(n_), mult_(n_), swapped_(n_) {
    cplx a0 = t.diag[0] - sigma;
    cplx a1 = n_ > 1 ? t.off[0] : cplx(0.0);
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const cplx below0 = t.off[i];
      const cplx below1 = t.diag[i + 1] - sigma;
      const cplx below2 = i + 2 < n_ ? t.off[i + 1] : cplx(0.0);
      if (std::abs(below0) > std::abs(a0)) {
        swapped_[i] = true;
        u0_[i] = below0;
        u1_[i] = below1;
        u2_[i] = below2;
        mult_[i] = a0 / below0;
        a0 = a1 - mult_[i] * below1;
        a1 = -mult_[i] * below2;
      } else {
        u0_[i] = a0;
        u1_[i] = a1;
        u2_[i] = 0.0;
        mult_[i] = a0 == cplx(0.0) ? cplx(0.0) : below0 / a0;
        a0 = below1 - mult_[i] * a1;
        a1 = below2;
      }
    }
    u0_[n_ - 1] = a0;
    const double tiny = std::numeric_limits<double>::epsilon() * (1.0 + std::abs(sigma));
    for (auto& z : u0_) {
      if (std::abs(z) < tiny) z = tiny;
    }
  }

  void solve(std::vector<cplx>& y) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swapped_[i]) std::swap(y[i], y[i + 1]);
      y[i + 1] -= mult_[i] * y[i];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      cplx acc = y[ii];
      if (ii + 1 < n_) acc -= u1_[ii] * y[ii + 1];
      if (ii + 2 < n_) acc -= u2_[ii] * y[ii + 2];
      y[ii] = acc / u0_[ii];
    }
  }

 private:
  std::size_t n_;
  std::vector<cplx> u0_, u1_, u2_, mult_;
  std::vector<bool> swapped_;
};

double normalize(std::vector<cplx>& v) {
  double norm = 0.0;
  for (const auto& z : v) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw EigensolverFailure("inverse iteration failed");
  for (auto& z : v) z /= norm;
  return norm;
}

std::vector<cplx> multiply(const Tridiagonal& t, const std::vector<cplx>& v) {
  const std::size_t n = v.size();
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = t.diag[i] * v[i];
    if (i > 0) acc += t.off[i - 1] * v[i - 1];
    if (i + 1 < n) acc += t.off[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<cplx> tridiagonal_eigenvector(const Tridiagonal& t, cplx E) {
  if (t.diag.empty()) throw InvalidParameter("empty matrix");
  const ShiftedLU lu(t, E + cplx(1e-10 * (1.0 + std::abs(E)), 0.0));
  std::vector<cplx> x(t.diag.size(), cplx(1.0));
  for (int iter = 0; iter < 3; ++iter) {
    lu.solve(x);
    normalize(x);
  }
  return x;
}

std::vector<cplx> nearest_eigenvalues(const Tridiagonal& t, cplx sigma, int count) {
  const std::size_t n = t.diag.size();
  if (count < 1 || static_cast<std::size_t>(count) > n) throw InvalidParameter("bad eigenvalue count");
  const std::size_t m = std::min(n, static_cast<std::size_t>(count) + 6);
  const ShiftedLU lu(t, sigma);

  std::vector<std::vector<cplx>> V(m, std::vector<cplx>(n));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      V[j][i] = cplx(std::sin(0.37 * (i + 1) * (j + 1)), std::cos(0.11 * (i + 3) * (j + 2)));
    }
  }

  std::vector<cplx> previous;
  for (int iter = 0; iter < 200; ++iter) {
    for (auto& v : V) lu.solve(v);
    for (std::size_t j = 0; j < m; ++j) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t l = 0; l < j; ++l) {
          cplx dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += std::conj(V[l][i]) * V[j][i];
          for (std::size_t i = 0; i < n; ++i) V[j][i] -= dot * V[l][i];
        }
      }
      normalize(V[j]);
    }
    Eigen::MatrixXcd S(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) {
      const std::vector<cplx> Tv = multiply(t, V[c]);
      for (std::size_t r = 0; r < m; ++r) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(V[r][i]) * Tv[i];
        S(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = dot;
      }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S, false);
    if (es.info() != Eigen::Success) throw EigensolverFailure("Ritz eigensolve failed");
    std::vector<cplx> ritz(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(ritz.begin(), ritz.end(),
              [&](cplx a, cplx b) { return std::abs(a - sigma) < std::abs(b - sigma); });
    ritz.resize(static_cast<std::size_t>(count));
    if (!previous.empty()) {
      double change = 0.0;
      for (std::size_t j = 0; j < ritz.size(); ++j) {
        change = std::max(change, std::abs(ritz[j] - previous[j]) / (1.0 + std::abs(ritz[j])));
      }
      if (change <= 1e-10) return ritz;
    }
    previous = ritz;
  }
  throw EigensolverFailure("shift-invert subspace iteration did not converge");
}

namespace {

// True when the two oracle eigenvalues nearest E* form a complex pair.
bool pair_is_complex(const WellParams& p, const FDGrid& g, double E_star) {
  const std::vector<cplx> ev = nearest_eigenvalues(discretize(p, g), E_star, 2);
  const double thresh = 1e-6 * std::abs(E_star);
  return std::abs(ev[0].imag()) > thresh && std::abs(ev[1].imag()) > thresh;
}

}  // namespace

double oracle_complexification(const WellParams& p, double k_star, double Lambda_star, int N, double window,
                               int iterations) {
  if (!(Lambda_star > 0.0) || !(window > 0.0 && window < 1.0)) throw InvalidParameter("bad EP bracket");
  const WellParams at_ep = p.with_Lambda(Lambda_star);
  const FDGrid g = make_grid(at_ep, N, box_half_length(at_ep, k_star));
  const double E_star = k_star * k_star;
  double lo = (1.0 - window) * Lambda_star;
  double hi = (1.0 + window) * Lambda_star;
  if (pair_is_complex(p.with_Lambda(lo), g, E_star) || !pair_is_complex(p.with_Lambda(hi), g, E_star)) {
    throw NoConvergence("oracle pair does not complexify inside the bracket");
  }
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pair_is_complex(p.with_Lambda(mid), g, E_star) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ptwell
