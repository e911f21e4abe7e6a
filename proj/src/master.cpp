#include "gaudin/master.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

namespace gaudin {

namespace {

void validate_shape(int N, const std::vector<Partition>& lambdas, const std::vector<int>& l) {
  if (N < 0) throw NotAPartition("N must be nonnegative");
  if (lambdas.empty()) throw NotAPartition("at least one tensor factor is required");
  for (const auto& lam : lambdas) {
    if (lam.length() != static_cast<std::size_t>(N) + 1) throw NotAPartition("partition " + lam.str() + " must have N+1 parts");
    if (lam[static_cast<std::size_t>(N)] != 0) throw NotAPartition("partition " + lam.str() + " must end in 0");
  }
  if (l.size() != static_cast<std::size_t>(N)) throw NotAPartition("l must have N entries");
}

GaudinProblem finish(int N, std::vector<Partition> lambdas, std::vector<int> l) {
  GaudinProblem p;
  p.N = N;
  p.lambda_inf = derive_infinity_weight(lambdas, l);
  p.lambdas = std::move(lambdas);
  p.l = std::move(l);
  for (int li : p.l) p.l_total += li;
  return p;
}

}  // namespace

GaudinProblem GaudinProblem::create(int N, std::vector<Partition> lambdas, std::vector<int> l, std::vector<Rational> z) {
  validate_shape(N, lambdas, l);
  if (z.size() != lambdas.size()) throw DimensionMismatch("one site per partition is required");
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      if (z[a] == z[b]) throw DistinctnessError("sites " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " coincide");
  auto p = finish(N, std::move(lambdas), std::move(l));
  for (const auto& x : z) p.z.push_back(to_complex(x));
  p.z_exact = std::move(z);
  return p;
}

GaudinProblem GaudinProblem::create(int N, std::vector<Partition> lambdas, std::vector<int> l, std::vector<Complex> z) {
  validate_shape(N, lambdas, l);
  if (z.size() != lambdas.size()) throw DimensionMismatch("one site per partition is required");
  for (std::size_t a = 0; a < z.size(); ++a) {
    if (!std::isfinite(z[a].real()) || !std::isfinite(z[a].imag())) throw SchemaError("site " + std::to_string(a + 1) + " is not finite");
    for (std::size_t b = a + 1; b < z.size(); ++b)
      if (z[a] == z[b]) throw DistinctnessError("sites " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " coincide");
  }
  auto p = finish(N, std::move(lambdas), std::move(l));
  p.z = std::move(z);
  return p;
}

int GaudinProblem::pairing(std::size_t s, int i) const {
  const auto& lam = lambdas.at(s);
  return lam[static_cast<std::size_t>(i - 1)] - lam[static_cast<std::size_t>(i)];
}

double GaudinProblem::scale() const {
  double m = 1.0;
  for (const auto& x : z) m = std::max(m, std::abs(x));
  return m;
}

template <>
std::vector<Rational> GaudinProblem::sites<Rational>() const {
  if (!z_exact) throw SchemaError("exact arithmetic needs rational sites");
  return *z_exact;
}

template <>
std::vector<Complex> GaudinProblem::sites<Complex>() const {
  return z;
}

template <>
std::vector<ComplexLD> GaudinProblem::sites<ComplexLD>() const {
  std::vector<ComplexLD> out;
  if (z_exact) {
    // recompute from the exact value for the extra bits
    for (const auto& x : *z_exact) {
      mpf_class f(x, 128);
      const long double hi = static_cast<long double>(f.get_d());
      mpf_class rest(f - mpf_class(static_cast<double>(hi), 128), 128);
      out.emplace_back(hi + static_cast<long double>(rest.get_d()), 0.0L);
    }
  } else {
    for (const auto& x : z) out.emplace_back(x.real(), x.imag());
  }
  return out;
}

VariableLayout variable_layout(const GaudinProblem& p) {
  VariableLayout lay;
  for (int i = 1; i <= p.N; ++i)
    for (int j = 0; j < p.l[static_cast<std::size_t>(i - 1)]; ++j) lay.color.push_back(i);
  const std::size_t m = lay.color.size();
  lay.pair.assign(m, std::vector<int>(m, 0));
  lay.site.assign(m, std::vector<int>(p.n(), 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const int d = std::abs(lay.color[a] - lay.color[b]);
      lay.pair[a][b] = d == 0 ? 2 : (d == 1 ? -1 : 0);
    }
    for (std::size_t s = 0; s < p.n(); ++s) lay.site[a][s] = p.pairing(s, lay.color[a]);
  }
  return lay;
}

bool hessian_degenerate(const Matrix<Complex>& h, Complex det, double tol) {
  double bound = 1.0;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < h.cols(); ++c) row += std::norm(h(r, c));
    bound *= std::sqrt(row);
  }
  return std::abs(det) < tol * bound || bound == 0.0;
}

namespace {

struct Key {
  double re;
  double im;
  auto operator<=>(const Key&) const = default;
};

double round_to(double v, double tol) {
  const double r = std::round(v / tol) * tol;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Key key_of(const Complex& x, double tol) { return {round_to(x.real(), tol), round_to(x.imag(), tol)}; }

std::vector<Key> flat_key(const PointConfig<Complex>& t, double tol) {
  std::vector<Key> out;
  for (const auto& g : t.groups)
    for (const auto& x : g) out.push_back(key_of(x, tol));
  return out;
}

}  // namespace

PointConfig<Complex> canonical_order(const PointConfig<Complex>& t, double tol) {
  PointConfig<Complex> out = t;
  for (auto& g : out.groups)
    std::stable_sort(g.begin(), g.end(), [&](const Complex& a, const Complex& b) { return key_of(a, tol) < key_of(b, tol); });
  return out;
}

PointConfig<Complex> canonicalize_orbit(const PointConfig<Complex>& t, double tol) {
  PointConfig<Complex> out = canonical_order(t, tol);
  for (auto& g : out.groups)
    for (auto& x : g) {
      const auto k = key_of(x, tol);
      x = Complex(k.re, k.im);
    }
  return out;
}

namespace {

template <class F>
double max_abs_vec(const std::vector<F>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
  return m;
}

template <class F>
bool inside_margin(const VariableLayout& lay, const std::vector<F>& x, const std::vector<F>& z, double margin) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b)
      if (lay.pair[a][b] != 0 && static_cast<double>(std::abs(x[a] - x[b])) < margin) return false;
    for (std::size_t s = 0; s < z.size(); ++s)
      if (lay.site[a][s] != 0 && static_cast<double>(std::abs(x[a] - z[s])) < margin) return false;
  }
  return true;
}

/// Disc around the sites where starts are drawn.
struct Region {
  Complex center;
  double spread = 1.0;
};

Region search_region(const GaudinProblem& p) {
  Region r;
  for (const auto& s : p.z) r.center += s;
  r.center /= static_cast<double>(p.z.size());
  double far = 0.0;
  for (const auto& s : p.z) far = std::max(far, std::abs(s - r.center));
  r.spread = std::max(far, 0.5);
  return r;
}

/// Undamped Newton step in root coordinates; false if singular or the step
/// lands on a pole.
template <class F>
bool newton_step(const VariableLayout& lay, std::vector<F>& x, const std::vector<F>& z, double margin) {
  const auto psi = psi_flat(lay, x, z);
  Matrix<F> rhs(x.size(), 1);
  for (std::size_t a = 0; a < x.size(); ++a) rhs(a, 0) = -psi[a];
  Matrix<F> delta;
  try {
    delta = solve(hessian_flat(lay, x, z), rhs, 0.0);
  } catch (const GaudinError&) {
    return false;
  }
  std::vector<F> trial = x;
  for (std::size_t a = 0; a < x.size(); ++a) trial[a] += delta(a, 0);
  if (!inside_margin(lay, trial, z, margin)) return false;
  x = std::move(trial);
  return true;
}

using CPoly = Polynomial<Complex>;

/// The equations in terms of y_i(w) = prod over color i of (w - t_a), w = u - center.
/// For color i, Psi vanishes on the roots of y_i exactly when y_i divides
///   R_i = A T_i y_i'' - (A' T_i + A T_i') y_i',   A = y_{i-1} y_{i+1},
/// T_i = prod_s (w - z_s)^(m_is). The unknowns are the non-leading
/// coefficients of the monic y_i, and the residual is the remainder R_i mod y_i.
/// Working with coefficients removes the permutation symmetry and the
/// collision poles, which makes the Newton basins much larger.
class CoefficientSystem {
 public:
  CoefficientSystem(const GaudinProblem& p, Complex center) : l_(p.l), T_(p.l.size()), dT_(p.l.size()) {
    for (std::size_t i = 0; i < l_.size(); ++i) {
      CPoly t = CPoly::monomial(0);
      for (std::size_t s = 0; s < p.n(); ++s)
        for (int k = 0; k < p.pairing(s, static_cast<int>(i) + 1); ++k)
          t = t * CPoly({center - p.z[s], Complex(1)});
      T_[i] = t;
      dT_[i] = derivative(t);
    }
    for (int li : l_) offset_.push_back(size_), size_ += static_cast<std::size_t>(li);
  }

  std::size_t size() const { return size_; }

  std::vector<CPoly> polys(const std::vector<Complex>& c) const {
    std::vector<CPoly> y;
    for (std::size_t i = 0; i < l_.size(); ++i) {
      std::vector<Complex> v(c.begin() + static_cast<std::ptrdiff_t>(offset_[i]),
                             c.begin() + static_cast<std::ptrdiff_t>(offset_[i] + static_cast<std::size_t>(l_[i])));
      v.emplace_back(1.0);
      y.emplace_back(std::move(v));
    }
    return y;
  }

  std::vector<Complex> coefficients(const std::vector<Complex>& roots) const {
    std::vector<Complex> c;
    std::size_t a = 0;
    for (int li : l_) {
      const std::vector<Complex> r(roots.begin() + static_cast<std::ptrdiff_t>(a), roots.begin() + static_cast<std::ptrdiff_t>(a + li));
      a += static_cast<std::size_t>(li);
      const auto coeffs = CPoly::from_roots(r).coeffs();
      c.insert(c.end(), coeffs.begin(), coeffs.end() - 1);
    }
    return c;
  }

  std::vector<Complex> residual(const std::vector<Complex>& c) const {
    const auto y = polys(c);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < l_.size(); ++i) {
      if (l_[i] == 0) continue;
      append(out, R(i, neighbours(y, i), y[i]).divmod(y[i]).second, i);
    }
    return out;
  }

  Matrix<Complex> jacobian(const std::vector<Complex>& c) const {
    const auto y = polys(c);
    Matrix<Complex> J(size_, size_);
    for (std::size_t i = 0; i < l_.size(); ++i) {
      if (l_[i] == 0) continue;
      const auto A = neighbours(y, i);
      const auto q = R(i, A, y[i]).divmod(y[i]).first;
      for (std::size_t j = 0; j < l_.size(); ++j) {
        const bool adjacent = j + 1 == i || i + 1 == j;
        if (j != i && !adjacent) continue;
        for (int k = 0; k < l_[j]; ++k) {
          const auto dy = CPoly::monomial(k);
          CPoly dR;
          if (j == i) {
            dR = R(i, A, dy) - q * dy;
          } else {
            const std::size_t other = 2 * i - j;  // the far neighbour of i, if any
            const CPoly dA = other < l_.size() ? dy * y[other] : dy;
            dR = R(i, dA, y[i]);
          }
          std::vector<Complex> col;
          append(col, dR.divmod(y[i]).second, i);
          for (int r = 0; r < l_[i]; ++r)
            J(offset_[i] + static_cast<std::size_t>(r), offset_[j] + static_cast<std::size_t>(k)) = col[static_cast<std::size_t>(r)];
        }
      }
    }
    return J;
  }

 private:
  CPoly neighbours(const std::vector<CPoly>& y, std::size_t i) const {
    CPoly A = CPoly::monomial(0);
    if (i > 0) A = A * y[i - 1];
    if (i + 1 < y.size()) A = A * y[i + 1];
    return A;
  }

  // bilinear in (A, v)
  CPoly R(std::size_t i, const CPoly& A, const CPoly& v) const {
    const auto dv = derivative(v);
    return A * T_[i] * derivative(dv) - (derivative(A) * T_[i] + A * dT_[i]) * dv;
  }

  void append(std::vector<Complex>& out, const CPoly& r, std::size_t i) const {
    for (int k = 0; k < l_[i]; ++k) out.push_back(k <= r.degree() ? r.coeffs()[static_cast<std::size_t>(k)] : Complex{});
  }

  std::vector<int> l_;
  std::vector<CPoly> T_, dT_;
  std::vector<std::size_t> offset_;
  std::size_t size_ = 0;
};

double norm2(const std::vector<Complex>& v) {
  double r = 0.0;
  for (const auto& x : v) r += std::norm(x);
  return r;
}

std::vector<Complex> poly_roots(const CPoly& y) {
  const int d = y.degree();
  if (d <= 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < d; ++k) companion(k, d - 1) = -y.coeffs()[static_cast<std::size_t>(k)];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  std::vector<Complex> out;
  for (int k = 0; k < d; ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

struct StartResult {
  bool converged = false;
  std::vector<Complex> x;
  double residual = 0.0;
};

std::uint64_t splitmix(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

StartResult run_start(const GaudinProblem& p, const VariableLayout& lay, const SolverConfig& cfg, const Region& region,
                      const CoefficientSystem& sys, std::size_t index) {
  std::mt19937_64 rng(splitmix(cfg.seed ^ splitmix(index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double margin = cfg.pole_margin * p.scale();
  const auto& z = p.z;
  // even starts fill the disc over the sites, odd ones cluster near a site
  std::vector<Complex> w(lay.color.size());
  const bool anchored = index % 2 == 1;
  for (auto& wa : w) {
    const double rr = std::sqrt(unit(rng));
    const double th = 2.0 * M_PI * unit(rng);
    if (anchored) {
      const auto s = static_cast<std::size_t>(unit(rng) * static_cast<double>(z.size())) % z.size();
      wa = z[s] - region.center + std::polar(0.5 * region.spread * rr, th);
    } else {
      wa = std::polar(1.25 * region.spread * rr, th);
    }
  }
  auto c = sys.coefficients(w);
  double r0 = norm2(sys.residual(c));
  for (int it = 0; it < cfg.max_iterations && r0 > 0.0; ++it) {
    const auto f = sys.residual(c);
    Matrix<Complex> rhs(c.size(), 1);
    for (std::size_t a = 0; a < c.size(); ++a) rhs(a, 0) = -f[a];
    Matrix<Complex> delta;
    try {
      delta = solve(sys.jacobian(c), rhs, 0.0);
    } catch (const GaudinError&) {
      break;
    }
    bool moved = false;
    double lambda = 1.0;
    for (int halving = 0; halving < 30 && !moved; ++halving, lambda *= 0.5) {
      auto trial = c;
      for (std::size_t a = 0; a < c.size(); ++a) trial[a] += lambda * delta(a, 0);
      const double r = norm2(sys.residual(trial));
      if (r < r0) {
        c = std::move(trial);
        r0 = r;
        moved = true;
      }
    }
    if (!moved) break;
    double step = 0.0, size = 1.0;
    for (std::size_t a = 0; a < c.size(); ++a) {
      step = std::max(step, lambda * 2.0 * std::abs(delta(a, 0)));
      size = std::max(size, std::abs(c[a]));
    }
    if (step < 1e-13 * size) break;
  }
  StartResult out;
  // back to roots, then a few Newton steps on Psi itself
  std::vector<Complex> x;
  for (const auto& y : sys.polys(c))
    for (const auto& r : poly_roots(y)) x.push_back(r + region.center);
  if (!inside_margin(lay, x, z, margin)) return out;
  for (int k = 0; k < 4; ++k) {
    if (max_abs_vec(psi_flat(lay, x, z)) < 1e-3 * cfg.tol_residual) break;
    if (!newton_step(lay, x, z, margin)) break;
  }
  out.residual = max_abs_vec(psi_flat(lay, x, z));
  out.converged = out.residual < cfg.tol_residual;
  out.x = std::move(x);
  return out;
}

/// Extended precision refinement of an accepted double root.
std::vector<Complex> polish_long_double(const GaudinProblem& p, const VariableLayout& lay, const std::vector<Complex>& x0,
                                        double margin, double& residual) {
  std::vector<ComplexLD> x;
  for (const auto& v : x0) x.emplace_back(v.real(), v.imag());
  const auto z = p.sites<ComplexLD>();
  for (int k = 0; k < 3; ++k)
    if (!newton_step(lay, x, z, margin)) break;
  residual = max_abs_vec(psi_flat(lay, x, z));
  std::vector<Complex> out;
  for (const auto& v : x) out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  return out;
}

bool same_orbit(const PointConfig<Complex>& a, const PointConfig<Complex>& b, double tol) {
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    std::vector<char> used(b.groups[g].size(), 0);
    for (const auto& x : a.groups[g]) {
      bool found = false;
      for (std::size_t k = 0; k < b.groups[g].size() && !found; ++k)
        if (!used[k] && std::abs(x - b.groups[g][k]) < tol) {
          used[k] = 1;
          found = true;
        }
      if (!found) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<CriticalOrbit> find_critical_orbits(const GaudinProblem& p, const SolverConfig& cfg,
                                                std::optional<std::size_t> target) {
  const auto lay = variable_layout(p);
  auto annotate = [&](CriticalOrbit& o) {
    const auto h = hessian_log_phi(p, o.rep);
    o.hessian = h.determinant;
    o.degenerate = hessian_degenerate(h.matrix, h.determinant, cfg.tol_degenerate);
    o.milnor = o.degenerate ? std::nullopt : std::optional<int>(1);
  };
  std::vector<CriticalOrbit> orbits;
  if (p.l_total == 0) {
    CriticalOrbit o;
    o.rep = PointConfig<Complex>::unflatten({}, p.l);
    annotate(o);
    orbits.push_back(o);
    return orbits;
  }
  const std::size_t total = cfg.starts ? cfg.starts : 2000 * std::max<std::size_t>(target.value_or(1), 1);
  const std::size_t batch = 32;
  const unsigned threads = std::max(1u, cfg.threads);
  const double margin = cfg.pole_margin * p.scale();
  const double dedup = cfg.tol_dedup * p.scale();
  const auto region = search_region(p);
  const CoefficientSystem sys(p, region.center);
  for (std::size_t first = 0; first < total; first += batch) {
    const std::size_t count = std::min(batch, total - first);
    std::vector<StartResult> results(count);
    auto work = [&](unsigned tid) {
      for (std::size_t k = tid; k < count; k += threads) results[k] = run_start(p, lay, cfg, region, sys, first + k);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
      for (auto& th : pool) th.join();
    }
    for (auto& r : results) {
      if (!r.converged) continue;
      double residual = r.residual;
      auto x = r.x;
      if (cfg.precision == "long-double") x = polish_long_double(p, lay, x, margin, residual);
      const auto rep = canonical_order(PointConfig<Complex>::unflatten(x, p.l), cfg.tol_dedup);
      if (std::any_of(orbits.begin(), orbits.end(), [&](const CriticalOrbit& o) { return same_orbit(o.rep, rep, dedup); }))
        continue;
      CriticalOrbit o;
      o.rep = rep;
      o.residual = residual;
      annotate(o);
      orbits.push_back(std::move(o));
    }
    if (target && orbits.size() >= *target &&
        std::none_of(orbits.begin(), orbits.end(), [](const CriticalOrbit& o) { return o.degenerate; }))
      break;
  }
  std::sort(orbits.begin(), orbits.end(), [&](const CriticalOrbit& a, const CriticalOrbit& b) {
    return flat_key(a.rep, cfg.tol_dedup) < flat_key(b.rep, cfg.tol_dedup);
  });
  return orbits;
}

}  // namespace gaudin
