#include <random>

#include "doctest.h"
#include "gaudin/master.hpp"

using namespace gaudin;

namespace {

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

GaudinProblem canonical() { return GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {1}, {Rational(0), Rational(1)}); }

struct Setup {
  int N;
  std::vector<std::vector<int>> lams;
  std::vector<int> l;
  std::vector<Rational> z;
};

std::vector<Setup> suite() {
  return {
      {1, {{1, 0}, {1, 0}}, {1}, {0, 1}},
      {1, {{1, 0}, {1, 0}, {1, 0}}, {1}, {0, 1, 2}},
      {1, {{1, 0}, {1, 0}, {1, 0}}, {0}, {0, 1, 2}},
      {1, {{2, 0}, {2, 0}, {1, 0}}, {2}, {Rational(-1, 2), 1, Rational(5, 3)}},
      {2, {{1, 0, 0}, {1, 1, 0}}, {1, 1}, {0, Rational(3, 2)}},
      {2, {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}, {2, 1}, {0, 1, Rational(-2, 3)}},
      {2, {{2, 1, 0}, {1, 0, 0}}, {1, 1}, {Rational(1, 4), -1}},
  };
}

GaudinProblem make(const Setup& s) {
  std::vector<Partition> parts;
  for (const auto& l : s.lams) parts.push_back(P(l));
  return GaudinProblem::create(s.N, parts, s.l, s.z);
}

template <class Rng>
Rational random_rational(Rng& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 13);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

template <class Rng>
Complex random_complex(Rng& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {d(rng), d(rng)};
}

template <class T, class Gen>
PointConfig<T> random_point(const GaudinProblem& p, Gen&& gen) {
  // retry until the point lies in U
  for (;;) {
    PointConfig<T> t;
    for (int li : p.l) {
      t.groups.emplace_back();
      for (int j = 0; j < li; ++j) t.groups.back().push_back(gen());
    }
    try {
      log_phi_and_gradient(p, t);
      return t;
    } catch (const PointNotInU&) {
    }
  }
}

}  // namespace

TEST_CASE("gradient of log Phi: hand examples") {
  const auto p = canonical();
  const auto g = log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(1, 2)}}});
  REQUIRE(g.psi.size() == 1);
  CHECK(g.psi[0] == 0);
  CHECK(log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(1, 4)}}}).psi[0] == Rational(-8, 3));
  CHECK_THROWS_AS(log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(0)}}}), PointNotInU);

  const auto empty = GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {0}, {Rational(0), Rational(1)});
  const auto ge = log_phi_and_gradient(empty, PointConfig<Rational>{{{}}});
  CHECK(ge.psi.empty());
  CHECK(ge.log_phi == Complex(0.0, 0.0));
  CHECK(hessian_log_phi(empty, PointConfig<Rational>{{{}}}).determinant == 1);
}

TEST_CASE("collisions that leave U") {
  const auto p = GaudinProblem::create(2, {P({1, 0, 0}), P({1, 1, 0})}, {1, 1}, {Rational(0), Rational(1)});
  // t^(1) = t^(2) collides, t^(2) = z_1 is harmless since (eps_1, alpha_2) = 0
  CHECK_THROWS_AS(log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(1, 3)}, {Rational(1, 3)}}}), PointNotInU);
  CHECK_NOTHROW(log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(1, 3)}, {Rational(0)}}}));
  CHECK_THROWS_AS(log_phi_and_gradient(p, PointConfig<Rational>{{{Rational(1, 3)}, {Rational(1)}}}), PointNotInU);
  const auto q = GaudinProblem::create(1, {P({2, 0}), P({2, 0})}, {2}, {Rational(0), Rational(1)});
  CHECK_THROWS_AS(log_phi_and_gradient(q, PointConfig<Rational>{{{Rational(2), Rational(2)}}}), PointNotInU);
}

TEST_CASE("Hessian: hand example and exact symmetry") {
  const auto h = hessian_log_phi(canonical(), PointConfig<Rational>{{{Rational(1, 2)}}});
  CHECK(h.determinant == 8);
  std::mt19937 rng(11);
  for (const auto& s : suite()) {
    const auto p = make(s);
    const auto t = random_point<Rational>(p, [&] { return random_rational(rng); });
    const auto hm = hessian_log_phi(p, t).matrix;
    CHECK(hm == hm.transpose());
  }
}

TEST_CASE("gradient and Hessian against finite differences") {
  std::mt19937 rng(5);
  const double h = 1e-5;
  for (const auto& s : suite()) {
    const auto p = make(s);
    if (p.l_total == 0) continue;
    for (int draw = 0; draw < 20; ++draw) {
      const auto t = random_point<Complex>(p, [&] { return random_complex(rng); });
      const auto x = t.flat();
      const auto g = log_phi_and_gradient(p, t).psi;
      const auto hm = hessian_log_phi(p, t).matrix;
      for (std::size_t a = 0; a < x.size(); ++a) {
        auto at = [&](Complex shift) {
          auto y = x;
          y[a] += shift;
          return PointConfig<Complex>::unflatten(y, p.l);
        };
        // d/dh log|Phi| along a real step is Re Psi, along an imaginary step -Im Psi
        const double dre = (log_phi_and_gradient(p, at(h)).log_phi.real() - log_phi_and_gradient(p, at(-h)).log_phi.real()) / (2 * h);
        const Complex ih(0.0, h);
        const double dim = (log_phi_and_gradient(p, at(ih)).log_phi.real() - log_phi_and_gradient(p, at(-ih)).log_phi.real()) / (2 * h);
        const double scale = std::max(1.0, std::abs(g[a]));
        CHECK(std::abs(dre - g[a].real()) / scale < 1e-6);
        CHECK(std::abs(dim + g[a].imag()) / scale < 1e-6);
        // column a of the Hessian from central differences of Psi
        const auto gp = log_phi_and_gradient(p, at(h)).psi;
        const auto gm = log_phi_and_gradient(p, at(-h)).psi;
        for (std::size_t b = 0; b < x.size(); ++b) {
          const Complex fd = (gp[b] - gm[b]) / (2 * h);
          CHECK(std::abs(fd - hm(b, a)) / std::max(1.0, std::abs(hm(b, a))) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("invariance under permutations within a group") {
  const auto p = GaudinProblem::create(2, {P({1, 0, 0}), P({1, 0, 0}), P({1, 0, 0})}, {2, 1},
                                       {Rational(0), Rational(1), Rational(-2, 3)});
  std::mt19937 rng(3);
  for (int draw = 0; draw < 5; ++draw) {
    const auto t = random_point<Rational>(p, [&] { return random_rational(rng); });
    auto s = t;
    std::swap(s.groups[0][0], s.groups[0][1]);
    const auto gt = log_phi_and_gradient(p, t);
    const auto gs = log_phi_and_gradient(p, s);
    // log Phi agrees up to the branch of the logarithm
    CHECK(std::abs(std::exp(gt.log_phi - gs.log_phi) - 1.0) < 1e-12);
    CHECK(gt.psi[0] == gs.psi[1]);
    CHECK(gt.psi[1] == gs.psi[0]);
    CHECK(gt.psi[2] == gs.psi[2]);
    CHECK(hessian_log_phi(p, t).determinant == hessian_log_phi(p, s).determinant);
    CHECK(master_operator_at(p, t).coefficient(0) == master_operator_at(p, s).coefficient(0));
  }
}

TEST_CASE("canonical representatives") {
  const PointConfig<Complex> a{{{Complex(3, 0), Complex(1, 0)}}};
  const auto c = canonicalize_orbit(a, 1e-8);
  CHECK(c.groups[0] == std::vector<Complex>{Complex(1, 0), Complex(3, 0)});
  CHECK(canonicalize_orbit(c, 1e-8).groups == c.groups);
  const PointConfig<Complex> b{{{Complex(1 + 1e-9, 0), Complex(3, -1e-10)}}};
  CHECK(canonicalize_orbit(b, 1e-8).groups == c.groups);
  const PointConfig<Complex> tie{{{Complex(1, 2), Complex(1, -2)}}};
  CHECK(canonicalize_orbit(tie, 1e-8).groups[0][0] == Complex(1, -2));
}

TEST_CASE("critical orbits") {
  SolverConfig cfg;
  cfg.seed = 7;

  auto orbits = find_critical_orbits(canonical(), cfg, 1);
  REQUIRE(orbits.size() == 1);
  CHECK(std::abs(orbits[0].rep.groups[0][0] - 0.5) < 1e-12);
  CHECK(std::abs(orbits[0].hessian - 8.0) < 1e-9);
  CHECK_FALSE(orbits[0].degenerate);
  CHECK(orbits[0].milnor == 1);

  // sum_s 1/(t - z_s) = 0 for z = (0, 1, 2): 3t^2 - 6t + 2 = 0
  const auto three = GaudinProblem::create(1, {P({1, 0}), P({1, 0}), P({1, 0})}, {1}, {Rational(0), Rational(1), Rational(2)});
  orbits = find_critical_orbits(three, cfg);
  REQUIRE(orbits.size() == 2);
  CHECK(std::abs(orbits[0].rep.groups[0][0] - (1.0 - 1.0 / std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(orbits[1].rep.groups[0][0] - (1.0 + 1.0 / std::sqrt(3.0))) < 1e-12);
  for (const auto& o : orbits) CHECK(o.residual < cfg.tol_residual);

  const auto empty = GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {0}, {Rational(0), Rational(1)});
  orbits = find_critical_orbits(empty, cfg);
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0].rep.groups[0].empty());
  CHECK(orbits[0].hessian == Complex(1.0, 0.0));

  // a single orbit t1 = (2 z1 + z2)/3, t2 = (z1 + 2 z2)/3
  const Rational z1(1, 3), z2(-2);
  const auto mixed = GaudinProblem::create(2, {P({1, 0, 0}), P({1, 1, 0})}, {1, 1}, {z1, z2});
  orbits = find_critical_orbits(mixed, cfg);
  REQUIRE(orbits.size() == 1);
  CHECK(std::abs(orbits[0].rep.groups[0][0] - Rational((2 * z1 + z2) / 3).get_d()) < 1e-10);
  CHECK(std::abs(orbits[0].rep.groups[1][0] - Rational((z1 + 2 * z2) / 3).get_d()) < 1e-10);
  // and the exact point is critical
  const PointConfig<Rational> exact{{{Rational((2 * z1 + z2) / 3)}, {Rational((z1 + 2 * z2) / 3)}}};
  for (const auto& v : log_phi_and_gradient(mixed, exact).psi) CHECK(v == 0);

  // two variables of one color: the roots are the zeros of the degree 2 Heine-Stieltjes polynomial
  const auto two = GaudinProblem::create(1, {P({1, 0}), P({1, 0}), P({1, 0}), P({1, 0})}, {2},
                                         {Rational(0), Rational(1), Rational(3), Rational(-2)});
  orbits = find_critical_orbits(two, cfg, 2);
  CHECK(orbits.size() == 2);
  for (const auto& o : orbits) {
    CHECK(o.residual < cfg.tol_residual);
    CHECK(std::abs(o.rep.groups[0][0] - o.rep.groups[0][1]) > 1e-6);
  }
}

// Standard tableaux of shape mu, by the hook length formula.
static long tableaux(const std::vector<int>& mu) {
  int n = 0;
  for (int r : mu) n += r;
  double count = 1.0;
  for (int k = 2; k <= n; ++k) count *= k;
  for (std::size_t r = 0; r < mu.size(); ++r)
    for (int c = 0; c < mu[r]; ++c) {
      int below = 0;
      for (std::size_t s = r + 1; s < mu.size(); ++s) below += mu[s] > c ? 1 : 0;
      count /= mu[r] - c + below;
    }
  return std::lround(count);
}

TEST_CASE("solver coverage on tensor powers of the vector representation") {
  // For V^(n) the singular vectors of weight mu are counted by the
  // standard tableaux of shape mu; at generic sites each gives one orbit.
  struct Power {
    int N;
    std::vector<int> l;
    std::vector<int> shape;
    std::vector<Rational> z;
  };
  const std::vector<Power> cases = {
      {1, {3}, {3, 3}, {0, 1, 2, -1, Rational(1, 2), Rational(5, 2)}},
      {1, {4}, {4, 4}, {0, 1, 2, -1, Rational(1, 2), Rational(5, 2), Rational(-3, 2), 3}},
      {2, {4, 2}, {2, 2, 2}, {0, 1, 2, -1, Rational(1, 2), Rational(5, 2)}},
      {2, {3, 1}, {2, 2, 1}, {0, Rational(1, 3), 2, -1, Rational(7, 4)}},
  };
  for (const auto& c : cases) {
    const auto expected = static_cast<std::size_t>(tableaux(c.shape));
    std::vector<int> vec(static_cast<std::size_t>(c.N) + 1, 0);
    vec[0] = 1;
    const std::vector<Partition> parts(c.z.size(), P(vec));
    const auto p = GaudinProblem::create(c.N, parts, c.l, c.z);
    for (std::uint64_t seed : {1u, 2u}) {
      SolverConfig cfg;
      cfg.seed = seed;
      const auto orbits = find_critical_orbits(p, cfg, expected);
      CHECK(orbits.size() == expected);
      for (const auto& o : orbits) {
        CHECK(o.residual < cfg.tol_residual);
        CHECK_FALSE(o.degenerate);
      }
    }
  }
}

TEST_CASE("solver is deterministic and thread-count independent") {
  const auto p = GaudinProblem::create(2, {P({1, 0, 0}), P({1, 0, 0}), P({1, 0, 0})}, {2, 1},
                                       {Rational(0), Rational(1), Rational(-2, 3)});
  SolverConfig cfg;
  cfg.seed = 99;
  cfg.starts = 96;
  const auto a = find_critical_orbits(p, cfg);
  cfg.threads = 3;
  const auto b = find_critical_orbits(p, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].rep.groups == b[k].rep.groups);
  cfg.precision = "long-double";
  for (const auto& o : find_critical_orbits(p, cfg)) CHECK(o.residual < 1e-12);
}

TEST_CASE("D_Phi: first coefficient and the canonical example") {
  using RF = RationalFunction<Rational>;
  const auto d = master_operator_at(canonical(), PointConfig<Rational>{{{Rational(1, 2)}}});
  CHECK(d.order() == 2);
  CHECK(d.coefficient(2) == RF::constant(1));
  CHECK(d.coefficient(0) == RF(Polynomial<Rational>::constant(2), Polynomial<Rational>::from_roots({Rational(0), Rational(1)})));
  const auto series = series_at_infinity(d.coefficient(0), 3);
  CHECK(series[1] == 0);
  CHECK(series[2] == 2);

  std::mt19937 rng(17);
  for (const auto& s : suite()) {
    const auto p = make(s);
    RF expected;
    for (std::size_t k = 0; k < p.n(); ++k)
      expected = expected + RF(Polynomial<Rational>::constant(-p.lambdas[k].size()), Polynomial<Rational>::linear_factor(s.z[k]));
    for (int draw = 0; draw < 3; ++draw) {
      const auto t = random_point<Rational>(p, [&] { return random_rational(rng); });
      const auto dp = master_operator_at(p, t);
      CHECK(dp.coefficient(p.N) == expected);
      // jets agree with the rational coefficients
      const Rational u0(37, 11);
      const auto g = master_coefficients_at(p, t, u0);
      for (int i = 1; i <= p.N + 1; ++i) CHECK(g[static_cast<std::size_t>(i - 1)] == dp.coefficient(p.N + 1 - i).evaluate(u0));
    }
  }

  // l = 0: (d - log'(T_1)) d
  const auto empty = GaudinProblem::create(1, {P({2, 0}), P({1, 0})}, {0}, {Rational(0), Rational(1)});
  const auto de = master_operator_at(empty, PointConfig<Rational>{{{}}});
  CHECK(de.coefficient(0) == RF());
  CHECK(de.coefficient(1) == -RF::log_derivative(Polynomial<Rational>::from_roots({0, 0, 1})));
}

TEST_CASE("residues at nondegenerate points") {
  CHECK(residue_nondegenerate(Rational(8), Rational(8)) == 1);
  CHECK(residue_nondegenerate(Rational(0), Rational(8)) == 0);
  const Complex h(2.0, -1.0);
  CHECK(std::abs(residue_nondegenerate(h, h) - 1.0) < 1e-15);
  CHECK_THROWS_AS(residue_nondegenerate(Rational(1), Rational(0)), DegenerateCriticalPoint);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(GaudinProblem::create(1, {P({1, 1}), P({1, 0})}, {1}, {Rational(0), Rational(1)}), NotAPartition);
  CHECK_THROWS_AS(GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {1}, {Rational(0), Rational(0)}), DistinctnessError);
  CHECK_THROWS_AS(GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {3}, {Rational(0), Rational(1)}), NotAPartition);
  const auto p = GaudinProblem::create(1, {P({1, 0}), P({1, 0})}, {1}, {Complex(0, 0), Complex(1, 0.5)});
  CHECK_FALSE(p.exact());
  CHECK(canonical().exact());
  CHECK(canonical().lambda_inf == P({1, 1}));
}
