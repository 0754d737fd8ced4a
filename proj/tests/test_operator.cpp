#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "nyqenv/eigensolver.hpp"
#include "nyqenv/error.hpp"
#include "nyqenv/operator.hpp"

using namespace nyqenv;

namespace {

Grid default_grid() { return Grid::make(-16.0, 32.0, 0.1, NyquistSupport::Required); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(to_string(Scheme::CentralDifference) == "cd");
  CHECK(to_string(Scheme::Numerov) == "numerov");
  CHECK(parse_scheme("numerov") == Scheme::Numerov);
  CHECK_THROWS_AS(parse_scheme("spectral"), InvalidArgument);
}

TEST_CASE("free operator on four points") {
  const Grid g = Grid::make(0.0, 4.0, 1.0);
  const auto op = assemble(Scheme::CentralDifference, Potential::zero(), g);
  CHECK(op.stiffness().diag == std::vector<double>{2, 2, 2, 2});
  CHECK(op.stiffness().edge == std::vector<double>{-1, -1, -1, -1});
  CHECK(op.mass().diag == std::vector<double>{1, 1, 1, 1});
  CHECK(op.mass().edge == std::vector<double>{0, 0, 0, 0});

  const auto s = eigen_full(op);
  REQUIRE(s.size() == 4);
  CHECK(s.pairs[0].lambda == doctest::Approx(4.0));
  CHECK(s.pairs[1].lambda == doctest::Approx(2.0));
  CHECK(s.pairs[2].lambda == doctest::Approx(2.0));
  CHECK(std::abs(s.pairs[3].lambda) < 1e-14);
}

TEST_CASE("operator needs three points") {
  CHECK_THROWS_AS(assemble(Scheme::CentralDifference, Potential::zero(), Grid::make(0.0, 2.0, 1.0)),
                  InvalidArgument);
  CHECK_NOTHROW(assemble(Scheme::CentralDifference, Potential::zero(), Grid::make(0.0, 3.0, 1.0)));
}

TEST_CASE("central difference entries on the reference grid") {
  const auto op = assemble(Scheme::CentralDifference, Potential::sech(3.0, 0.5), default_grid());
  const auto& a = op.stiffness();
  // 2/h^2 is 199.99999999999997 in binary floating point.
  CHECK(a.diag[160] == doctest::Approx(203.0).epsilon(1e-14));
  CHECK(a.diag[160] == 2.0 / (0.1 * 0.1) + 3.0);
  for (double e : a.edge) CHECK(e == -1.0 / (0.1 * 0.1));
  CHECK(a.at(0, 319) == -1.0 / (0.1 * 0.1));
  CHECK(a.at(319, 0) == -1.0 / (0.1 * 0.1));
  CHECK(a.at(0, 5) == 0.0);
  CHECK(op.mass_is_identity());
}

TEST_CASE("numerov entries") {
  const Grid g = Grid::make(0.0, 8.0, 0.5);
  std::vector<double> v(g.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::sin(static_cast<double>(n));
  const auto op = assemble(Scheme::Numerov, v, g);
  const double ih2 = 1.0 / (0.5 * 0.5);
  for (std::size_t n = 0; n < v.size(); ++n) {
    CHECK(op.mass().diag[n] == doctest::Approx(10.0 / 12.0));
    CHECK(op.mass().edge[n] == doctest::Approx(1.0 / 12.0));
    CHECK(op.stiffness().diag[n] == doctest::Approx(2.0 * ih2 + 10.0 / 12.0 * v[n]));
    CHECK(op.stiffness().edge[n] == doctest::Approx(-ih2 + (v[n] + v[(n + 1) % v.size()]) / 24.0));
  }
}

TEST_CASE("symmetry is bitwise") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const Grid g = Grid::make(-3.0, 6.0, 0.25);
  std::vector<double> v(g.size());
  for (double& x : v) x = u(rng);
  for (Scheme scheme : {Scheme::CentralDifference, Scheme::Numerov}) {
    const auto op = assemble(scheme, v, g);
    const std::size_t n = op.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> ei(n, 0.0);
      ei[i] = 1.0;
      const auto ai = apply_operator(op, ei);
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> ej(n, 0.0);
        ej[j] = 1.0;
        const auto aj = apply_operator(op, ej);
        CHECK(ai.stiffness[j] == aj.stiffness[i]);
        CHECK(ai.mass[j] == aj.mass[i]);
      }
    }
  }
}

TEST_CASE("constant shift is a multiple of the mass") {
  const Grid g = Grid::make(-16.0, 32.0, 0.2);
  const auto base = sample_potential(Potential::sech(3.0, 0.5), g);
  const double c = 1.75;
  std::vector<double> shifted(base);
  for (double& x : shifted) x += c;
  for (Scheme scheme : {Scheme::CentralDifference, Scheme::Numerov}) {
    const auto a0 = assemble(scheme, base, g);
    const auto a1 = assemble(scheme, shifted, g);
    for (std::size_t n = 0; n < g.size(); ++n) {
      CHECK(a1.stiffness().diag[n] == doctest::Approx(a0.stiffness().diag[n] + c * a0.mass().diag[n]).epsilon(1e-14));
      CHECK(a1.stiffness().edge[n] == doctest::Approx(a0.stiffness().edge[n] + c * a0.mass().edge[n]).epsilon(1e-14));
    }
  }
}

TEST_CASE("apply on special vectors") {
  const Grid g = default_grid();
  const std::size_t n = g.size();
  const std::vector<double> ones(n, 1.0);
  std::vector<double> alternating(n);
  for (std::size_t i = 0; i < n; ++i) alternating[i] = i % 2 ? -1.0 : 1.0;

  const auto cd = assemble(Scheme::CentralDifference, Potential::zero(), g);
  CHECK(max_abs(apply_operator(cd, ones).stiffness) == 0.0);
  const auto nyq = apply_operator(cd, alternating);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(nyq.stiffness[i] == doctest::Approx(400.0 * alternating[i]).epsilon(1e-14));
  }

  const auto nv = assemble(Scheme::Numerov, Potential::zero(), g);
  const auto p = apply_operator(nv, ones);
  CHECK(max_abs(p.stiffness) == 0.0);
  for (double x : p.mass) CHECK(x == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(apply_operator(cd, std::vector<double>(n - 1, 0.0)), InvalidArgument);
}

TEST_CASE("nyquist ceilings") {
  CHECK(nyquist_ceiling(Scheme::CentralDifference, 0.1) == doctest::Approx(400.0).epsilon(1e-15));
  CHECK(nyquist_ceiling(Scheme::Numerov, 0.1) == doctest::Approx(600.0).epsilon(1e-15));
  // The carrier is an exact Numerov eigenvector with eigenvalue 6/h^2.
  const Grid g = Grid::make(0.0, 4.0, 0.5);
  const auto op = assemble(Scheme::Numerov, Potential::zero(), g);
  std::vector<double> alt(g.size());
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  const auto p = apply_operator(op, alt);
  for (std::size_t i = 0; i < alt.size(); ++i) {
    CHECK(p.stiffness[i] == doctest::Approx(nyquist_ceiling(Scheme::Numerov, 0.5) * p.mass[i]));
  }
}

TEST_CASE("gershgorin bound holds for the computed spectrum") {
  const Grid g = default_grid();
  for (double amplitude : {3.0, -3.0}) {
    const auto v = sample_potential(Potential::sech(amplitude, 0.5), g);
    const double vmin = *std::min_element(v.begin(), v.end());
    const double vmax = *std::max_element(v.begin(), v.end());
    const auto s = eigen_full(assemble(Scheme::CentralDifference, v, g));
    const double slack = 1e-10 * 404.0;
    CHECK(s.pairs.front().lambda <= 400.0 + vmax + slack);
    CHECK(s.pairs.back().lambda >= vmin - slack);
  }
}

TEST_CASE("consistency order on a smooth function") {
  // psi = cos(2 pi x / L), V = 3 sech(x/2).
  const auto p = Potential::sech(3.0, 0.5);
  const double k = 2.0 * std::numbers::pi / 32.0;
  const auto error = [&](Scheme scheme, const Potential& pot, double h) {
    const Grid g = Grid::make(-16.0, 32.0, h);
    const auto op = assemble(scheme, pot, g);
    std::vector<double> psi(g.size());
    std::vector<double> exact(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
      psi[n] = std::cos(k * g.x(n));
      exact[n] = k * k * psi[n] + pot(g.x(n)) * psi[n];
    }
    const auto prod = apply_operator(op, psi);
    // Numerov targets B(-psi'' + V psi) rather than -psi'' + V psi.
    std::vector<double> target = exact;
    if (scheme == Scheme::Numerov) op.mass().multiply(exact, target);
    double e = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) e = std::max(e, std::abs(prod.stiffness[n] - target[n]));
    return e;
  };

  SUBCASE("central difference is second order") {
    const double e1 = error(Scheme::CentralDifference, p, 0.4);
    const double e2 = error(Scheme::CentralDifference, p, 0.2);
    const double e3 = error(Scheme::CentralDifference, p, 0.1);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.15));
  }
  SUBCASE("numerov is fourth order for the kinetic part") {
    const double e1 = error(Scheme::Numerov, Potential::zero(), 0.4);
    const double e2 = error(Scheme::Numerov, Potential::zero(), 0.2);
    const double e3 = error(Scheme::Numerov, Potential::zero(), 0.1);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.075));
    CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.075));
  }
}

TEST_CASE("numerov eigenvalues converge at fourth order") {
  // Ground state of -d2 - 1.5 sech^2(x/2), against a fine reference. The
  // symmetrized potential term leaves Rayleigh quotients intact.
  const auto lowest = [](Scheme scheme, double h) {
    const Grid g = Grid::make(-16.0, 32.0, h);
    std::vector<double> v(g.size());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = -1.5 / std::pow(std::cosh(0.5 * g.x(n)), 2);
    const auto op = assemble(scheme, v, g);
    const auto s = eigen_interval(op, -10.0, 0.0);
    return s.pairs.back().lambda;
  };
  const double ref = lowest(Scheme::Numerov, 0.025);
  const double e1 = std::abs(lowest(Scheme::Numerov, 0.4) - ref);
  const double e2 = std::abs(lowest(Scheme::Numerov, 0.2) - ref);
  const double e3 = std::abs(lowest(Scheme::Numerov, 0.1) - ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.075));
  CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.075));
  // Poeschl-Teller ground state on the line is -1.
  CHECK(ref == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("operator csv dump matches the golden file") {
  const Grid g = Grid::make(0.0, 4.0, 1.0);
  const auto op = assemble(Scheme::CentralDifference, std::vector<double>{0.5, 1.0, 1.5, 2.0}, g);
  std::ostringstream out;
  write_operator_csv(out, op);
  CHECK(out.str() == slurp(std::string(NYQENV_GOLDEN_DIR) + "/operator_n4.csv"));

  std::ostringstream mass;
  write_operator_csv(mass, assemble(Scheme::Numerov, Potential::zero(), g), OperatorPart::Mass);
  CHECK(mass.str().rfind("i,j,value\n0,0,0.83333333333333337\n", 0) == 0);
}
