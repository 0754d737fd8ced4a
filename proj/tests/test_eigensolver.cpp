#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "dense.hpp"
#include "nyqenv/eigensolver.hpp"
#include "nyqenv/error.hpp"

using namespace nyqenv;

namespace {

Grid default_grid() { return Grid::make(-16.0, 32.0, 0.1, NyquistSupport::Required); }

DiscreteOperator random_operator(Scheme scheme, std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Grid g = Grid::make(0.0, static_cast<double>(n) * 0.25, 0.25);
  std::vector<double> v(g.size());
  for (double& x : v) x = u(rng);
  return assemble(scheme, v, g);
}

double inner_b(const DiscreteOperator& op, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> bb(b.size());
  op.mass().multiply(b, bb);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * bb[i];
  return s;
}

}  // namespace

TEST_CASE("two by two by hand") {
  const auto r = dense::symmetric_eigen({2.0, -1.0, -1.0, 2.0}, 2);
  CHECK(r.values[0] == doctest::Approx(1.0));
  CHECK(r.values[1] == doctest::Approx(3.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(r.vectors[0]) == doctest::Approx(s));
  CHECK(r.vectors[0] * r.vectors[1] > 0.0);  // (1, 1)
  CHECK(r.vectors[2] * r.vectors[3] < 0.0);  // (1, -1)
}

TEST_CASE("dense kernel against Eigen on random symmetric matrices") {
  std::mt19937 rng(3);
  std::normal_distribution<double> z;
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u}) {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = z(rng);
    std::vector<double> a(m.data(), m.data() + n * n);
    const auto ours = dense::symmetric_eigen(a, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m);
    for (std::size_t k = 0; k < n; ++k) CHECK(ours.values[k] == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-12));
  }
}

TEST_CASE("generalized problems against Eigen") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto op = random_operator(Scheme::Numerov, 40, seed);
    const auto ours = eigen_full(op);
    const Eigen::MatrixXd a = Eigen::Map<const Eigen::MatrixXd>(op.stiffness().dense().data(), 40, 40);
    const Eigen::MatrixXd b = Eigen::Map<const Eigen::MatrixXd>(op.mass().dense().data(), 40, 40);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(a, b);
    for (int k = 0; k < 40; ++k) {
      CHECK(ours.pairs[static_cast<std::size_t>(k)].lambda ==
            doctest::Approx(ref.eigenvalues()(39 - k)).epsilon(1e-11));
    }
  }
}

TEST_CASE("free spectrum matches the circulant closed form") {
  const Grid g = default_grid();
  const auto s = eigen_full(assemble(Scheme::CentralDifference, Potential::zero(), g));
  REQUIRE(s.size() == 320);
  std::vector<double> expected;
  for (int k = 0; k < 320; ++k) expected.push_back(400.0 * std::pow(std::sin(std::numbers::pi * k / 320.0), 2));
  std::sort(expected.rbegin(), expected.rend());
  double worst = 0.0;
  for (std::size_t i = 0; i < 320; ++i) {
    const double scale = std::max(expected[i], 1.0);
    worst = std::max(worst, std::abs(s.pairs[i].lambda - expected[i]) / scale);
  }
  CHECK(worst <= 1e-9);
  CHECK(s.pairs[0].lambda == doctest::Approx(400.0).epsilon(1e-13));
  // interior eigenvalues are double
  CHECK(s.pairs[1].lambda == doctest::Approx(s.pairs[2].lambda).epsilon(1e-12));
}

TEST_CASE("reference potential top eigenvalue lies in (400, 403]") {
  const auto s = top_k(assemble(Scheme::CentralDifference, Potential::sech(3.0, 0.5), default_grid()), 4);
  CHECK(s.pairs[0].lambda > 400.0);
  CHECK(s.pairs[0].lambda <= 403.0);
  for (std::size_t i = 1; i < 4; ++i) CHECK(s.pairs[i].lambda < s.pairs[i - 1].lambda);
}

TEST_CASE("top_k selection") {
  const auto op = assemble(Scheme::CentralDifference, Potential::sech(3.0, 0.5), Grid::make(-8.0, 16.0, 0.25));
  const auto full = eigen_full(op);
  const auto all = top_k(op, op.size());
  REQUIRE(all.size() == full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(all.pairs[i].lambda == full.pairs[i].lambda);
    CHECK(all.pairs[i].vector == full.pairs[i].vector);
  }
  CHECK_THROWS_AS(top_k(op, 0), InvalidArgument);
  CHECK_THROWS_AS(top_k(op, op.size() + 1), InvalidArgument);

  SUBCASE("nyquist pair for V = 0") {
    const auto s = top_k(assemble(Scheme::CentralDifference, Potential::zero(), default_grid()), 1);
    CHECK(s.pairs[0].lambda == doctest::Approx(400.0).epsilon(1e-13));
    const double a = 1.0 / std::sqrt(320.0);
    for (std::size_t n = 0; n < 320; ++n) {
      CHECK(s.pairs[0].vector[n] == doctest::Approx(n % 2 ? -a : a).epsilon(1e-10));
    }
  }
  SUBCASE("largest magnitude and largest algebraic disagree") {
    const Grid g = Grid::make(-8.0, 16.0, 0.25);
    const auto deep = assemble(Scheme::CentralDifference, Potential::sech(-200.0, 0.5), g);
    CHECK_THROWS_AS(top_k(deep, 4), SolverError);
  }
}

TEST_CASE("certification") {
  const Grid g = default_grid();
  const auto op = assemble(Scheme::CentralDifference, Potential::zero(), g);
  EigenPair nyq{400.0, std::vector<double>(320), 0.0, 1};
  for (std::size_t n = 0; n < 320; ++n) nyq.vector[n] = (n % 2 ? -1.0 : 1.0) / std::sqrt(320.0);
  const auto c = certify(nyq, op);
  CHECK(c.passed);
  CHECK(c.residual <= 1e-12 * 400.0);

  std::mt19937 rng(5);
  std::normal_distribution<double> z;
  EigenPair bad = nyq;
  for (double& x : bad.vector) x += 1e-3 * z(rng);
  const auto cb = certify(bad, op);
  CHECK_FALSE(cb.passed);
  CHECK(cb.residual > 1e-6 * 400.0);
}

TEST_CASE("spectrum invariants") {
  for (Scheme scheme : {Scheme::CentralDifference, Scheme::Numerov}) {
    CAPTURE(to_string(scheme));
    const Grid g = Grid::make(-16.0, 32.0, 0.2);
    const auto v = sample_potential(Potential::sech(3.0, 0.5), g);
    const auto op = assemble(scheme, v, g);
    const auto s = eigen_full(op);

    for (const auto& p : s.pairs) CHECK(certify(p, op).passed);

    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(inner_b(op, s.pairs[i].vector, s.pairs[j].vector)));
    CHECK(worst <= 1e-8);

    // Largest entry positive; near-ties resolved towards the lower index.
    for (const auto& p : s.pairs) {
      const double top = *std::max_element(p.vector.begin(), p.vector.end());
      const double bottom = *std::min_element(p.vector.begin(), p.vector.end());
      CHECK(top > 0.0);
      CHECK(top >= -bottom * (1.0 - 1e-9));
    }

    // shift equivariance: A(V + c) = A(V) + c B
    std::vector<double> shifted(v);
    for (double& x : shifted) x += 2.5;
    const auto t = eigen_full(assemble(scheme, shifted, g));
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::abs(t.pairs[i].lambda - (s.pairs[i].lambda + 2.5)) <= 1e-9 * std::abs(t.pairs[i].lambda) + 1e-12);
    }
  }
}

TEST_CASE("trace identity for central differences") {
  const Grid g = default_grid();
  const auto op = assemble(Scheme::CentralDifference, Potential::sech(3.0, 0.5), g);
  const auto s = eigen_full(op);
  double sum = 0.0;
  double trace = 0.0;
  for (const auto& p : s.pairs) sum += p.lambda;
  for (double d : op.stiffness().diag) trace += d;
  CHECK(std::abs(sum - trace) <= 1e-8 * trace);
}

TEST_CASE("runs are bitwise deterministic") {
  const auto op = assemble(Scheme::Numerov, Potential::sech(3.0, 0.5), Grid::make(-16.0, 32.0, 0.2));
  const auto a = eigen_full(op);
  const auto b = eigen_full(op);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.pairs[i].lambda == b.pairs[i].lambda);
    CHECK(a.pairs[i].vector == b.pairs[i].vector);
  }
}

TEST_CASE("degenerate pairs come in index order of their peaks") {
  const auto s = eigen_full(assemble(Scheme::CentralDifference, Potential::zero(), Grid::make(0.0, 16.0, 1.0)));
  const auto peak = [](const std::vector<double>& v) {
    return std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) -
           v.begin();
  };
  for (std::size_t i = 1; i + 1 < s.size(); i += 2) {
    REQUIRE(s.pairs[i].lambda == doctest::Approx(s.pairs[i + 1].lambda));
    CHECK(peak(s.pairs[i].vector) <= peak(s.pairs[i + 1].vector));
  }
}

TEST_CASE("indefinite mass is reported") {
  const Grid g = Grid::make(0.0, 4.0, 1.0);
  CyclicTridiagonal a{{2, 2, 2, 2}, {-1, -1, -1, -1}};
  CyclicTridiagonal b{{1, 1, 1, 1}, {1, 1, 1, 1}};
  const DiscreteOperator op(Scheme::Numerov, a, b, g);
  CHECK_THROWS_AS(eigen_full(op), SolverError);
}

TEST_CASE("inertia count and interval solver") {
  for (Scheme scheme : {Scheme::CentralDifference, Scheme::Numerov}) {
    CAPTURE(to_string(scheme));
    const auto op = assemble(scheme, Potential::sech(3.0, 0.5), Grid::make(-16.0, 32.0, 0.2));
    const auto full = eigen_full(op);
    const std::size_t n = op.size();

    for (std::size_t i : {0u, 10u, 79u, 150u}) {
      const double mid = 0.5 * (full.pairs[i].lambda + full.pairs[i + 1].lambda);
      CHECK(count_below(op, mid) == n - 1 - i);
    }
    const auto [lo, hi] = spectral_bounds(op);
    CHECK(lo <= full.pairs.back().lambda);
    CHECK(hi >= full.pairs.front().lambda);

    const double upper = full.pairs[3].lambda + 1e-9;
    const auto top = eigen_interval(op, upper, hi);
    REQUIRE(top.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(top.pairs[i].rank_from_top == static_cast<int>(i + 1));
      CHECK(top.pairs[i].lambda == doctest::Approx(full.pairs[i].lambda).epsilon(1e-12));
      CHECK(std::abs(inner_b(op, top.pairs[i].vector, full.pairs[i].vector)) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(certify(top.pairs[i], op).passed);
    }

    const auto bottom = eigen_interval(op, lo, full.pairs[n - 6].lambda + 1e-9);
    REQUIRE(bottom.size() == 6);
    CHECK(bottom.pairs.back().rank_from_top == static_cast<int>(n));
  }
}

TEST_CASE("interval solver separates the free double eigenvalues") {
  const auto op = assemble(Scheme::CentralDifference, Potential::zero(), Grid::make(0.0, 32.0, 0.5));
  const auto s = eigen_interval(op, 14.0, 16.5);
  CHECK(s.size() >= 5);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(inner_b(op, s.pairs[i].vector, s.pairs[j].vector)) <= 1e-8);
}
