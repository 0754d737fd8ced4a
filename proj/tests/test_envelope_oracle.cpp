#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nyqenv/envelope_oracle.hpp"
#include "nyqenv/error.hpp"

using namespace nyqenv;

namespace {

// Bound states of -phi'' - 3 sech(x/2) phi = -dl phi on the reference window, refine 8.
constexpr double kReferenceShifts[] = {2.45772901, 1.51428746, 0.83397278, 0.37894543, 0.11384106};

Grid default_grid() { return Grid::make(-16.0, 32.0, 0.1, NyquistSupport::Required); }

ModeAnalysis fd_mode(const Potential& p, const Grid& g, int rank) {
  const auto s = eigen_full(assemble(Scheme::CentralDifference, p, g));
  return demodulate(s.rank(rank), g, {Scheme::CentralDifference, potential_center(p, g)});
}

}  // namespace

TEST_CASE("no bound states without a repulsive potential") {
  CHECK(predict(Potential::sech(-3.0, 0.5), default_grid()).bound_states.empty());
  CHECK(predict(Potential::zero(), default_grid()).bound_states.empty());
  CHECK(predict(Potential::sech(0.0, 0.5), default_grid()).localized_count() == 0);
}

TEST_CASE("reference bound states") {
  const auto pred = predict(Potential::sech(3.0, 0.5), default_grid());
  REQUIRE(pred.bound_states.size() == 5);
  CHECK(pred.localized_count() == 4);
  CHECK(pred.fine_grid.size() == 2560);
  for (std::size_t j = 0; j < 5; ++j) {
    const auto& s = pred.bound_states[j];
    CAPTURE(j);
    CHECK(s.delta_lambda_pred == doctest::Approx(kReferenceShifts[j]).epsilon(2e-8));
    CHECK(s.delta_lambda_pred > 0.0);
    CHECK(s.delta_lambda_pred <= 3.0);
    CHECK(s.node_count == static_cast<int>(j));
    double peak = 0.0;
    for (double x : s.phi) peak = std::max(peak, std::abs(x));
    CHECK(peak == 1.0);
    CHECK(*std::max_element(s.phi.begin(), s.phi.end()) == doctest::Approx(1.0).epsilon(1e-9));
    if (j > 0) CHECK(s.delta_lambda_pred < pred.bound_states[j - 1].delta_lambda_pred);
  }
  CHECK_FALSE(pred.bound_states[4].localized);
  CHECK(pred.bound_states[4].tail_mass == doctest::Approx(0.022).epsilon(0.1));
}

TEST_CASE("ground state is even") {
  const auto pred = predict(Potential::sech(3.0, 0.5), default_grid());
  const auto& phi = pred.bound_states[0].phi;
  const std::size_t mid = 1280;  // x = 0 on the fine grid
  for (std::size_t j = 1; j < mid; ++j) CHECK(std::abs(phi[mid + j] - phi[mid - j]) <= 1e-6);
}

TEST_CASE("oracle is converged in refine") {
  const auto a = predict(Potential::sech(3.0, 0.5), default_grid(), 8);
  const auto b = predict(Potential::sech(3.0, 0.5), default_grid(), 16);
  REQUIRE(a.bound_states.size() == b.bound_states.size());
  for (std::size_t j = 0; j < a.bound_states.size(); ++j) {
    const double x = a.bound_states[j].delta_lambda_pred;
    const double y = b.bound_states[j].delta_lambda_pred;
    CHECK(std::abs(x - y) < 1e-4 * std::abs(y));
  }
}

TEST_CASE("interval path agrees with the dense solver") {
  const Grid g = Grid::make(-16.0, 32.0, 0.2, NyquistSupport::Required);
  const auto p = Potential::sech(3.0, 0.5);
  const auto pred = predict(p, g, 2);
  const Grid fine = g.refined(2);
  auto minus_v = sample_potential(p, fine);
  for (double& x : minus_v) x = -x;
  const auto full = eigen_full(assemble(Scheme::CentralDifference, minus_v, fine));
  std::size_t negative = 0;
  for (const auto& pair : full.pairs) negative += pair.lambda < -1e-8 * 3.0;
  REQUIRE(pred.bound_states.size() == negative);
  for (std::size_t j = 0; j < negative; ++j) {
    CHECK(pred.bound_states[j].delta_lambda_pred == doctest::Approx(-full.pairs[full.size() - 1 - j].lambda).epsilon(1e-11));
  }
}

TEST_CASE("comparison with the FD modes") {
  const Grid g = default_grid();
  const auto p = Potential::sech(3.0, 0.5);
  const auto pred = predict(p, g);

  const auto m1 = compare(pred, fd_mode(p, g, 1), 1);
  CHECK(m1.correlation >= 0.999);
  CHECK(m1.nodes_fd == 0);
  CHECK(m1.nodes_match);
  CHECK(m1.gap <= 0.02);
  CHECK(m1.gap == doctest::Approx(1.5446e-4).epsilon(1e-2));

  const auto m4 = compare(pred, fd_mode(p, g, 4), 4);
  CHECK(m4.correlation >= 0.99);
  CHECK(m4.nodes_fd == 3);
  CHECK(m4.nodes_match);

  CHECK_THROWS_AS(compare(pred, fd_mode(p, g, 1), 0), InvalidArgument);
  CHECK_THROWS_AS(compare(pred, fd_mode(p, g, 1), 6), InvalidArgument);
  const auto empty = predict(Potential::zero(), g);
  CHECK_THROWS_AS(compare(empty, fd_mode(Potential::zero(), g, 1), 1), InvalidArgument);
}

TEST_CASE("rank 1 gap is second order in h") {
  const auto p = Potential::sech(3.0, 0.5);
  std::vector<double> gaps;
  for (double h : {0.2, 0.1, 0.05}) {
    const Grid g = Grid::make(-16.0, 32.0, h, NyquistSupport::Required);
    gaps.push_back(compare(predict(p, g), fd_mode(p, g, 1), 1).gap);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    const double ratio = gaps[i - 1] / gaps[i];
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("aligned correlation") {
  const std::vector<double> a{0, 1, 2, 1, 0, 0};
  const std::vector<double> b{1, 0, 0, 0, 1, 2};
  CHECK(aligned_correlation(a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(aligned_correlation(a, std::vector<double>(5, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(aligned_correlation(a, std::vector<double>(6, 0.0)), InvalidArgument);
}

TEST_CASE("refine must be positive") {
  CHECK_THROWS_AS(predict(Potential::sech(3.0, 0.5), default_grid(), 0), InvalidArgument);
}
