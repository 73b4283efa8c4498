#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "openwalk/channels.hpp"
#include "openwalk/dynamics.hpp"
#include "openwalk/models.hpp"

using namespace owalk;

namespace {

constexpr double kPi = 3.14159265358979323846;

StochasticMatrix ring_markov(double beta, double phi) {
  const auto h = models::ring_hamiltonian(models::RingModel(1, 1, 0.5, phi));
  return channels::classical_markov(channels::propagator(h, beta));
}

ProbabilityVector random_distribution(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unif(rng);
  v /= v.sum();
  return ProbabilityVector(std::move(v));
}

}  // namespace

TEST_CASE("uniform distribution is a fixed point") {
  const StochasticMatrix q = ring_markov(0.79, 0.0);
  const auto traj =
      dynamics::relax_classical(q, ProbabilityVector::uniform(3), 20);
  REQUIRE(traj.steps.size() == 21);
  for (const auto& p : traj.steps)
    CHECK((p.vector().array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("classical steps conserve probability") {
  const StochasticMatrix q = ring_markov(0.83, kPi / 3.0);
  const auto traj =
      dynamics::relax_classical(q, ProbabilityVector::site(3, 0), 50);
  for (const auto& p : traj.steps) CHECK(std::abs(p.vector().sum() - 1.0) <= 1e-12);
}

TEST_CASE("trajectory storage cap") {
  const StochasticMatrix q = ring_markov(0.79, 0.0);
  CHECK_THROWS_AS(
      dynamics::relax_classical(q, ProbabilityVector::uniform(3), 501),
      InvariantError);
  CHECK_THROWS_AS(
      dynamics::relax_classical(q, ProbabilityVector::uniform(3), -1),
      InvariantError);
}

TEST_CASE("spectral amplitudes of the stationary state vanish") {
  const auto d = spectral::full_spectrum(ring_markov(0.79, 0.0));
  const auto amps = dynamics::spectral_expansion(d, ProbabilityVector::uniform(3));
  for (Eigen::Index s = 1; s < 3; ++s) CHECK(std::abs(amps.c(s)) <= 1e-12);
}

TEST_CASE("spectral reconstruction equals step iteration") {
  for (double phi : {0.0, kPi / 3.0}) {
    const StochasticMatrix q = ring_markov(0.7, phi);
    const auto d = spectral::full_spectrum(q);
    REQUIRE(d.biorthonormal);
    for (unsigned seed : {1u, 2u, 3u}) {
      const ProbabilityVector p0 = random_distribution(3, seed);
      const auto amps = dynamics::spectral_expansion(d, p0);
      const auto traj = dynamics::relax_classical(q, p0, 20);
      for (int k = 0; k <= 20; ++k) {
        const RealVector rec = dynamics::reconstruct(d, amps, k);
        CHECK((rec - traj.steps[size_t(k)].vector()).cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }
}

TEST_CASE("slow amplitude is excited by a site start below the crossing") {
  const auto d = spectral::full_spectrum(ring_markov(0.79, 0.0));
  const auto amps = dynamics::spectral_expansion(d, ProbabilityVector::site(3, 0));
  CHECK(std::abs(amps.c(1)) > 1e-3);  // C_2 = -1/sqrt(2) for this start
}

TEST_CASE("expansion refuses a defective spectrum") {
  ComplexMatrix jordan(2, 2);
  jordan << 0.5, 1.0, 0.0, 0.5;
  const auto d = spectral::full_spectrum(jordan);
  REQUIRE_FALSE(d.biorthonormal);
  CHECK_THROWS_WITH_AS(
      dynamics::spectral_expansion(d, ProbabilityVector::uniform(2)),
      doctest::Contains("defective spectrum"), NumericalError);
}

TEST_CASE("quantum trajectory at q = 1 reduces to the classical one") {
  const auto h = models::ring_hamiltonian(models::RingModel(1, 1, 0.5, 0.0));
  const UnitaryMatrix u = channels::propagator(h, 0.79);
  const SuperoperatorMatrix m = channels::liouvillian(u, 1.0);
  const StochasticMatrix q = channels::classical_markov(u);
  const auto qt = dynamics::relax_quantum(m, DensityMatrix::site_excitation(3, 0), 30);
  const auto ct = dynamics::relax_classical(q, ProbabilityVector::site(3, 0), 30);
  for (size_t k = 0; k < qt.steps.size(); ++k) {
    const ProbabilityVector pops = dynamics::populations(qt.steps[k]);
    CHECK((pops.vector() - ct.steps[k].vector()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("quantum trace conservation and convergence to the uniform state") {
  const auto h = models::ring_hamiltonian(models::RingModel(1, 1, 0.5, 0.0));
  const UnitaryMatrix u = channels::propagator(h, 0.79);
  const SuperoperatorMatrix m = channels::liouvillian(u, 0.5);
  const auto traj = dynamics::relax_quantum(m, DensityMatrix::site_excitation(3, 0), 200);
  for (const auto& rho : traj.steps)
    CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) <= 1e-12);
  const ComplexMatrix last = traj.steps.back().matrix();
  CHECK((last - ComplexMatrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("marginals") {
  RealVector v(6);
  v << 1, 0, 0, 0, 0, 0;
  const auto p = dynamics::marginals(ProbabilityVector(v), 3);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
  const auto u = dynamics::marginals(ProbabilityVector::uniform(6), 3);
  for (int l = 0; l < 3; ++l) CHECK(u[l] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(dynamics::marginals(ProbabilityVector::uniform(6), 4),
                  InvariantError);
}

TEST_CASE("full coined state oscillates forever while the marginal converges") {
  const StochasticMatrix q =
      models::coined_markov_direct(models::CoinedWalkModel(3, 0.3 * kPi / 2.0));
  const auto traj =
      dynamics::relax_classical(q, ProbabilityVector::site(6, 0), 100);
  const RealVector last = traj.steps.back().vector();
  CHECK((last.array() - 1.0 / 6.0).abs().maxCoeff() > 0.05);  // mu = -1 persists
  const auto marg = dynamics::marginals(traj.steps.back(), 3);
  CHECK((marg.vector().array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("oscillation discriminator separates the two relaxation regimes") {
  // ring with flux: monotone below the exceptional point, oscillatory above
  const auto res = [](double beta) {
    const StochasticMatrix q = ring_markov(beta, kPi / 3.0);
    return dynamics::residual_norms(
        dynamics::relax_classical(q, ProbabilityVector::site(3, 0), 14));
  };
  CHECK(dynamics::oscillation_flips(res(0.7)) == 0);
  CHECK(dynamics::oscillation_flips(res(0.8)) >= 3);

  // coined walk: oscillatory marginal below the EP, monotone above
  const auto marg_res = [](double frac) {
    const StochasticMatrix q =
        models::coined_markov_direct(models::CoinedWalkModel(3, frac * kPi / 2.0));
    const auto traj =
        dynamics::relax_classical(q, ProbabilityVector::site(6, 0), 100);
    std::vector<double> out;
    for (const auto& p : traj.steps) {
      const auto m = dynamics::marginals(p, 3);
      out.push_back((m.vector().array() - 1.0 / 3.0).matrix().norm());
    }
    return out;
  };
  CHECK(dynamics::oscillation_flips(marg_res(0.3)) >= 3);
  CHECK(dynamics::oscillation_flips(marg_res(0.7)) == 0);
}

TEST_CASE("late-time log slope is a decay rate") {
  const StochasticMatrix q = ring_markov(0.79, 0.0);
  const auto res = dynamics::residual_norms(
      dynamics::relax_classical(q, ProbabilityVector::site(3, 0), 30));
  CHECK(dynamics::fit_log_slope(res) < -0.1);
}
