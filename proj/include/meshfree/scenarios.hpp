#pragma once

#include <string>

#include "meshfree/filter.hpp"
#include "meshfree/model.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

enum class Discretization { Euler, PaperLiteral };

// Two-dimensional stochastic tumor growth model: Gompertzian volume growth
// coupled to vascularization. The euler mode advances x by drift*dt; the
// literal mode drops the previous state from the step (kept for comparison
// runs, it drives the first component negative from the nominal start).
struct TumorParams {
  Real dt = 0.2;
  int steps = 40;
  Real alpha1 = 1.0, alpha2 = 0.2, alpha3 = 0.2;
  Vec<2> sigma{0.01, 0.01};
  Vec<2> obs_scale{0.1, 0.1};
  Vec<2> x0{0.8, 0.3};
  Vec<2> init_mean{0.78, 0.32};
  Vec<2> init_var{0.05 * 0.05, 0.1 * 0.1};
  Discretization mode = Discretization::Euler;
  int default_nodes = 1500;
  int default_noise_samples = 20;
};

// Six-dimensional bearing-only tracking: position driven by three slowly
// ramping controls, observed as elevation/azimuth angles from two ground
// platforms.
struct BearingParams {
  Real dt = 0.3;
  int steps = 50;  // horizon 0 <= t <= 15
  Real alpha = 3.0;
  Vec<3> controls{0.05, 0.05, 0.05};
  Vec<6> sigma{0.1, 0.1, 0.1, 0.01, 0.01, 0.01};
  Vec<4> obs_scale{0.6, 0.6, 0.6, 0.6};
  Vec<2> platform1{16.0, 6.0};
  Vec<2> platform2{8.0, 15.0};
  Vec<6> x0{2.0, 2.0, 1.0, 0.4, 0.4, 0.0};
  Vec<6> init_var{1.0, 1.0, 1.0, 0.04, 0.04, 0.04};
  int default_nodes = 4000;
  int default_noise_samples = 6;
  int default_particles = 15000;
};

// Linear-Gaussian benchmark x' = A x + sigma.*w used for exact-filter
// comparisons. Parameters sit in the regime the meshfree filter targets:
// slowly varying state, process noise small against the posterior spread.
struct LinearGaussianParams {
  int dim = 1;  // 1 or 2
  Real dt = 1.0;
  int steps = 40;
};

Vector tumor_transition(const Vector& x, const Vector& w, Discretization mode,
                        const TumorParams& params = {});
Matrix tumor_transition_jacobian(const Vector& x, Discretization mode,
                                 const TumorParams& params = {});

Vector bearing_transition(const Vector& x, const Vector& w, const BearingParams& params = {});
Matrix bearing_transition_jacobian(const Vector& x, const BearingParams& params = {});
// Elevations then azimuths for both platforms; total map with
// atan(z/0) := sign(z)*pi/2 and atan(0/0) := 0.
Vector bearing_observe(const Vector& x, const BearingParams& params = {});

// A benchmark scenario: the model, the filter prior, the true initial state
// and per-method defaults.
struct Scenario {
  std::string name;
  StateSpaceModel model;
  GaussianSpec initial;  // filter prior p0
  Vector x0;             // exact truth start
  int steps = 0;
  Real dt = 0.0;
  FilterConfig filter_defaults;
  int default_particles = 10000;

  bool linear = false;  // exposes A/C below for exact-filter comparisons
  Matrix lin_transition;
  Matrix lin_observation;
};

Scenario tumor_scenario(const TumorParams& params = {});
Scenario bearing_scenario(const BearingParams& params = {});
Scenario linear_gaussian_scenario(const LinearGaussianParams& params = {});

struct TruthRecord {
  Matrix states;        // d x (K+1), column k = X_k, column 0 = X_0
  Matrix observations;  // q x K, column k-1 = Y_k
};

// Truth simulation from the exact x0 on a single random stream; the state
// noise redraw cap is the model's (domain violations abort the realization
// via DomainError).
TruthRecord simulate_truth(const Scenario& scenario, RandomSource rng);

}  // namespace meshfree
