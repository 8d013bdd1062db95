#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "wkg/closure.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"

namespace wkg {

enum class Scheme { leapfrog, rk4 };

struct EvolutionConfig {
  NullFormSpec spec;
  Scheme scheme = Scheme::leapfrog;
  double horizon = 10.0;
  std::optional<double> truncation_T0;
  int snapshot_stride = 10;
  bool keep_snapshots = true;
  double blowup_factor = 1e6;
  double b_integral_cap = std::numeric_limits<double>::infinity();

  void validate() const;
  std::optional<Cutoff> cutoff() const;
};

Sources rhs(const State& s, const NullFormSpec& spec);
Sources rhs_truncated(const State& s, const NullFormSpec& spec, double T0);
// Quadratic part of the equation linearized about `background`, evaluated on `uv`.
Sources linearized_rhs(const State& background, const State& uv, const NullFormSpec& spec);

// Maps the components of a coupled system to the quadratic sources of each component.
using SourceFn = std::function<std::vector<Sources>(const std::vector<State>&)>;

// Advances a system of wave/Klein-Gordon pairs: u_tt = lap u + f_u, v_tt = lap v - v + f_v.
// Leapfrog is kick-drift-kick Stormer-Verlet; the closing kick uses a predicted velocity.
class Stepper {
 public:
  Stepper(Scheme scheme, double dt, SourceFn sources);

  void step(std::vector<State>& system);
  void reset() { cached_.reset(); }
  double dt() const { return dt_; }

 private:
  struct Accel {
    ScalarField au, av;
  };
  std::vector<Accel> accel(const std::vector<State>& system) const;
  void step_leapfrog(std::vector<State>& system);
  void step_rk4(std::vector<State>& system);

  Scheme scheme_;
  double dt_;
  SourceFn sources_;
  std::optional<std::vector<Accel>> cached_;
};

SourceFn nonlinear_sources(const NullFormSpec& spec, std::optional<Cutoff> cutoff = std::nullopt);

// One step of the configured scheme.
State step(const State& s, const EvolutionConfig& cfg);

enum class RunStatus { horizon, field_blowup, b_integral_cap };
const char* name(RunStatus s);

// Continuation checks: non-finite values, growth beyond factor * initial max, integral of B beyond cap.
class BlowupDetector {
 public:
  BlowupDetector(double initial_max, double factor, double b_cap);
  // Returns the failure status, if any, for a new sample.
  std::optional<RunStatus> check(double t, bool finite, double max_field);
  std::optional<RunStatus> add_B(double t, double B);
  double B_integral() const { return b_integral_; }

 private:
  double threshold_;
  double b_cap_;
  double b_integral_ = 0.0;
  bool have_B_ = false;
  double last_t_ = 0.0, last_B_ = 0.0;
};

struct Trajectory {
  std::vector<State> snapshots;
  RunStatus status = RunStatus::horizon;
  double last_healthy_time = 0.0;
  double dt = 0.0;
  long steps = 0;
};

using Observer = std::function<void(const State&)>;

// Steps to the horizon; observers run at t = 0 and every snapshot_stride steps, step_observers after every step.
Trajectory evolve(const State& data, const EvolutionConfig& cfg, const std::vector<Observer>& observers = {},
                  const std::vector<Observer>& step_observers = {});

struct LinearizedTrajectory {
  RunStatus status = RunStatus::horizon;
  double last_healthy_time = 0.0;
  long steps = 0;
};

using PairObserver = std::function<void(const State& background, const State& uv)>;
// Optional external sources (F, G) for the perturbation, as a function of the background and time.
using ExternalSourceFn = std::function<Sources(const State& background, const State& uv)>;

LinearizedTrajectory evolve_linearized(const State& background, const State& uv, const EvolutionConfig& cfg,
                                       const std::vector<PairObserver>& observers = {},
                                       ExternalSourceFn external = nullptr);

struct PicardResult {
  std::vector<State> solution;  // every step of the last iterate
  std::vector<double> diff_norms;
  bool converged = false;
};

// Iterates u^m from the linear problem with quadratic coefficients frozen at iterate m - 1.
// The fixed point is the direct discrete solution of the same scheme.
PicardResult picard_solve(const State& data, double T0, const NullFormSpec& spec, double tol, int m_max,
                          Scheme scheme = Scheme::leapfrog);

// sqrt(E) of a state, the H^0 norm of Cauchy data.
double h0_norm(const State& s);
double h0_distance(const State& a, const State& b);

}  // namespace wkg
