#pragma once

#include "clab/majorana.hpp"

#include <functional>
#include <random>

namespace clab {

enum class DynamicsMode { Brownian, Floquet };
std::string to_string(DynamicsMode m);

struct TrajectoryConfig {
  GateSet gates;
  double kappa = 1.0;
  double dt = 0.01;
  double t_max = 20.0;
  int ensemble_size = 256;
  std::uint64_t master_seed = 1;
  DynamicsMode mode = DynamicsMode::Brownian;
  int floquet_depth = 1;         // layers of the whole gate list per period
  double angle_stddev = 1.0;     // Floquet angles, radians
  int sample_every = 10;         // Brownian steps between samples
  double window_fraction = 0.5;  // time average over the last part of the run
  int threads = 0;               // 0: COMMUTANT_LAB_THREADS, else hardware

  // Throws Error on invalid parameters.
  void validate() const;
  std::vector<std::string> warnings() const;
  std::uint64_t trajectory_seed(int index) const { return mix_seed(master_seed, static_cast<std::uint64_t>(index)); }
  // Brownian steps or Floquet periods.
  int num_steps() const;
  int steps_per_sample() const { return mode == DynamicsMode::Floquet ? 1 : sample_every; }
  double time_of_step(int step) const { return mode == DynamicsMode::Floquet ? step : step * dt; }
};

struct ObservableSeries {
  std::vector<double> times, mean, std_error;
  double time_average = 0.0;
  double time_average_stderr = 0.0;
  double window_start = 0.0, window_end = 0.0;
  int ensemble_size = 0;
};

// exp(-i theta_a h_a) for every non-identity generator, applied in catalog order.
// Commuting Pauli terms use exp(-i t P) = cos t - i sin t P; everything else
// goes through a dense eigendecomposition of the generator.
class Propagator {
 public:
  explicit Propagator(const GateSet& gates, Eigen::Index dense_limit = 4096);
  std::size_t size() const { return gens_.size(); }
  Eigen::Index dim() const { return N_; }
  double max_generator_norm() const { return max_norm_; }
  void apply_state(const std::vector<double>& theta, Vec& psi) const;
  // A <- U^† A U for U = e_m ... e_1.
  void conjugate(const std::vector<double>& theta, Mat& A) const;
  Mat unitary(const std::vector<double>& theta) const;

 private:
  struct PauliTerm {
    std::vector<std::uint32_t> perm;  // (P psi)[r] = val[r] psi[perm[r]]
    Vec val;
    Vec val_partner;  // val[perm[r]]
    double coeff = 1.0;
    bool diagonal = false;
  };
  struct Kernel {
    std::vector<PauliTerm> paulis;
    Mat V;  // dense route: h = V diag(e) V^†
    RVec e;
    bool dense = false;
  };
  Eigen::Index N_ = 0;
  double max_norm_ = 0.0;
  std::vector<Kernel> gens_;

  void apply_kernel(const Kernel& k, double theta, Vec& psi) const;
  void conjugate_kernel(const Kernel& k, double theta, Mat& A) const;
};

// Independent increments Delta W ~ Normal(0, 2 kappa dt) per generator.
std::vector<double> brownian_increments(std::size_t count, double kappa, double dt, std::mt19937_64& rng);
Operator step_unitary(const GateSet& gates, double kappa, double dt, std::mt19937_64& rng);

// Runs fn(index) for index in [0, count) on a worker pool; results are stored by
// index, so the output does not depend on scheduling.
std::vector<std::vector<double>> run_ensemble(int count, int threads,
                                              const std::function<std::vector<double>(int)>& fn);
int resolve_threads(int requested);

// tr(A(t) B A(t) B) / dim at infinite temperature.
ObservableSeries otoc_series(const TrajectoryConfig& cfg, const Operator& A, const Operator& B);
// tr(A(t) B) / dim; its late-time value is the Mazur bound when B = A.
ObservableSeries two_point_series(const TrajectoryConfig& cfg, const Operator& A, const Operator& B);
// Same estimator as otoc_series with mode = Floquet.
ObservableSeries floquet_series(TrajectoryConfig cfg, const Operator& A, const Operator& B);

struct Renyi2Result {
  std::vector<int> region;
  ObservableSeries purity;
  ObservableSeries entropy;  // trajectory mean of -log purity
  std::vector<double> neg_log_mean_purity, neg_log_mean_purity_stderr;
  double neg_log_time_average = 0.0, neg_log_time_average_stderr = 0.0;
};
Renyi2Result renyi2_series(const TrajectoryConfig& cfg, const Vec& psi0, const std::vector<int>& region);
// One ensemble, several regions.
std::vector<Renyi2Result> renyi2_sweep(const TrajectoryConfig& cfg, const Vec& psi0,
                                       const std::vector<std::vector<int>>& regions);

// sum_Q [sum_ab q_ab vec(e_a)^T K vec(e_b^†)] [sum_cd conj(q_cd) <<e_c|R>> tr(e_d R)].
// Bilinear forms tr(X M Y M) and tr(tr_out X tr_out Y) fit through K.
cd super_projection(const FramedSuperBasis& sc, const SpMat& K, const Mat& R);
// Late-time OTOC from an orthonormal super-commutant basis.
double predicted_otoc(const FramedSuperBasis& sc, const Operator& A, const Operator& B);
// Late-time purity of `region` starting from psi0.
double predicted_purity_from_scomm(const FramedSuperBasis& sc, const Vec& psi0, const std::vector<int>& region);

// sum_Q |<<Q|A>>|^2 / dim over an orthonormal commutant basis.
double mazur_two_point(const OperatorBasis& comm, const Operator& A);

// Product state with every qubit in |1> (Z = -1).
Vec all_down_state(const ChainGeometry& geom);

}  // namespace clab
