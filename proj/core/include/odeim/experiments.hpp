#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "odeim/models.hpp"
#include "odeim/selection.hpp"

namespace odeim {

enum class ModelKind { toy, pde };

// m = round(factor * n), or m = n + floor(fraction * mesh_divisions^2).
// Methods without an oversampling rule (qdeim, deim, kdeim) always use m = n.
enum class OversampleRule { factor, fraction };

struct ToyParams {
    Index grid_size = 2048;
    Index training_count = 500;
    Index test_count = 500;
};

struct PdeParams {
    Index mesh_divisions = 64;
    Index snapshot_grid = 10;  // per parameter axis
    Index pod_dim = 20;
    bool skip_nonconverged = false;
    std::string cache_dir;  // empty disables the snapshot cache
};

struct ExperimentConfig {
    std::vector<Method> methods;
    std::vector<Index> n_grid;
    OversampleRule rule = OversampleRule::factor;
    double oversample_factor = 2.0;
    double oversample_fraction = 0.1;
    double sigma = 0.0;
    int replicates = 10;
    std::uint64_t seed = 0;
    int jobs = 0;  // 0 picks the hardware concurrency
    ModelKind model = ModelKind::toy;
    ToyParams toy;
    PdeParams pde;
};

struct CellResult {
    Method method = Method::qdeim;
    Index n = 0;
    Index m = 0;
    int replicate = 0;
    double error = std::numeric_limits<double>::quiet_NaN();
    double selection_norm = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
    bool ok() const { return status == "ok"; }
};

struct CellAggregate {
    Method method = Method::qdeim;
    Index n = 0;
    Index m = 0;
    double mean_error = std::numeric_limits<double>::quiet_NaN();
    double min_error = std::numeric_limits<double>::quiet_NaN();
    double max_error = std::numeric_limits<double>::quiet_NaN();
    double mean_selection_norm = std::numeric_limits<double>::quiet_NaN();
    int ok_count = 0;
    int failed_count = 0;
};

struct ErrorTable {
    std::vector<CellResult> cells;
    // One entry per (method, n) in first-appearance order; statistics over
    // the replicates with status ok.
    std::vector<CellAggregate> aggregates() const;
    // Mean error over ok replicates; NaN when the cell is absent or fully
    // failed.
    double mean_error(Method method, Index n) const;
};

// (1/K) sum |truth_i - approx_i| / |truth_i|.
double averaged_relative_l2(const std::vector<Vector>& truth,
                            const std::vector<Vector>& approx);

// Componentwise independent Gaussian perturbation; sigma = 0 returns v.
Vector add_noise(const Vector& v, double sigma, Rng& rng);

// Least-squares slope of ln(mean error) against ln(n) over the aggregated
// cells with n_min <= n <= n_max; needs at least 4 usable points.
double growth_rate(const ErrorTable& table, Method method, Index n_min, Index n_max);

ErrorTable run_toy_experiment(const ExperimentConfig& cfg);

struct PdeParamStatus {
    double xi1 = 0.0;
    double xi2 = 0.0;
    bool converged = false;
    double residual = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

struct PdeSnapshotSet {
    Matrix states;     // N x (converged count)
    Matrix nonlinear;  // N x (converged count)
    std::vector<PdeParamStatus> statuses;  // grid^2 entries, xi1 outer
};

// Solves the full model over an equidistant grid x grid parameter lattice in
// [-pi/2, pi/2]^2. Nonconverged parameters either abort (carrying the
// parameter in the message) or, with skip_nonconverged, are recorded and
// dropped. A nonempty cache_dir caches the snapshots keyed by
// (mesh_divisions, grid).
PdeSnapshotSet generate_pde_snapshots(const FullOrderModel& model, Index grid,
                                      const NewtonConfig& cfg, bool skip_nonconverged,
                                      const std::string& cache_dir,
                                      bool* cache_hit = nullptr);

struct PdeRunInfo {
    std::vector<PdeParamStatus> snapshot_statuses;
    std::vector<PdeParamStatus> test_statuses;
    bool cache_hit = false;
};

ErrorTable run_pde_experiment(const ExperimentConfig& cfg, PdeRunInfo* info = nullptr);

// Uniform draws from {0, ..., big_n - 1} with replacement.
std::vector<Index> sample_with_replacement(Index big_n, Index m, Rng& rng);

struct VerifyOptions {
    double sigma = 0.0;
    double m_scale = 1.0;      // multiplies the sampling threshold
    double projection_norm = 0.1;  // orthogonal component of the synthetic f
};

struct BoundTrial {
    double mu = 0.0;
    double gamma = 0.0;
    Index m = 0;
    double inverse_norm = 0.0;  // |((P^T U)^T P^T U)^{-1}|_2
    double lemma_bound = 0.0;   // N / ((1 - gamma) m)
    bool lemma_violated = false;
    double error = 0.0;             // |f - f_hat| from noisy samples
    double noise_free_error = 0.0;  // same trial without noise
    double expected_bound = 0.0;
    bool expected_bound_violated = false;
};

struct BoundReport {
    Index big_n = 0;
    Index n = 0;
    double delta = 0.0;
    Index trials = 0;
    double sigma = 0.0;
    double projection_norm = 0.0;
    std::vector<BoundTrial> trial_results;
    double lemma_violation_frequency = 0.0;
    double expected_bound_violation_frequency = 0.0;
    double mean_error = 0.0;
    double mean_expected_bound = 0.0;
    double mean_noise_contribution = 0.0;  // mean(error - noise_free_error)
};

// Monte-Carlo check of the spectral sampling bound and the expected-error
// bound over random orthonormal bases. Each trial draws its own basis,
// recomputes mu and gamma, picks m strictly above the sampling threshold
// (times m_scale), and samples uniformly with replacement; duplicated draws
// stack rows of the sampled basis.
BoundReport verify_probabilistic_bounds(Index big_n, Index n, double delta, Index trials,
                                        std::uint64_t seed, const VerifyOptions& opts = {});

}  // namespace odeim
