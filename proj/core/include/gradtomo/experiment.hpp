#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gradtomo/edges.hpp"
#include "gradtomo/types.hpp"

namespace gradtomo {

/// Sparse-view edge detection experiment on the Shepp-Logan phantom.
///
/// The analytic sinogram is sampled at `full_angles`, perturbed with Gaussian noise, and
/// then thinned to `sparse_angles` by angular subsampling. Both gradient methods run on
/// the thinned data; Method 2 is tried at every ladder weight and the best F1 is kept.
struct SparseViewConfig {
    std::size_t size = 128;
    double pixel_size = 1.0;
    std::size_t full_angles = 180;
    std::size_t sparse_angles = 36;
    double noise_frac = 0.01;
    std::uint64_t noise_seed = 1;
    double epsilon_px = 2.0;
    /// Method 2 weights relative to ||2 R^T rhs||_inf.
    std::vector<double> lambda_ladder = {0.005, 0.02, 0.05};
    std::size_t max_iters = 300;
    double rel_tol = 1e-6;
    std::uint64_t power_seed = 0;
    /// Canny fractions. Lower than the canny_from_gradient defaults so that edges well below the
    /// skull contrast, and artifacts of comparable size, reach the edge map.
    double low_frac = 0.05;
    double high_frac = 0.10;
    double match_radius = 2.0;
    /// Pixels above this fraction of the peak magnitude count as spurious outside the edge band.
    double spurious_frac = 0.1;
    double band_radius = 2.0;
};

struct MethodOutcome {
    std::string method;  ///< "fbp-combined" or "l1"
    std::size_t n_angles = 0;
    double lambda_rel = 0.0;  ///< 0 for Method 1
    EdgeScore score;
    double spurious_fraction = 0.0;
    std::size_t iterations = 0;
    GradientField gradient;
    EdgeMap edges;
};

struct SparseViewReport {
    EdgeMap truth;
    std::vector<MethodOutcome> method1;  ///< one entry per angle count
    std::vector<MethodOutcome> method2;  ///< every ladder weight, per angle count
    const MethodOutcome& best_method2(std::size_t n_angles) const;
    const MethodOutcome& method1_at(std::size_t n_angles) const;
};

/// Fraction of pixels farther than band_radius from every true edge pixel whose gradient
/// magnitude exceeds threshold_frac of the field's peak magnitude.
double spurious_fraction(const GradientField& gf, const EdgeMap& truth, double band_radius, double threshold_frac);

/// Runs the experiment at `n_angles` (a divisor of full_angles) and at full_angles.
/// At full_angles Method 2 uses the ladder weight selected at n_angles.
SparseViewReport run_sparse_view(const SparseViewConfig& config);

/// One CSV row per outcome: method,n_angles,lambda_rel,precision,recall,f1,spurious_fraction,iterations.
void write_metrics_csv(std::ostream& out, const SparseViewReport& report);

}  // namespace gradtomo
