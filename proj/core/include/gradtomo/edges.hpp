#pragma once

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Gradient magnitude with non-maxima along the gradient direction set to zero.
///
/// The direction atan2(gx2, gx1) is quantized to 8 sectors of 45 degrees, which select one of
/// four neighbor pairs. A pixel is suppressed only if a neighbor is strictly larger, so plateaus
/// survive. Neighbors outside the grid count as zero.
ImageGrid nonmax_suppress(const GradientField& gf);

/// Canny hysteresis: positive pixels >= high seed edges; positive pixels >= low that are
/// 8-connected to a seed are kept. Throws if low > high or either is negative.
EdgeMap hysteresis(const ImageGrid& nms, double low, double high);

/// hysteresis(nonmax_suppress(gf)) with thresholds given as fractions of the peak NMS magnitude.
EdgeMap canny_from_gradient(const GradientField& gf, double low_frac = 0.1, double high_frac = 0.25);

struct EdgeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision is the fraction of predicted pixels with a true edge pixel within match_radius
/// (Euclidean, in pixels); recall is the fraction of true pixels with a predicted pixel within it.
/// Empty prediction: precision 1. Empty truth: recall 1. F1 is 0 when either is 0.
EdgeScore edge_f1(const EdgeMap& pred, const EdgeMap& truth, double match_radius);

}  // namespace gradtomo
