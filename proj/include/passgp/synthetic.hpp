#pragma once

#include <cstdint>

#include "passgp/data_io.hpp"

namespace passgp::synthetic {

/// Two overlapping 2-D Gaussian classes (labels +/-1, balanced in expectation).
/// Class +1 ~ N((sep/2, 0), I), class -1 ~ N((-sep/2, 0), diag(spread^2, 1)).
Dataset two_gaussians(Eigen::Index n, std::uint64_t seed, double separation = 2.5, double spread = 1.0);

/// Interleaved half-moons with Gaussian noise (labels +/-1).
Dataset two_moons(Eigen::Index n, std::uint64_t seed, double noise = 0.2);

/// n_classes isotropic 2-D blobs on a circle of the given radius (labels 0..n_classes-1).
Dataset blobs(Eigen::Index n, int n_classes, std::uint64_t seed, double radius = 3.0);

}  // namespace passgp::synthetic
