#pragma once

#include "lawbench/linalg.hpp"
#include "lawbench/rng.hpp"
#include "lawbench/sphere.hpp"

namespace lawbench {

/// y_i = w0 . x_i + z_i with z_i ~ N(0, zeta^2); the Bayes error is zeta^2.
struct Dataset {
    SphereSample X;
    Vector y;
    Vector w0;
    double zeta = 0.0;
    RngSeed seed;

    std::size_t n() const { return X.count(); }
    std::size_t d() const { return X.dim(); }
    double bayes_error() const { return zeta * zeta; }
};

struct DatasetOptions {
    bool noise_only = false;  // w0 = 0, leaving pure noise labels
};

/// X, w0 and z come from one stream seeded by `seed`, in that order.
Dataset gen_dataset(std::size_t n, std::size_t d, double zeta, RngSeed seed, DatasetOptions opt = {});
/// Fresh inputs labelled by the same w0 and noise level.
Dataset gen_dataset_like(const Dataset& proto, std::size_t n, RngSeed seed);

}  // namespace lawbench
