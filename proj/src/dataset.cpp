#include "lawbench/dataset.hpp"

#include "lawbench/error.hpp"

namespace lawbench {

namespace {

void label(Dataset& ds, Rng& rng) {
    const Vector clean = matvec(ds.X.points, ds.w0);
    ds.y.resize(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const double z = rng.normal();
        ds.y[i] = clean[i] + ds.zeta * z;
    }
}

}  // namespace

Dataset gen_dataset(std::size_t n, std::size_t d, double zeta, RngSeed seed, DatasetOptions opt) {
    require(n >= 1, "gen_dataset: n must be positive");
    require(d >= 2, "gen_dataset: d must be at least 2");
    require(zeta >= 0.0, "gen_dataset: zeta must be nonnegative");
    Rng rng(seed);
    Dataset ds;
    ds.seed = seed;
    ds.zeta = zeta;
    ds.X = sample_sphere(d, n, rng);
    ds.w0 = sample_sphere_point(d, rng);
    if (opt.noise_only) ds.w0.assign(d, 0.0);
    label(ds, rng);
    return ds;
}

Dataset gen_dataset_like(const Dataset& proto, std::size_t n, RngSeed seed) {
    require(n >= 1, "gen_dataset_like: n must be positive");
    Rng rng(seed);
    Dataset ds;
    ds.seed = seed;
    ds.zeta = proto.zeta;
    ds.w0 = proto.w0;
    ds.X = sample_sphere(proto.d(), n, rng);
    label(ds, rng);
    return ds;
}

}  // namespace lawbench
