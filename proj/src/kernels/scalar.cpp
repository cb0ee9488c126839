// Scalar reference kernels. These define the semantics the SIMD variants
// must reproduce exactly.

#include "bfosim/kernels/kernels.hpp"

namespace bfosim::kernels {

namespace {

std::uint64_t advance_scalar(const double* x, const double* r, std::size_t n,
                             const double* node_field, int n_nodes,
                             const TransportCoeffs& c, double* x_out,
                             double* dx_det_out) {
    std::uint64_t clamps = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double field = ref_gather(node_field, n_nodes, c.inv_dx, xi);
        const double ua = ref_activation_eff(xi, c);
        const double dx_det = ref_drift_displacement(field, ua, c, &clamps);
        dx_det_out[i] = dx_det;
        x_out[i] = ref_jitter_clamp(xi, dx_det, r[i], c);
    }
    return clamps;
}

void deposit_scalar(const double* x, std::size_t n, double charge_per_particle,
                    double inv_dx, int n_nodes, double* node_charge) {
    for (std::size_t i = 0; i < n; ++i) {
        int k;
        double f;
        ref_cell_weight(x[i], inv_dx, n_nodes, &k, &f);
        node_charge[k] += charge_per_particle * (1.0 - f);
        node_charge[k + 1] += charge_per_particle * f;
    }
}

void gather_scalar(const double* node_field, int n_nodes, double inv_dx,
                   const double* x, std::size_t n, double* field_out) {
    for (std::size_t i = 0; i < n; ++i) {
        field_out[i] = ref_gather(node_field, n_nodes, inv_dx, x[i]);
    }
}

}  // namespace

const KernelOps& scalar_ops() {
    static const KernelOps ops{"scalar", advance_scalar, deposit_scalar,
                               gather_scalar};
    return ops;
}

}  // namespace bfosim::kernels
