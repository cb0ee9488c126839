// NEON (aarch64) particle kernels. Mirrors sim_math.hpp exactly like the
// AVX2 variant; two lanes per vector.

#if defined(BFOSIM_BUILD_NEON)

#include <arm_neon.h>

#include "bfosim/kernels/kernels.hpp"

namespace bfosim::kernels {

namespace {

inline float64x2_t vfma(float64x2_t a, float64x2_t b, float64x2_t acc) {
    return vfmaq_f64(acc, a, b);  // acc + a * b
}

inline float64x2_t vexp(float64x2_t x) {
    const float64x2_t log2e = vdupq_n_f64(1.4426950408889634074);
    const float64x2_t ln2_hi_neg = vdupq_n_f64(-6.93147180369123816490e-01);
    const float64x2_t ln2_lo_neg = vdupq_n_f64(-1.90821492927058770002e-10);
    const float64x2_t hi_bound = vdupq_n_f64(709.0);
    const float64x2_t lo_bound = vdupq_n_f64(-708.0);

    const uint64x2_t over = vcgtq_f64(x, hi_bound);
    const uint64x2_t under = vcltq_f64(x, lo_bound);
    const uint64x2_t ordered = vceqq_f64(x, x);

    const float64x2_t xc = vmaxq_f64(vminq_f64(x, hi_bound), lo_bound);

    // Round to nearest even, matching std::lrint in the scalar path.
    const int64x2_t n64 = vcvtnq_s64_f64(vmulq_f64(xc, log2e));
    const float64x2_t nd = vcvtq_f64_s64(n64);
    float64x2_t r = vfma(nd, ln2_hi_neg, xc);
    r = vfma(nd, ln2_lo_neg, r);

    float64x2_t p = vdupq_n_f64(1.6059043836821614599e-10);
    p = vfma(p, r, vdupq_n_f64(2.0876756987868098979e-09));
    p = vfma(p, r, vdupq_n_f64(2.5052108385441718775e-08));
    p = vfma(p, r, vdupq_n_f64(2.7557319223985890653e-07));
    p = vfma(p, r, vdupq_n_f64(2.7557319223985888276e-06));
    p = vfma(p, r, vdupq_n_f64(2.4801587301587301566e-05));
    p = vfma(p, r, vdupq_n_f64(1.9841269841269841253e-04));
    p = vfma(p, r, vdupq_n_f64(1.3888888888888889419e-03));
    p = vfma(p, r, vdupq_n_f64(8.3333333333333332177e-03));
    p = vfma(p, r, vdupq_n_f64(4.1666666666666664354e-02));
    p = vfma(p, r, vdupq_n_f64(1.6666666666666665741e-01));
    p = vfma(p, r, vdupq_n_f64(5.0e-01));
    p = vfma(p, r, vdupq_n_f64(1.0));
    p = vfma(p, r, vdupq_n_f64(1.0));

    const int64x2_t bits =
        vshlq_n_s64(vaddq_s64(n64, vdupq_n_s64(1023)), 52);
    float64x2_t y = vmulq_f64(p, vreinterpretq_f64_s64(bits));

    y = vbslq_f64(over, vdupq_n_f64(std::numeric_limits<double>::infinity()), y);
    y = vbslq_f64(under, vdupq_n_f64(0.0), y);
    y = vbslq_f64(ordered, y, x);  // NaN lanes keep x
    return y;
}

struct CellIndex {
    int64x2_t k;
    float64x2_t f;
};

inline int64x2_t clamp_s64(int64x2_t v, int64x2_t lo, int64x2_t hi) {
    v = vbslq_s64(vcgtq_s64(v, hi), hi, v);
    v = vbslq_s64(vcgtq_s64(lo, v), lo, v);
    return v;
}

inline CellIndex cell_index(float64x2_t x, double inv_dx, int n_nodes) {
    const float64x2_t t = vmulq_f64(x, vdupq_n_f64(inv_dx));
    int64x2_t k = vcvtq_s64_f64(t);  // truncation, as (int) cast
    k = clamp_s64(k, vdupq_n_s64(0), vdupq_n_s64(n_nodes - 2));
    const float64x2_t f = vsubq_f64(t, vcvtq_f64_s64(k));
    return {k, f};
}

inline float64x2_t vgather(const double* node_field, int n_nodes, double inv_dx,
                           float64x2_t x) {
    const CellIndex ci = cell_index(x, inv_dx, n_nodes);
    const std::int64_t k0 = vgetq_lane_s64(ci.k, 0);
    const std::int64_t k1 = vgetq_lane_s64(ci.k, 1);
    const float64x2_t e0 = {node_field[k0], node_field[k1]};
    const float64x2_t e1 = {node_field[k0 + 1], node_field[k1 + 1]};
    return vfma(ci.f, vsubq_f64(e1, e0), e0);
}

inline float64x2_t vactivation_eff(float64x2_t x, const TransportCoeffs& c) {
    float64x2_t t = vmulq_f64(vsubq_f64(x, vdupq_n_f64(c.ramp_start_m)),
                              vdupq_n_f64(c.inv_ramp_len));
    t = vmaxq_f64(t, vdupq_n_f64(0.0));
    const float64x2_t ua = vfma(t, vdupq_n_f64(c.ua_rise_eV), vdupq_n_f64(c.ua_flat_eV));
    const float64x2_t shape =
        vsubq_f64(vdupq_n_f64(1.0), vmulq_f64(x, vdupq_n_f64(c.inv_length)));
    return vfma(vdupq_n_f64(c.bias_coeff_eV), shape, ua);
}

inline float64x2_t clamp_counted(float64x2_t v, float64x2_t bound,
                                 std::uint64_t* count) {
    const float64x2_t neg_bound = vnegq_f64(bound);
    const uint64x2_t out_mask =
        vorrq_u64(vcgtq_f64(v, bound), vcltq_f64(v, neg_bound));
    *count += (vgetq_lane_u64(out_mask, 0) & 1u) + (vgetq_lane_u64(out_mask, 1) & 1u);
    return vmaxq_f64(vminq_f64(v, bound), neg_bound);
}

std::uint64_t advance_neon(const double* x, const double* r, std::size_t n,
                           const double* node_field, int n_nodes,
                           const TransportCoeffs& c, double* x_out,
                           double* dx_det_out) {
    std::uint64_t clamps = 0;
    const float64x2_t bound = vdupq_n_f64(c.exp_arg_bound);
    const std::size_t n2 = n & ~std::size_t{1};

    for (std::size_t i = 0; i < n2; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t field = vgather(node_field, n_nodes, c.inv_dx, xi);
        const float64x2_t ua = vactivation_eff(xi, c);

        float64x2_t arg_act = vmulq_f64(vnegq_f64(ua), vdupq_n_f64(c.inv_kT_eV));
        float64x2_t arg_field = vmulq_f64(vdupq_n_f64(c.field_coeff), field);
        arg_act = clamp_counted(arg_act, bound, &clamps);
        arg_field = clamp_counted(arg_field, bound, &clamps);

        const float64x2_t mobility =
            vmulq_f64(vdupq_n_f64(c.prefactor_m_per_s), vexp(arg_act));
        const float64x2_t bracket = vsubq_f64(vexp(arg_field), vexp(vnegq_f64(arg_field)));
        const float64x2_t dx_det =
            vmulq_f64(vmulq_f64(mobility, bracket), vdupq_n_f64(c.dt_s));
        vst1q_f64(dx_det_out + i, dx_det);

        const float64x2_t kick =
            vmulq_f64(vsubq_f64(vld1q_f64(r + i), vdupq_n_f64(0.5)),
                      vmulq_f64(vdupq_n_f64(c.delta_max), vabsq_f64(dx_det)));
        float64x2_t xn = vaddq_f64(vaddq_f64(xi, dx_det), kick);
        xn = vminq_f64(xn, vdupq_n_f64(c.length_m));
        xn = vmaxq_f64(xn, vdupq_n_f64(0.0));
        vst1q_f64(x_out + i, xn);
    }

    for (std::size_t i = n2; i < n; ++i) {
        const double field = ref_gather(node_field, n_nodes, c.inv_dx, x[i]);
        const double ua = ref_activation_eff(x[i], c);
        const double dx_det = ref_drift_displacement(field, ua, c, &clamps);
        dx_det_out[i] = dx_det;
        x_out[i] = ref_jitter_clamp(x[i], dx_det, r[i], c);
    }
    return clamps;
}

void deposit_neon(const double* x, std::size_t n, double charge_per_particle,
                  double inv_dx, int n_nodes, double* node_charge) {
    for (std::size_t i = 0; i < n; ++i) {
        int k;
        double f;
        ref_cell_weight(x[i], inv_dx, n_nodes, &k, &f);
        node_charge[k] += charge_per_particle * (1.0 - f);
        node_charge[k + 1] += charge_per_particle * f;
    }
}

void gather_neon(const double* node_field, int n_nodes, double inv_dx,
                 const double* x, std::size_t n, double* field_out) {
    const std::size_t n2 = n & ~std::size_t{1};
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1q_f64(field_out + i, vgather(node_field, n_nodes, inv_dx, vld1q_f64(x + i)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        field_out[i] = ref_gather(node_field, n_nodes, inv_dx, x[i]);
    }
}

}  // namespace

const KernelOps& neon_ops() {
    static const KernelOps ops{"neon", advance_neon, deposit_neon, gather_neon};
    return ops;
}

}  // namespace bfosim::kernels

#endif  // BFOSIM_BUILD_NEON
