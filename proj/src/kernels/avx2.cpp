// AVX2+FMA particle kernels. Operation-for-operation mirror of the scalar
// reference in sim_math.hpp; the equivalence tests assert bit-identical
// output, so any change must be made in both places.

#if defined(BFOSIM_BUILD_AVX2)

#include <immintrin.h>

#include "bfosim/kernels/kernels.hpp"

namespace bfosim::kernels {

namespace {

// Vector counterpart of sim_exp(). Same reduction, same polynomial, same
// FMA order; _mm256_cvtpd_epi32 uses round-to-nearest-even exactly like
// std::lrint in the scalar path.
inline __m256d vexp(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d hi_bound = _mm256_set1_pd(709.0);
    const __m256d lo_bound = _mm256_set1_pd(-708.0);

    const __m256d over = _mm256_cmp_pd(x, hi_bound, _CMP_GT_OQ);
    const __m256d under = _mm256_cmp_pd(x, lo_bound, _CMP_LT_OQ);
    const __m256d is_nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);

    const __m256d xc =
        _mm256_max_pd(_mm256_min_pd(x, hi_bound), lo_bound);

    const __m128i n32 = _mm256_cvtpd_epi32(_mm256_mul_pd(xc, log2e));
    const __m256d nd = _mm256_cvtepi32_pd(n32);
    __m256d r = _mm256_fmadd_pd(nd, _mm256_sub_pd(_mm256_setzero_pd(), ln2_hi), xc);
    r = _mm256_fmadd_pd(nd, _mm256_sub_pd(_mm256_setzero_pd(), ln2_lo), r);

    __m256d p = _mm256_set1_pd(1.6059043836821614599e-10);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868098979e-09));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441718775e-08));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985890653e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985888276e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587301566e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841253e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889419e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333332177e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664354e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666665741e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    __m256d y = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));

    y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
    y = _mm256_blendv_pd(y, _mm256_setzero_pd(), under);
    y = _mm256_blendv_pd(y, x, is_nan);
    return y;
}

struct CellIndex {
    __m128i k;   // 4 x int32, clamped to [0, n_nodes - 2]
    __m256d f;   // fractional offsets
};

inline CellIndex cell_index(__m256d x, double inv_dx, int n_nodes) {
    const __m256d t = _mm256_mul_pd(x, _mm256_set1_pd(inv_dx));
    __m128i k = _mm256_cvttpd_epi32(t);  // truncation, as (int) cast
    k = _mm_min_epi32(k, _mm_set1_epi32(n_nodes - 2));
    k = _mm_max_epi32(k, _mm_setzero_si128());
    const __m256d f = _mm256_sub_pd(t, _mm256_cvtepi32_pd(k));
    return {k, f};
}

inline __m256d vgather(const double* node_field, int n_nodes, double inv_dx,
                       __m256d x) {
    const CellIndex ci = cell_index(x, inv_dx, n_nodes);
    const __m256d e0 = _mm256_i32gather_pd(node_field, ci.k, 8);
    const __m256d e1 =
        _mm256_i32gather_pd(node_field, _mm_add_epi32(ci.k, _mm_set1_epi32(1)), 8);
    return _mm256_fmadd_pd(ci.f, _mm256_sub_pd(e1, e0), e0);
}

inline __m256d vactivation_eff(__m256d x, const TransportCoeffs& c) {
    __m256d t = _mm256_mul_pd(_mm256_sub_pd(x, _mm256_set1_pd(c.ramp_start_m)),
                              _mm256_set1_pd(c.inv_ramp_len));
    t = _mm256_max_pd(t, _mm256_setzero_pd());
    const __m256d ua =
        _mm256_fmadd_pd(t, _mm256_set1_pd(c.ua_rise_eV), _mm256_set1_pd(c.ua_flat_eV));
    const __m256d shape = _mm256_sub_pd(
        _mm256_set1_pd(1.0), _mm256_mul_pd(x, _mm256_set1_pd(c.inv_length)));
    return _mm256_fmadd_pd(_mm256_set1_pd(c.bias_coeff_eV), shape, ua);
}

// Clamps v into [-bound, bound]; adds the number of clamped lanes to *count.
inline __m256d clamp_counted(__m256d v, __m256d bound, std::uint64_t* count) {
    const __m256d neg_bound = _mm256_sub_pd(_mm256_setzero_pd(), bound);
    const __m256d out_mask = _mm256_or_pd(_mm256_cmp_pd(v, bound, _CMP_GT_OQ),
                                          _mm256_cmp_pd(v, neg_bound, _CMP_LT_OQ));
    *count += static_cast<std::uint64_t>(
        __builtin_popcount(_mm256_movemask_pd(out_mask)));
    return _mm256_max_pd(_mm256_min_pd(v, bound), neg_bound);
}

std::uint64_t advance_avx2(const double* x, const double* r, std::size_t n,
                           const double* node_field, int n_nodes,
                           const TransportCoeffs& c, double* x_out,
                           double* dx_det_out) {
    std::uint64_t clamps = 0;
    const __m256d bound = _mm256_set1_pd(c.exp_arg_bound);
    const std::size_t n4 = n & ~std::size_t{3};

    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d field = vgather(node_field, n_nodes, c.inv_dx, xi);
        const __m256d ua = vactivation_eff(xi, c);

        __m256d arg_act = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_setzero_pd(), ua), _mm256_set1_pd(c.inv_kT_eV));
        __m256d arg_field = _mm256_mul_pd(_mm256_set1_pd(c.field_coeff), field);
        arg_act = clamp_counted(arg_act, bound, &clamps);
        arg_field = clamp_counted(arg_field, bound, &clamps);

        const __m256d mobility =
            _mm256_mul_pd(_mm256_set1_pd(c.prefactor_m_per_s), vexp(arg_act));
        const __m256d bracket = _mm256_sub_pd(
            vexp(arg_field), vexp(_mm256_sub_pd(_mm256_setzero_pd(), arg_field)));
        const __m256d dx_det = _mm256_mul_pd(_mm256_mul_pd(mobility, bracket),
                                             _mm256_set1_pd(c.dt_s));
        _mm256_storeu_pd(dx_det_out + i, dx_det);

        const __m256d abs_dx = _mm256_andnot_pd(_mm256_set1_pd(-0.0), dx_det);
        const __m256d kick = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_loadu_pd(r + i), _mm256_set1_pd(0.5)),
            _mm256_mul_pd(_mm256_set1_pd(c.delta_max), abs_dx));
        __m256d xn = _mm256_add_pd(_mm256_add_pd(xi, dx_det), kick);
        xn = _mm256_min_pd(xn, _mm256_set1_pd(c.length_m));
        xn = _mm256_max_pd(xn, _mm256_setzero_pd());
        _mm256_storeu_pd(x_out + i, xn);
    }

    for (std::size_t i = n4; i < n; ++i) {
        const double field = ref_gather(node_field, n_nodes, c.inv_dx, x[i]);
        const double ua = ref_activation_eff(x[i], c);
        const double dx_det = ref_drift_displacement(field, ua, c, &clamps);
        dx_det_out[i] = dx_det;
        x_out[i] = ref_jitter_clamp(x[i], dx_det, r[i], c);
    }
    return clamps;
}

void deposit_avx2(const double* x, std::size_t n, double charge_per_particle,
                  double inv_dx, int n_nodes, double* node_charge) {
    const std::size_t n4 = n & ~std::size_t{3};
    alignas(16) int k_lane[4];
    alignas(32) double f_lane[4];

    for (std::size_t i = 0; i < n4; i += 4) {
        const CellIndex ci = cell_index(_mm256_loadu_pd(x + i), inv_dx, n_nodes);
        _mm_store_si128(reinterpret_cast<__m128i*>(k_lane), ci.k);
        _mm256_store_pd(f_lane, ci.f);
        for (int lane = 0; lane < 4; ++lane) {
            node_charge[k_lane[lane]] += charge_per_particle * (1.0 - f_lane[lane]);
            node_charge[k_lane[lane] + 1] += charge_per_particle * f_lane[lane];
        }
    }
    for (std::size_t i = n4; i < n; ++i) {
        int k;
        double f;
        ref_cell_weight(x[i], inv_dx, n_nodes, &k, &f);
        node_charge[k] += charge_per_particle * (1.0 - f);
        node_charge[k + 1] += charge_per_particle * f;
    }
}

void gather_avx2(const double* node_field, int n_nodes, double inv_dx,
                 const double* x, std::size_t n, double* field_out) {
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        _mm256_storeu_pd(field_out + i,
                         vgather(node_field, n_nodes, inv_dx, _mm256_loadu_pd(x + i)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        field_out[i] = ref_gather(node_field, n_nodes, inv_dx, x[i]);
    }
}

}  // namespace

const KernelOps& avx2_ops() {
    static const KernelOps ops{"avx2", advance_avx2, deposit_avx2, gather_avx2};
    return ops;
}

}  // namespace bfosim::kernels

#endif  // BFOSIM_BUILD_AVX2
