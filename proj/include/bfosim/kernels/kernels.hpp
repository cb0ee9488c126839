#pragma once

// Runtime-dispatched particle kernels.
//
// Each instruction set provides the same three hot loops; the scalar
// variant is the reference and the SIMD variants are required to produce
// bit-identical results (see tests/test_kernels.cpp). Selection happens
// once per run, by CPU probing or by explicit request.

#include <cstddef>
#include <cstdint>
#include <string>

#include "bfosim/kernels/sim_math.hpp"

namespace bfosim::kernels {

struct KernelOps {
    const char* name;

    // Fused push: gather field at x, evaluate effective activation, form
    // the deterministic displacement, apply jitter and wall clamp.
    // Writes new positions to x_out and deterministic displacements to
    // dx_det_out; returns the number of clamped exponential arguments.
    std::uint64_t (*advance)(const double* x, const double* r, std::size_t n,
                             const double* node_field, int n_nodes,
                             const TransportCoeffs& coeffs, double* x_out,
                             double* dx_det_out);

    // CIC deposition: accumulates charge_per_particle split linearly
    // between the two bracketing nodes into node_charge (not cleared).
    void (*deposit)(const double* x, std::size_t n, double charge_per_particle,
                    double inv_dx, int n_nodes, double* node_charge);

    // Field interpolation at each position.
    void (*gather)(const double* node_field, int n_nodes, double inv_dx,
                   const double* x, std::size_t n, double* field_out);
};

enum class Kind { auto_detect, scalar, avx2, neon };

Kind parse_kind(const std::string& name);  // throws ConfigError on unknown
std::string kind_name(Kind kind);

// True when the given variant can run on this machine.
bool available(Kind kind);

// Resolve auto_detect to the best available variant; throws ConfigError
// for an explicitly requested variant that is unavailable.
const KernelOps& select(Kind kind);

const KernelOps& scalar_ops();
#if defined(BFOSIM_BUILD_AVX2)
const KernelOps& avx2_ops();
#endif
#if defined(BFOSIM_BUILD_NEON)
const KernelOps& neon_ops();
#endif

}  // namespace bfosim::kernels
