#pragma once

// 1D electrostatics on a uniform node grid: cloud-in-cell charge
// deposition, a tridiagonal Poisson solve with Dirichlet ends, field
// differentiation, and interpolation back to particle positions.

#include <cstddef>
#include <vector>

#include "bfosim/kernels/kernels.hpp"

namespace bfosim {

struct Grid1D {
    int n_nodes = 0;
    double dx_m = 0.0;
    double length_m = 0.0;
    std::vector<double> charge_density_C_per_m3;  // rho per node
    std::vector<double> potential_V;              // phi per node
    std::vector<double> field_V_per_m;            // E per node

    Grid1D() = default;
    Grid1D(int nodes, double length);

    double inv_dx() const { return 1.0 / dx_m; }
};

namespace field {

// Deposits every particle's charge (weight * z * e each) onto the grid and
// converts node charge to volumetric density (half cells at the ends).
// Both signed species are deposited by calling this twice.
// Throws DomainError if a position lies outside [0, length].
void deposit_charge(const double* positions, std::size_t n,
                    double charge_per_particle_C, double area_m2, Grid1D& grid,
                    const kernels::KernelOps& ops);

void clear_charge(Grid1D& grid);

// Total charge represented on the grid, integrating density over node
// volumes (half cells at the boundaries).
double grid_total_charge_C(const Grid1D& grid, double area_m2);

// Solves d/dx (eps dphi/dx) = -rho with phi[0] = phi_left and
// phi[n-1] = phi_right by second-order central differences (Thomas
// algorithm). Writes grid.potential_V.
void solve_poisson(Grid1D& grid, double phi_left_V, double phi_right_V,
                   double epsilon_F_per_m);

// Residual of the discrete operator, max-norm relative to the right-hand
// side (plus boundary rows); used by tests and the acceptance suite.
double poisson_residual(const Grid1D& grid, double phi_left_V,
                        double phi_right_V, double epsilon_F_per_m);

// E = -dphi/dx: central differences inside, one-sided second order at the
// ends. Writes grid.field_V_per_m.
void electric_field(Grid1D& grid);

// Linear interpolation of the nodal field at x (deposition weights).
double gather_field(const Grid1D& grid, double x_m);

}  // namespace field

}  // namespace bfosim
