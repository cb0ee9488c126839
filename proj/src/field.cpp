#include "bfosim/field.hpp"

#include <cmath>
#include <string>

#include "bfosim/errors.hpp"

namespace bfosim {

Grid1D::Grid1D(int nodes, double length) {
    if (nodes < 3) throw ConfigError("grid.n_nodes: must be >= 3");
    if (!(length > 0.0)) throw ConfigError("grid: device length must be > 0");
    n_nodes = nodes;
    length_m = length;
    dx_m = length / static_cast<double>(nodes - 1);
    charge_density_C_per_m3.assign(static_cast<std::size_t>(nodes), 0.0);
    potential_V.assign(static_cast<std::size_t>(nodes), 0.0);
    field_V_per_m.assign(static_cast<std::size_t>(nodes), 0.0);
}

namespace field {

void clear_charge(Grid1D& grid) {
    std::fill(grid.charge_density_C_per_m3.begin(),
              grid.charge_density_C_per_m3.end(), 0.0);
}

void deposit_charge(const double* positions, std::size_t n,
                    double charge_per_particle_C, double area_m2, Grid1D& grid,
                    const kernels::KernelOps& ops) {
    for (std::size_t i = 0; i < n; ++i) {
        if (positions[i] < 0.0 || positions[i] > grid.length_m) {
            throw DomainError("deposit_charge: particle " + std::to_string(i) +
                              " outside [0, length]");
        }
    }
    // Accumulate node charge [C] into a scratch buffer, then convert to
    // density in place. Node volume is A*dx, halved at the two ends.
    std::vector<double> node_charge(static_cast<std::size_t>(grid.n_nodes), 0.0);
    ops.deposit(positions, n, charge_per_particle_C, grid.inv_dx(), grid.n_nodes,
                node_charge.data());

    const double inv_vol = 1.0 / (area_m2 * grid.dx_m);
    auto& rho = grid.charge_density_C_per_m3;
    rho[0] += node_charge[0] * (2.0 * inv_vol);
    for (int i = 1; i + 1 < grid.n_nodes; ++i) {
        rho[static_cast<std::size_t>(i)] +=
            node_charge[static_cast<std::size_t>(i)] * inv_vol;
    }
    rho[static_cast<std::size_t>(grid.n_nodes - 1)] +=
        node_charge[static_cast<std::size_t>(grid.n_nodes - 1)] * (2.0 * inv_vol);
}

double grid_total_charge_C(const Grid1D& grid, double area_m2) {
    const double cell_vol = area_m2 * grid.dx_m;
    double total = 0.0;
    total += grid.charge_density_C_per_m3.front() * 0.5 * cell_vol;
    for (int i = 1; i + 1 < grid.n_nodes; ++i) {
        total += grid.charge_density_C_per_m3[static_cast<std::size_t>(i)] * cell_vol;
    }
    total += grid.charge_density_C_per_m3.back() * 0.5 * cell_vol;
    return total;
}

void solve_poisson(Grid1D& grid, double phi_left_V, double phi_right_V,
                   double epsilon_F_per_m) {
    if (!(epsilon_F_per_m > 0.0)) {
        throw ConfigError("solve_poisson: permittivity must be > 0");
    }
    const int n = grid.n_nodes;
    auto& phi = grid.potential_V;
    const auto& rho = grid.charge_density_C_per_m3;

    phi[0] = phi_left_V;
    phi[static_cast<std::size_t>(n - 1)] = phi_right_V;
    if (n == 2) return;

    // Interior rows: phi[i-1] - 2 phi[i] + phi[i+1] = -rho[i] dx^2 / eps.
    // Thomas elimination on the tridiagonal system (diagonally dominant).
    const double h2_over_eps = grid.dx_m * grid.dx_m / epsilon_F_per_m;
    const int m = n - 2;
    std::vector<double> c_prime(static_cast<std::size_t>(m), 0.0);
    std::vector<double> d_prime(static_cast<std::size_t>(m), 0.0);

    auto rhs = [&](int i) {
        double b = -rho[static_cast<std::size_t>(i + 1)] * h2_over_eps;
        if (i == 0) b -= phi_left_V;
        if (i == m - 1) b -= phi_right_V;
        return b;
    };

    double beta = -2.0;
    c_prime[0] = 1.0 / beta;
    d_prime[0] = rhs(0) / beta;
    for (int i = 1; i < m; ++i) {
        beta = -2.0 - c_prime[static_cast<std::size_t>(i - 1)];
        c_prime[static_cast<std::size_t>(i)] = 1.0 / beta;
        d_prime[static_cast<std::size_t>(i)] =
            (rhs(i) - d_prime[static_cast<std::size_t>(i - 1)]) / beta;
    }
    phi[static_cast<std::size_t>(m)] = d_prime[static_cast<std::size_t>(m - 1)];
    for (int i = m - 2; i >= 0; --i) {
        phi[static_cast<std::size_t>(i + 1)] =
            d_prime[static_cast<std::size_t>(i)] -
            c_prime[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(i + 2)];
    }
}

double poisson_residual(const Grid1D& grid, double phi_left_V,
                        double phi_right_V, double epsilon_F_per_m) {
    const int n = grid.n_nodes;
    const auto& phi = grid.potential_V;
    const auto& rho = grid.charge_density_C_per_m3;
    const double h2_over_eps = grid.dx_m * grid.dx_m / epsilon_F_per_m;

    double max_res = std::fabs(phi[0] - phi_left_V);
    double max_rhs = std::max(std::fabs(phi_left_V), std::fabs(phi_right_V));
    max_res = std::max(max_res,
                       std::fabs(phi[static_cast<std::size_t>(n - 1)] - phi_right_V));
    for (int i = 1; i + 1 < n; ++i) {
        const double b = -rho[static_cast<std::size_t>(i)] * h2_over_eps;
        const double ax = phi[static_cast<std::size_t>(i - 1)] -
                          2.0 * phi[static_cast<std::size_t>(i)] +
                          phi[static_cast<std::size_t>(i + 1)];
        max_res = std::max(max_res, std::fabs(ax - b));
        max_rhs = std::max(max_rhs, std::fabs(b));
    }
    return max_rhs > 0.0 ? max_res / max_rhs : max_res;
}

void electric_field(Grid1D& grid) {
    const int n = grid.n_nodes;
    const auto& phi = grid.potential_V;
    auto& e = grid.field_V_per_m;
    const double inv_2dx = 1.0 / (2.0 * grid.dx_m);

    e[0] = -(-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) * inv_2dx;
    for (int i = 1; i + 1 < n; ++i) {
        e[static_cast<std::size_t>(i)] = -(phi[static_cast<std::size_t>(i + 1)] -
                                           phi[static_cast<std::size_t>(i - 1)]) *
                                         inv_2dx;
    }
    e[static_cast<std::size_t>(n - 1)] =
        -(3.0 * phi[static_cast<std::size_t>(n - 1)] -
          4.0 * phi[static_cast<std::size_t>(n - 2)] +
          phi[static_cast<std::size_t>(n - 3)]) *
        inv_2dx;
}

double gather_field(const Grid1D& grid, double x_m) {
    if (x_m < 0.0 || x_m > grid.length_m) {
        throw DomainError("gather_field: position outside [0, length]");
    }
    return kernels::ref_gather(grid.field_V_per_m.data(), grid.n_nodes,
                               grid.inv_dx(), x_m);
}

}  // namespace field

}  // namespace bfosim
