#include "bfosim/contacts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bfosim/errors.hpp"

namespace bfosim {

namespace diagnostics {

namespace {
std::atomic<std::uint64_t> g_exp_clamps{0};
}

std::uint64_t exp_clamp_count() { return g_exp_clamps.load(); }
void add_exp_clamps(std::uint64_t n) { g_exp_clamps.fetch_add(n); }
void reset_exp_clamps() { g_exp_clamps.store(0); }

}  // namespace diagnostics

namespace {

inline double clamped_exp_arg(double arg, double bound) {
    if (arg > bound) {
        diagnostics::add_exp_clamps(1);
        return bound;
    }
    if (arg < -bound) {
        diagnostics::add_exp_clamps(1);
        return -bound;
    }
    return arg;
}

}  // namespace

EffectiveContact effective_barrier(const ContactModel& contact, double q) {
    if (!std::isfinite(q)) {
        throw StateError(std::string(contact.label) + ": internal state q is not finite");
    }
    const double phi_eff = contact.phi0_eV * (1.0 + contact.lambda_b * q);
    const double n_eff = contact.n0 * (1.0 + contact.lambda_n * q);
    if (!(phi_eff > 0.0)) {
        throw StateError(std::string(contact.label) +
                         ": effective barrier height <= 0 at q = " + std::to_string(q));
    }
    if (!(n_eff >= 1.0)) {
        throw StateError(std::string(contact.label) +
                         ": effective ideality factor < 1 at q = " + std::to_string(q));
    }
    return {phi_eff, n_eff};
}

double schottky_current(double v_sc_V, double phi_eff_eV, double n_eff,
                        double temperature_K, double area_m2,
                        double alpha_r_eV_per_sqrtV,
                        double richardson_A_per_m2K2, double exp_arg_bound) {
    const double kT_eV = constants::k_boltzmann_eV_per_K * temperature_K;
    const double reverse_current =
        area_m2 * richardson_A_per_m2K2 * temperature_K * temperature_K *
        std::exp(clamped_exp_arg(-phi_eff_eV / kT_eV, exp_arg_bound));

    double boost = 1.0;
    if (v_sc_V < 0.0) {
        const double arg = alpha_r_eV_per_sqrtV * std::sqrt(-v_sc_V) / kT_eV;
        boost = std::exp(clamped_exp_arg(arg, exp_arg_bound));
    }
    // e V / (n k_B T): numerically v / (n kT) with kT in eV.
    const double diode_arg = clamped_exp_arg(v_sc_V / (n_eff * kT_eV), exp_arg_bound);
    return reverse_current * boost * std::expm1(diode_arg);
}

double bulk_current(double v_bfo_V, const DeviceParameters& params) {
    return params.conductivity_S_per_m * params.area_m2 * v_bfo_V / params.length_m;
}

ContactModel top_contact(const DeviceParameters& p) {
    return {p.phi0_top_eV, p.n0_top, p.lambda_b_top, p.lambda_n_top,
            p.alpha_r_eV_per_sqrtV, "top contact"};
}

ContactModel bottom_contact(const DeviceParameters& p) {
    return {p.phi0_bot_eV, p.n0_bot, p.lambda_b_bot, p.lambda_n_bot,
            p.alpha_r_eV_per_sqrtV, "bottom contact"};
}

namespace {

// Junction voltage carrying a given current. Forward branch is the exact
// logarithmic inversion; the reverse branch (with the sqrt softening term)
// is solved in log space by safeguarded Newton. Saturated reverse demand
// (alpha_r = 0 and |I| >= I_R) returns -kSaturatedVolts, which the outer
// bisection interprets as "reduce the trial current".
constexpr double kSaturatedVolts = 1.0e6;

double diode_voltage(double current_A, double i_reverse_A, double n_eff,
                     double kT_eV, double alpha_r) {
    if (current_A == 0.0) return 0.0;
    if (current_A > 0.0) {
        return n_eff * kT_eV * std::log1p(current_A / i_reverse_A);
    }

    const double magnitude = -current_A;
    const double s = alpha_r / kT_eV;          // d(log boost)/d sqrt(u)
    const double c = 1.0 / (n_eff * kT_eV);    // diode slope
    const double target = std::log(magnitude / i_reverse_A);

    if (alpha_r == 0.0) {
        if (magnitude >= i_reverse_A) return -kSaturatedVolts;
        return (1.0 / c) * std::log1p(-magnitude / i_reverse_A);  // negative
    }

    // h(u) = s sqrt(u) + log(1 - exp(-c u)) - target, strictly increasing.
    auto h = [&](double u) {
        return s * std::sqrt(u) + std::log1p(-std::exp(-c * u)) - target;
    };

    double u_lo = 0.0;  // h -> -inf
    double u_hi = 1.0;
    for (int i = 0; i < 200 && h(u_hi) < 0.0; ++i) {
        u_lo = u_hi;
        u_hi *= 2.0;
        if (u_hi > kSaturatedVolts) return -kSaturatedVolts;
    }

    double u = 0.5 * (std::max(u_lo, 1e-300) + u_hi);
    for (int i = 0; i < 200; ++i) {
        const double hv = h(u);
        if (std::fabs(hv) < 1.0e-14) break;
        if (hv > 0.0) {
            u_hi = u;
        } else {
            u_lo = u;
        }
        const double em = std::exp(-c * u);
        const double dh = 0.5 * s / std::sqrt(u) + c * em / (1.0 - em);
        double u_next = u - hv / dh;
        if (!(u_next > u_lo && u_next < u_hi)) {
            u_next = 0.5 * (u_lo + u_hi);
        }
        if (u_next == u) break;
        u = u_next;
        if (u_hi - u_lo < 1.0e-16 * u_hi) break;
    }
    return -u;
}

}  // namespace

CircuitState solve_partition(double v_device_V, double q, const ContactModel& top,
                             const ContactModel& bottom,
                             const DeviceParameters& params,
                             const PartitionOptions& opts) {
    const EffectiveContact eff_top = effective_barrier(top, q);
    const EffectiveContact eff_bot = effective_barrier(bottom, q);

    CircuitState state;
    state.phi_eff_top_eV = eff_top.phi_eff_eV;
    state.phi_eff_bot_eV = eff_bot.phi_eff_eV;
    state.n_eff_top = eff_top.n_eff;
    state.n_eff_bot = eff_bot.n_eff;
    if (v_device_V == 0.0) return state;

    const double kT_eV = params.thermal_energy_eV();
    const double t2 = params.temperature_K * params.temperature_K;
    const double emission = params.area_m2 * params.richardson_A_per_m2K2 * t2;
    const double ir_top = emission * std::exp(-eff_top.phi_eff_eV / kT_eV);
    const double ir_bot = emission * std::exp(-eff_bot.phi_eff_eV / kT_eV);
    const double r_bulk = params.bulk_resistance_ohm();

    // KVL mismatch for a trial current; strictly increasing in I.
    auto kvl = [&](double current, CircuitState* out) {
        const double v_top =
            diode_voltage(current, ir_top, eff_top.n_eff, kT_eV, top.alpha_r_eV_per_sqrtV);
        const double v_bot = diode_voltage(-current, ir_bot, eff_bot.n_eff, kT_eV,
                                           bottom.alpha_r_eV_per_sqrtV);
        const double v_bulk = current * r_bulk;
        if (out != nullptr) {
            out->v_sc_top_V = v_top;
            out->v_bfo_V = v_bulk;
            out->v_sc_bot_V = v_bot;
        }
        return v_top + v_bulk - v_bot - v_device_V;
    };

    // The bulk resistor bounds the solution current by |V| / R.
    const double i_span = std::fabs(v_device_V) / r_bulk * (1.0 + 1.0e-6) + 1.0e-300;
    double i_lo = v_device_V > 0.0 ? 0.0 : -i_span;
    double i_hi = v_device_V > 0.0 ? i_span : 0.0;

    const double tol = opts.kvl_tol_rel * std::max(1.0, std::fabs(v_device_V));
    // Where a blocking contact saturates, dV/dI is so steep that the target
    // tolerance can sit below one ulp of the solution current; accept the
    // contract tolerance once the bracket exhausts machine resolution.
    const double contract_tol = 1.0e-9 * std::max(1.0, std::fabs(v_device_V));
    double current = 0.5 * (i_lo + i_hi);
    double residual = kvl(current, nullptr);
    double best_current = current;
    double best_residual = std::fabs(residual);
    int used = 0;
    for (int i = 0; i < opts.max_iterations && std::fabs(residual) > tol; ++i) {
        if (residual > 0.0) {
            i_hi = current;
        } else {
            i_lo = current;
        }
        current = 0.5 * (i_lo + i_hi);
        residual = kvl(current, nullptr);
        if (std::fabs(residual) < best_residual) {
            best_residual = std::fabs(residual);
            best_current = current;
        }
        used = i + 1;
        if (i_hi - i_lo <=
            4.0 * std::numeric_limits<double>::epsilon() * std::fabs(i_hi)) {
            break;  // current axis resolved to machine precision
        }
    }
    if (std::fabs(residual) > best_residual) {
        current = best_current;
        residual = kvl(current, nullptr);
    }
    if (std::fabs(residual) > contract_tol) {
        throw SolverError("solve_partition: no convergence after " +
                              std::to_string(opts.max_iterations) +
                              " iterations at V = " + std::to_string(v_device_V) +
                              " V (KVL residual " + std::to_string(residual) + " V)",
                          residual);
    }

    residual = kvl(current, &state);
    state.current_A = current;
    state.iterations = used;
    state.kvl_residual_rel =
        std::fabs(residual) / std::max(1.0, std::fabs(v_device_V));

    const double i_top = schottky_current(state.v_sc_top_V, eff_top.phi_eff_eV,
                                          eff_top.n_eff, params.temperature_K,
                                          params.area_m2, top.alpha_r_eV_per_sqrtV,
                                          params.richardson_A_per_m2K2,
                                          opts.exp_arg_bound);
    const double i_bulk = bulk_current(state.v_bfo_V, params);
    const double i_bot = schottky_current(state.v_sc_bot_V, eff_bot.phi_eff_eV,
                                          eff_bot.n_eff, params.temperature_K,
                                          params.area_m2, bottom.alpha_r_eV_per_sqrtV,
                                          params.richardson_A_per_m2K2,
                                          opts.exp_arg_bound);
    const double i_scale = std::max(std::fabs(current), 1.0e-300);
    state.kcl_residual_rel =
        std::max({std::fabs(i_top - current), std::fabs(i_bulk - current),
                  std::fabs(-i_bot - current)}) /
        i_scale;
    return state;
}

}  // namespace bfosim
