#include "mmcfrt/network.hpp"

#include <cmath>

namespace mmcfrt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::array<double, 3> grid_voltages(double t, const FaultSpec& fault,
                                    const GridParams& grid) {
  const double v_pk = grid.ll_rms_v * std::sqrt(2.0 / 3.0);
  const double wt = kTwoPi * grid.frequency_hz * t;
  std::array<double, 3> v{
      v_pk * std::cos(wt),
      v_pk * std::cos(wt - kTwoPi / 3.0),
      v_pk * std::cos(wt + kTwoPi / 3.0),
  };
  if (fault.active(t)) {
    if (fault.kind == FaultKind::LLLG) {
      for (double& x : v) x *= fault.residual_factor;
    } else if (fault.kind == FaultKind::SLG) {
      v[static_cast<size_t>(fault.faulted_phase)] *= fault.residual_factor;
    }
  }
  return v;
}

ExportLimit exported_power_limit(const FaultSpec& fault, double t,
                                 double rated_w) {
  ExportLimit lim{rated_w, rated_w};
  if (!fault.active(t)) return lim;
  const double r = fault.residual_factor;
  if (fault.kind == FaultKind::LLLG) {
    lim.positive_sequence_w = rated_w * r;
    lim.phase_count_w = rated_w * r;
  } else if (fault.kind == FaultKind::SLG) {
    // |V1| = (1/3)|Va + a Vb + a^2 Vc| with one phase scaled by r.
    lim.positive_sequence_w = rated_w * (2.0 + r) / 3.0;
    lim.phase_count_w = rated_w * (1.0 + 2.0 * r) / 3.0;
  }
  return lim;
}

DcLinkState DcLinkState::nominal(const SystemParams& p, double i_line_a) {
  DcLinkState s;
  s.v_dc_onshore_v = p.dc_voltage_v;
  s.v_dc_offshore_v =
      p.dc_voltage_v + i_line_a * p.dc_line_resistance_ohm;
  s.i_line_a = i_line_a;
  const double c = dc_node_capacitance_f(p);
  s.stored_energy_j = 0.5 * c *
      (s.v_dc_onshore_v * s.v_dc_onshore_v +
       s.v_dc_offshore_v * s.v_dc_offshore_v);
  return s;
}

DcLinkState dc_link_step(const DcLinkState& state, double i_inj_onshore_a,
                         double i_inj_offshore_a, double dt_s,
                         const SystemParams& params) {
  const double c = dc_node_capacitance_f(params);
  const double r = params.dc_line_resistance_ohm;
  const double l = params.dc_line_inductance_h;

  // Trapezoidal step of the full three-state system (both node voltages and
  // the cable current); the injections are held constant over the step.
  // Solving the implicit 3x3 in closed form keeps the update unconditionally
  // stable, which the undamped LC mode of the link requires.
  const double a = dt_s / (2.0 * c);
  const double b = dt_s / (2.0 * l);
  const double drop = state.v_dc_offshore_v - state.v_dc_onshore_v;

  DcLinkState next = state;
  next.i_line_a =
      (state.i_line_a * (1.0 - b * r - 2.0 * a * b) + 2.0 * b * drop +
       2.0 * a * b * (i_inj_offshore_a - i_inj_onshore_a)) /
      (1.0 + b * r + 2.0 * a * b);
  next.v_dc_offshore_v =
      state.v_dc_offshore_v +
      a * (2.0 * i_inj_offshore_a - state.i_line_a - next.i_line_a);
  next.v_dc_onshore_v =
      state.v_dc_onshore_v +
      a * (2.0 * i_inj_onshore_a + state.i_line_a + next.i_line_a);

  next.stored_energy_j = 0.5 * c *
      (next.v_dc_onshore_v * next.v_dc_onshore_v +
       next.v_dc_offshore_v * next.v_dc_offshore_v);
  return next;
}

}  // namespace mmcfrt
