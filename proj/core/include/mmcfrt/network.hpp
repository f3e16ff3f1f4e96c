#pragma once

#include <array>

#include "mmcfrt/params.hpp"

namespace mmcfrt {

enum class FaultKind { None, SLG, LLLG };

struct FaultSpec {
  FaultKind kind = FaultKind::None;
  double onset_s = 0;
  double duration_s = 0;
  double residual_factor = 0;  // retained voltage on faulted phases
  int faulted_phase = 0;       // SLG only

  bool active(double t) const {
    return kind != FaultKind::None && t >= onset_s &&
           t < onset_s + duration_s;
  }
  double clear_time() const { return onset_s + duration_s; }
};

struct GridParams {
  double ll_rms_v = 333e3;
  double frequency_hz = 50.0;
};

/// Three-phase Thevenin source voltages at the onshore PCC. A fault scales
/// the affected phases by residual_factor inside [onset, onset+duration];
/// application and removal are instantaneous. Pure function of t.
std::array<double, 3> grid_voltages(double t, const FaultSpec& fault,
                                    const GridParams& grid);

/// Maximum exportable power under the present grid voltage. Two readings
/// are produced for single-phase faults: the positive-sequence magnitude
/// of the faulted set (bolted SLG keeps 2/3 of nominal) and the
/// phase-count reading in which the export drops to 1/3. Both are logged;
/// the simulation engine uses the phase-count reading (see README).
struct ExportLimit {
  double positive_sequence_w = 0;
  double phase_count_w = 0;
};

ExportLimit exported_power_limit(const FaultSpec& fault, double t,
                                 double rated_w);

/// Lumped DC link: one capacitance per terminal plus a series R-L cable.
struct DcLinkState {
  double v_dc_onshore_v = 0;   // pole-to-pole
  double v_dc_offshore_v = 0;
  double i_line_a = 0;         // positive from offshore to onshore
  double stored_energy_j = 0;  // both terminal capacitances

  static DcLinkState nominal(const SystemParams& p, double i_line_a = 0);
};

/// Pole-to-pole equivalent of the per-pole lumped capacitance.
inline double dc_node_capacitance_f(const SystemParams& p) {
  return p.dc_link_capacitance_f / 2.0;
}

/// Advances the link one step: terminal capacitances integrate net injected
/// current, the cable current follows the trapezoidal rule. i_inj_* are net
/// currents into each terminal node (converter draw enters negative).
DcLinkState dc_link_step(const DcLinkState& state, double i_inj_onshore_a,
                         double i_inj_offshore_a, double dt_s,
                         const SystemParams& params);

}  // namespace mmcfrt
