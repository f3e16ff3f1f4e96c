#include "mmcfrt/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmcfrt/errors.hpp"

namespace mmcfrt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

Engine::Engine(const Scenario& sc) : scenario_(sc) {
  const SystemParams& p = sc.params;
  World& w = world_;

  const double v0 = p.sm_rated_voltage_v;
  w.rec.cap_voltage_avg_v = v0;
  w.sec.cap_voltage_avg_v = v0;

  // Flat start at the rated operating point: wind exports through the link,
  // the onshore terminal at nominal voltage.
  const double i_line0 = p.rated_power_w / p.dc_voltage_v;
  w.link.v_dc_onshore_v = p.dc_voltage_v;
  w.link.v_dc_offshore_v =
      p.dc_voltage_v + i_line0 * p.dc_line_resistance_ohm;
  w.link.i_line_a = i_line0;
  const double c = dc_node_capacitance_f(p);
  w.link.stored_energy_j = 0.5 * c *
      (w.link.v_dc_onshore_v * w.link.v_dc_onshore_v +
       w.link.v_dc_offshore_v * w.link.v_dc_offshore_v);

  const double v_pk = p.ac_base_voltage_v * std::sqrt(2.0 / 3.0);
  const double i_pk = p.rated_power_w / (1.5 * v_pk);
  w.rec.i_d_a = i_pk;
  w.pll.angle_rad = 0;
  w.pll.omega_rad_s = kTwoPi * p.grid_frequency_hz;
  w.pll.integrator = w.pll.omega_rad_s;
  w.outer.vdc.integrator = 1.0;  // rated export at zero DC-voltage error
  w.vf.amplitude.integrator = 1.0;
  w.owf_bus_mag_v = v_pk;
  w.v_pcc_filt = {v_pk, 0.0};
  w.p_wind_w = p.rated_power_w;
  w.p_export_w = p.rated_power_w;

  const size_t n = std::max<size_t>(
      1, static_cast<size_t>(std::llround(
             1.0 / (2.0 * p.grid_frequency_hz * sc.dt_s))));
  ma_buf_.assign(n, w.v_pcc_filt);
  ma_sum_ = {w.v_pcc_filt.d * static_cast<double>(n),
             w.v_pcc_filt.q * static_cast<double>(n)};
}

Engine::Snapshot Engine::snapshot() const {
  const SystemParams& p = scenario_.params;
  Snapshot s;
  s.e_rec_j = world_.rec.stored_energy_j(p);
  s.e_sec_j = world_.sec.stored_energy_j(p);
  s.e_link_j = world_.link.stored_energy_j +
               0.5 * p.dc_line_inductance_h * world_.link.i_line_a *
                   world_.link.i_line_a;
  s.e_edd_j = world_.edd.cumulative_energy_j;
  s.e_loss_j = world_.e_loss_j;
  return s;
}

void Engine::open_budget() {
  budget_open_ = true;
  at_t0_ = snapshot();
  budget_.t0_s = world_.t_s;
  surplus_integral_j_ = 0;
}

void Engine::close_budget(double t1) {
  const Snapshot now = snapshot();
  budget_.t1_s = t1;
  budget_.surplus_integral_j = surplus_integral_j_;
  budget_.delta_e_rec_j = now.e_rec_j - at_t0_.e_rec_j;
  budget_.delta_e_sec_j = now.e_sec_j - at_t0_.e_sec_j;
  budget_.delta_e_dclink_j = now.e_link_j - at_t0_.e_link_j;
  budget_.edd_energy_j = now.e_edd_j - at_t0_.e_edd_j;
  budget_.losses_j = now.e_loss_j - at_t0_.e_loss_j;
  budget_.closure_residual_j =
      budget_.surplus_integral_j -
      (budget_.delta_e_rec_j + budget_.delta_e_sec_j +
       budget_.delta_e_dclink_j + budget_.edd_energy_j + budget_.losses_j);
  budget_closed_ = true;
}

void Engine::step() {
  const Scenario& sc = scenario_;
  const SystemParams& p = sc.params;
  const ControlGains& g = sc.gains;
  World& w = world_;
  const double dt = sc.dt_s;
  const double t = w.t_s;

  // (1) Grid voltages and fault
  GridParams grid{p.ac_base_voltage_v, p.grid_frequency_hz};
  const auto v_abc = grid_voltages(t, sc.fault, grid);

  // (2) Wind power
  const double onset =
      sc.fault.kind == FaultKind::None ? -1.0 : sc.fault.onset_s;
  const double cleared = sc.fault.clear_time();
  const double p_wind = wind_power(t, onset, cleared, sc.wind);
  w.p_wind_w = p_wind;

  // (3) Measurements
  const double v_dc_on_pu = w.link.v_dc_onshore_v / p.dc_voltage_v;
  const double v_dc_off_pu = w.link.v_dc_offshore_v / p.dc_voltage_v;
  const double v_pk = p.ac_base_voltage_v * std::sqrt(2.0 / 3.0);

  // (4) Controls: PLL -> outer -> inner -> energy controller -> EDD control
  const DqPair v_dq_inst = pll_step(v_abc, w.pll, dt, g, v_pk);

  // Positive-sequence estimate: moving average over one half grid period
  // cancels the double-frequency component of an unbalanced set.
  ma_sum_.d += v_dq_inst.d - ma_buf_[ma_pos_].d;
  ma_sum_.q += v_dq_inst.q - ma_buf_[ma_pos_].q;
  ma_buf_[ma_pos_] = v_dq_inst;
  ma_pos_ = (ma_pos_ + 1) % ma_buf_.size();
  const double inv_n = 1.0 / static_cast<double>(ma_buf_.size());
  w.v_pcc_filt = {ma_sum_.d * inv_n, ma_sum_.q * inv_n};

  const AcPower pq = ac_power(w.rec, w.v_pcc_filt);
  CurrentRefs refs = outer_loop_step(w.link.v_dc_onshore_v, p.dc_voltage_v,
                                     pq.q_var, 0.0, w.outer, dt, g,
                                     PerUnitBase::from(p));

  // Export capability under the present grid voltage
  const ExportLimit lim = exported_power_limit(sc.fault, t, p.rated_power_w);
  const double limit_w =
      sc.use_phase_count_limit ? lim.phase_count_w : lim.positive_sequence_w;
  const double vd_eff = std::max(w.v_pcc_filt.d, 0.02 * v_pk);
  // A fault-depressed capability binds exactly; the healthy grid accepts a
  // short-term overload so stored energy can be returned after clearance.
  const double margin = limit_w < p.rated_power_w ? 1.0 : 1.2;
  const double i_d_max = margin * limit_w / (1.5 * vd_eff);
  refs.i_d_ref_a = std::clamp(refs.i_d_ref_a, -i_d_max, i_d_max);

  const double n_vc_rec = p.sm_per_arm * w.rec.cap_voltage_avg_v;
  const InnerLoopOut inner = inner_current_loop(
      {w.rec.i_d_a, w.rec.i_q_a}, refs, w.v_pcc_filt, w.inner, dt, g, p,
      n_vc_rec);

  const double n_vc_sec = p.sm_per_arm * w.sec.cap_voltage_avg_v;
  const VfOut vf = vf_control(w.owf_bus_mag_v, p.grid_frequency_hz, v_pk,
                              w.vf, dt, g, p, n_vc_sec);

  EnergyControllerOut ec;
  if (sc.energy_control_enabled) {
    ec = energy_controller_step(p_wind, w.p_export_w, v_dc_on_pu,
                                w.rec.cap_voltage_avg_v, w.energy_ctl, p, g,
                                dt);
  } else {
    ec.m_dc = std::clamp(
        p.dc_voltage_v / (2.0 * p.sm_per_arm * w.rec.cap_voltage_avg_v), 0.3,
        0.6);
    ec.stage = FrtStage::Normal;
    ec.edd_enable_request = true;  // pure threshold chopper
    ec.store_power_w = 0;
  }
  if (ec.stage != w.stage) {
    w.stage = ec.stage;
    // recorded by run(); engine keeps only the current stage
  }
  w.m_dc = ec.m_dc;

  const bool enable = sc.edd_enabled && ec.edd_enable_request;
  const double duty = edd_control(v_dc_on_pu, enable, w.edd, p);

  // (5) Modulation synthesis (per-phase peak of the AC component)
  const double m_ac_mag = std::hypot(inner.m_ac_dq.d, inner.m_ac_dq.q) /
                          2.0;  // v_ac enters both arms with half weight
  w.m_ac_mag = m_ac_mag;

  // (6) Plant integration
  // Onshore AC current in the rotating frame against the series reactance.
  {
    const double base_z =
        p.ac_base_voltage_v * p.ac_base_voltage_v / p.rated_power_w;
    const double omega = kTwoPi * p.grid_frequency_hz;
    const double l_eq = p.transformer_reactance_pu * base_z / omega +
                        0.5 * p.arm_inductance_h;
    const double r_eq = g.series_resistance_pu * base_z;
    const double did =
        (inner.v_conv_dq_v.d - w.v_pcc_filt.d - r_eq * w.rec.i_d_a +
         omega * l_eq * w.rec.i_q_a) /
        l_eq;
    const double diq =
        (inner.v_conv_dq_v.q - w.v_pcc_filt.q - r_eq * w.rec.i_q_a -
         omega * l_eq * w.rec.i_d_a) /
        l_eq;
    w.rec.i_d_a += did * dt;
    w.rec.i_q_a += diq * dt;
  }
  const AcPower pq_out = ac_power(w.rec, w.v_pcc_filt);
  const double p_export = pq_out.p_w;
  w.p_export_w = p_export;

  // Offshore bus magnitude follows the V/f command with a short lag.
  {
    const double tau_bus = 0.010;
    const double a = dt / (tau_bus + dt);
    w.owf_bus_mag_v += a * (vf.v_cmd_v - w.owf_bus_mag_v);
  }

  // Offshore converter: passes wind power to the DC side; under link
  // overvoltage part of it is diverted into its own SM capacitors
  // (back-charging), bounded by a soft energy ceiling unless the voltage
  // is close to the protection limit.
  double divert_cmd = 0;
  {
    const double e_sec_pu = w.sec.energy_pu(p);
    double droop_pu = std::clamp(
        g.sec_divert_droop * (v_dc_off_pu - g.sec_divert_threshold_pu), 0.0,
        1.0);
    double headroom =
        clamp01((g.sec_energy_ceiling_pu - e_sec_pu) / 0.02);
    if (v_dc_off_pu >= g.sec_emergency_pu) {
      const double hard =
          p.cap_overvoltage_limit * p.cap_overvoltage_limit;
      headroom = clamp01((hard - 0.05 - e_sec_pu) / 0.05);
    }
    divert_cmd = droop_pu * headroom * p.rated_power_w;

    // Post-fault return of absorbed energy toward nominal.
    if (v_dc_off_pu < g.storing_trigger_pu && e_sec_pu > 1.0 &&
        droop_pu == 0.0) {
      const double e_nom = p.lumped_cap_f() * p.sm_rated_voltage_v *
                           p.sm_rated_voltage_v;
      divert_cmd = -(e_sec_pu - 1.0) * e_nom / 0.25;
    }
    const double a = dt / (g.command_lag_s + dt);
    w.sec_divert_w += a * (divert_cmd - w.sec_divert_w);
  }
  const double p_sec_out = p_wind - w.sec_divert_w;
  w.sec = capacitor_dynamics_step(w.sec, p_wind, p_sec_out, dt, p);

  // Onshore converter: draws export plus the storage command from the link.
  const double p_store = ec.store_power_w;
  const double p_rec_dc = p_export + p_store;
  w.rec = capacitor_dynamics_step(w.rec, p_rec_dc, p_export, dt, p);

  // EDD on the onshore DC bus.
  w.edd = edd_step(w.edd, duty, w.link.v_dc_onshore_v, dt, p);

  // DC link node currents.
  const double i_sec = p_sec_out / w.link.v_dc_offshore_v;
  const double i_rec = p_rec_dc / w.link.v_dc_onshore_v;
  const double i_edd =
      w.edd.instantaneous_power_w / w.link.v_dc_onshore_v;
  const double i_line_before = w.link.i_line_a;
  w.link = dc_link_step(w.link, -i_rec - i_edd, i_sec, dt, p);

  // Energy accounting.
  w.e_wind_j += p_wind * dt;
  w.e_export_j += p_export * dt;
  const double i_line_mid = 0.5 * (i_line_before + w.link.i_line_a);
  w.e_loss_j += i_line_mid * i_line_mid * p.dc_line_resistance_ohm * dt;

  // (7) Invariant assertions (capacitor limits are enforced inside
  // capacitor_dynamics_step).
  const double v_on_pu_new = w.link.v_dc_onshore_v / p.dc_voltage_v;
  if (v_on_pu_new > p.dc_overvoltage_limit_pu) {
    std::ostringstream os;
    os << "DC overvoltage ceiling: v_dc = " << v_on_pu_new << " p.u. at t="
       << t;
    throw ProtectionError(os.str(), t);
  }
  if (w.link.v_dc_onshore_v <= 0 || w.link.v_dc_offshore_v <= 0)
    throw ProtectionError("DC link voltage collapse", t);

  // Budget window bookkeeping.
  if (sc.fault.kind != FaultKind::None) {
    if (!budget_open_ && t >= sc.fault.onset_s) open_budget();
    if (budget_open_ && !budget_closed_) {
      surplus_integral_j_ += (p_wind - p_export) * dt;
      if (t > cleared && std::abs(v_on_pu_new - 1.0) <= 0.02)
        close_budget(t);
    }
  }

  ++w.step_count;
  w.t_s = static_cast<double>(w.step_count) * dt;
}

Sample Engine::sample() const {
  const SystemParams& p = scenario_.params;
  const World& w = world_;
  GridParams grid{p.ac_base_voltage_v, p.grid_frequency_hz};
  const auto v_abc = grid_voltages(w.t_s, scenario_.fault, grid);

  Sample s;
  s.t_s = w.t_s;
  s.v_dc_onshore_v = w.link.v_dc_onshore_v;
  s.v_dc_onshore_pu = w.link.v_dc_onshore_v / p.dc_voltage_v;
  s.v_dc_offshore_v = w.link.v_dc_offshore_v;
  s.v_pcc_a_v = v_abc[0];
  s.v_pcc_b_v = v_abc[1];
  s.v_pcc_c_v = v_abc[2];
  s.p_wind_w = w.p_wind_w;
  s.p_export_w = w.p_export_w;
  s.surplus_w = w.p_wind_w - w.p_export_w;
  s.rec_cap_v = w.rec.cap_voltage_avg_v;
  s.rec_energy_j = w.rec.stored_energy_j(p);
  s.rec_energy_pu = w.rec.energy_pu(p);
  s.sec_cap_v = w.sec.cap_voltage_avg_v;
  s.sec_energy_j = w.sec.stored_energy_j(p);
  s.sec_energy_pu = w.sec.energy_pu(p);
  s.m_dc = w.m_dc;
  s.m_ac_mag = w.m_ac_mag;
  s.stage = static_cast<int>(w.stage);
  s.edd_duty = w.edd.duty;
  s.edd_power_w = w.edd.instantaneous_power_w;
  s.edd_energy_j = w.edd.cumulative_energy_j;
  s.i_line_a = w.link.i_line_a;
  s.i_d_a = w.rec.i_d_a;
  s.i_q_a = w.rec.i_q_a;
  s.owf_bus_v = w.owf_bus_mag_v;
  s.losses_j = w.e_loss_j;
  return s;
}

RunResult Engine::run(const Scenario& scenario) {
  Engine eng(scenario);
  RunResult res;
  FrtStage last_stage = FrtStage::Normal;
  res.log.events.push_back({0.0, last_stage});

  const std::uint64_t total = static_cast<std::uint64_t>(
      std::llround(scenario.t_end_s / scenario.dt_s));
  const int dec = std::max(1, scenario.log_decimation);

  auto record = [&]() {
    const Sample s = eng.sample();
    res.log.samples.push_back(s);
  };
  record();

  try {
    for (std::uint64_t k = 0; k < total; ++k) {
      eng.step();
      const World& w = eng.world();
      if (w.stage != last_stage) {
        last_stage = w.stage;
        res.log.events.push_back({w.t_s, last_stage});
      }
      res.peak_v_dc_pu = std::max(
          res.peak_v_dc_pu,
          w.link.v_dc_onshore_v / scenario.params.dc_voltage_v);
      res.rec_peak_energy_pu =
          std::max(res.rec_peak_energy_pu, w.rec.energy_pu(scenario.params));
      res.sec_peak_energy_pu =
          std::max(res.sec_peak_energy_pu, w.sec.energy_pu(scenario.params));
      if (w.step_count % static_cast<std::uint64_t>(dec) == 0) record();
    }
  } catch (const ProtectionError& e) {
    res.aborted = true;
    res.abort_reason = e.what();
    res.abort_t_s = eng.world().t_s;
    std::ostringstream os;
    const World& w = eng.world();
    os << "t=" << w.t_s << " v_dc_on=" << w.link.v_dc_onshore_v
       << " v_dc_off=" << w.link.v_dc_offshore_v
       << " rec_vc=" << w.rec.cap_voltage_avg_v
       << " sec_vc=" << w.sec.cap_voltage_avg_v
       << " stage=" << to_string(w.stage)
       << " edd_e=" << w.edd.cumulative_energy_j;
    res.abort_snapshot = os.str();
  }

  if (!eng.budget_closed_ && eng.budget_open_)
    eng.close_budget(eng.world().t_s);
  res.budget = eng.budget_;
  res.edd_total_j = eng.world().edd.cumulative_energy_j;
  return res;
}

std::string describe(const RunResult& r) {
  std::ostringstream os;
  os << "peak v_dc:      " << r.peak_v_dc_pu << " p.u.\n"
     << "REC peak energy: " << r.rec_peak_energy_pu << " p.u.\n"
     << "SEC peak energy: " << r.sec_peak_energy_pu << " p.u.\n"
     << "EDD energy:      " << r.edd_total_j / 1e6 << " MJ\n";
  if (r.aborted)
    os << "ABORTED: " << r.abort_reason << "\n  " << r.abort_snapshot << "\n";
  return os.str();
}

}  // namespace mmcfrt
