#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmcfrt/control.hpp"
#include "mmcfrt/edd.hpp"
#include "mmcfrt/energy_budget.hpp"
#include "mmcfrt/mmc.hpp"
#include "mmcfrt/network.hpp"
#include "mmcfrt/params.hpp"
#include "mmcfrt/wind.hpp"

namespace mmcfrt {

/// One complete experiment description. Immutable during a run; a batch of
/// runs may share one Scenario across threads.
struct Scenario {
  SystemParams params;
  ControlGains gains;
  FaultSpec fault;
  WindProfile wind;
  double t_end_s = 9.0;
  double dt_s = 50e-6;
  int log_decimation = 20;
  bool energy_control_enabled = true;
  bool edd_enabled = true;
  // SLG export capability reading used by the dynamics (see README):
  // true = phase-count (1/3 of rated for a bolted single-phase fault),
  // false = positive-sequence magnitude (2/3).
  bool use_phase_count_limit = true;
};

struct Sample {
  double t_s = 0;
  double v_dc_onshore_pu = 0;
  double v_dc_onshore_v = 0;
  double v_dc_offshore_v = 0;
  double v_pcc_a_v = 0, v_pcc_b_v = 0, v_pcc_c_v = 0;
  double p_wind_w = 0;
  double p_export_w = 0;
  double surplus_w = 0;
  double rec_cap_v = 0;
  double rec_energy_j = 0;
  double rec_energy_pu = 0;
  double sec_cap_v = 0;
  double sec_energy_j = 0;
  double sec_energy_pu = 0;
  double m_dc = 0;
  double m_ac_mag = 0;
  int stage = 0;
  double edd_duty = 0;
  double edd_power_w = 0;
  double edd_energy_j = 0;
  double i_line_a = 0;
  double i_d_a = 0, i_q_a = 0;
  double owf_bus_v = 0;
  double losses_j = 0;
};

struct StageEvent {
  double t_s = 0;
  FrtStage stage = FrtStage::Normal;
};

struct TimeSeriesLog {
  std::vector<Sample> samples;
  std::vector<StageEvent> events;
};

struct RunResult {
  TimeSeriesLog log;
  EnergyBudget budget;
  bool aborted = false;
  std::string abort_reason;
  double abort_t_s = 0;
  std::string abort_snapshot;

  // Summary over the whole run
  double peak_v_dc_pu = 0;
  double rec_peak_energy_pu = 0;
  double sec_peak_energy_pu = 0;
  double edd_total_j = 0;
};

/// Full plant + controller state advanced by the engine. Plain data; one
/// simulation owns one World.
struct World {
  double t_s = 0;
  std::uint64_t step_count = 0;

  MmcState rec;  // onshore
  MmcState sec;  // offshore
  DcLinkState link;

  PllState pll;
  OuterLoopState outer;
  InnerLoopState inner;
  VfState vf;
  EnergyControllerState energy_ctl;
  EddState edd;

  double owf_bus_mag_v = 0;      // offshore bus magnitude (first-order lag)
  double sec_divert_w = 0;       // lag-filtered diversion power
  DqPair v_pcc_filt{};           // positive-sequence estimate

  // Cumulative energy accounting since scenario start
  double e_wind_j = 0;
  double e_export_j = 0;
  double e_loss_j = 0;

  // Last computed per-step quantities (for logging)
  double p_wind_w = 0;
  double p_export_w = 0;
  double m_dc = 0.5;
  double m_ac_mag = 0;
  FrtStage stage = FrtStage::Normal;
};

class Engine {
 public:
  explicit Engine(const Scenario& scenario);

  /// Advances the world one fixed step. Throws ProtectionError on a hard
  /// invariant violation.
  void step();

  const World& world() const { return world_; }
  World& world() { return world_; }
  const Scenario& scenario() const { return scenario_; }

  Sample sample() const;

  /// Runs the scenario to t_end, logging and computing the energy budget.
  /// Aborts (result.aborted) on protection events instead of throwing.
  static RunResult run(const Scenario& scenario);

 private:
  Scenario scenario_;
  World world_;

  // Positive-sequence moving-average window over one half grid period.
  std::vector<DqPair> ma_buf_;
  size_t ma_pos_ = 0;
  DqPair ma_sum_{};

  // Budget window latches
  bool budget_open_ = false;
  bool budget_closed_ = false;
  EnergyBudget budget_;
  struct Snapshot {
    double e_rec_j = 0, e_sec_j = 0, e_link_j = 0, e_edd_j = 0;
    double e_loss_j = 0;
  };
  Snapshot at_t0_;
  double surplus_integral_j_ = 0;

  void open_budget();
  void close_budget(double t1);
  Snapshot snapshot() const;
  friend struct EngineTestAccess;
};

std::string describe(const RunResult& r);

}  // namespace mmcfrt
