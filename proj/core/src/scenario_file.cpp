#include "mmcfrt/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mmcfrt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + v + "'", line);
  }
}

int parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("invalid integer '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ParseError("invalid boolean '" + v + "'", line);
}

using Setter = std::function<void(Scenario&, const std::string&, int)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, double SystemParams::* f) {
      t[key] = [f](Scenario& sc, const std::string& v, int line) {
        sc.params.*f = parse_double(v, line);
      };
    };
    auto gain = [&t](const std::string& key, double ControlGains::* f) {
      t[key] = [f](Scenario& sc, const std::string& v, int line) {
        sc.gains.*f = parse_double(v, line);
      };
    };

    num("system.rated_power_w", &SystemParams::rated_power_w);
    num("system.dc_voltage_v", &SystemParams::dc_voltage_v);
    t["system.sm_per_arm"] = [](Scenario& sc, const std::string& v, int line) {
      sc.params.sm_per_arm = parse_int(v, line);
    };
    num("system.sm_capacitance_f", &SystemParams::sm_capacitance_f);
    num("system.sm_rated_voltage_v", &SystemParams::sm_rated_voltage_v);
    num("system.grid_frequency_hz", &SystemParams::grid_frequency_hz);
    num("system.arm_inductance_h", &SystemParams::arm_inductance_h);
    num("system.transformer_reactance_pu",
        &SystemParams::transformer_reactance_pu);
    num("system.ac_base_voltage_v", &SystemParams::ac_base_voltage_v);
    num("system.dc_link_capacitance_f", &SystemParams::dc_link_capacitance_f);
    num("system.dc_line_resistance_ohm", &SystemParams::dc_line_resistance_ohm);
    num("system.dc_line_inductance_h", &SystemParams::dc_line_inductance_h);
    num("system.cap_overvoltage_limit", &SystemParams::cap_overvoltage_limit);
    num("system.dc_overvoltage_limit_pu",
        &SystemParams::dc_overvoltage_limit_pu);

    num("edd.activation_pu", &SystemParams::edd_activation_pu);
    num("edd.rated_power_w", &SystemParams::edd_rated_power_w);
    t["edd.enabled"] = [](Scenario& sc, const std::string& v, int line) {
      sc.edd_enabled = parse_bool(v, line);
    };

    t["fault.kind"] = [](Scenario& sc, const std::string& v, int line) {
      if (v == "None") sc.fault.kind = FaultKind::None;
      else if (v == "SLG") sc.fault.kind = FaultKind::SLG;
      else if (v == "LLLG") sc.fault.kind = FaultKind::LLLG;
      else throw ParseError("invalid fault kind '" + v + "'", line);
    };
    t["fault.onset_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.fault.onset_s = parse_double(v, line);
    };
    t["fault.duration_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.fault.duration_s = parse_double(v, line);
    };
    t["fault.residual"] = [](Scenario& sc, const std::string& v, int line) {
      sc.fault.residual_factor = parse_double(v, line);
    };
    t["fault.phase"] = [](Scenario& sc, const std::string& v, int line) {
      const int ph = parse_int(v, line);
      if (ph < 0 || ph > 2) throw ParseError("fault phase must be 0..2", line);
      sc.fault.faulted_phase = ph;
    };

    t["owf.curtailment"] = [](Scenario& sc, const std::string& v, int line) {
      sc.wind.curtailment_enabled = parse_bool(v, line);
    };
    t["owf.comm_delay_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.wind.comm_delay_s = parse_double(v, line);
      sc.params.comm_delay_s = sc.wind.comm_delay_s;
    };
    t["owf.rampdown_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.wind.rampdown_s = parse_double(v, line);
      sc.params.turbine_rampdown_s = sc.wind.rampdown_s;
    };
    t["owf.recovery_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.wind.recovery_s = parse_double(v, line);
    };

    gain("control.pll_kp", &ControlGains::pll_kp);
    gain("control.pll_ki", &ControlGains::pll_ki);
    gain("control.outer_vdc_kp", &ControlGains::outer_vdc_kp);
    gain("control.outer_vdc_ki", &ControlGains::outer_vdc_ki);
    gain("control.outer_q_kp", &ControlGains::outer_q_kp);
    gain("control.outer_q_ki", &ControlGains::outer_q_ki);
    gain("control.current_limit_pu", &ControlGains::current_limit_pu);
    gain("control.inner_tau_s", &ControlGains::inner_tau_s);
    gain("control.series_resistance_pu", &ControlGains::series_resistance_pu);
    gain("control.vf_kp", &ControlGains::vf_kp);
    gain("control.vf_ki", &ControlGains::vf_ki);
    gain("control.storing_trigger_pu", &ControlGains::storing_trigger_pu);
    gain("control.storing_droop", &ControlGains::storing_droop);
    gain("control.storing_power_limit_pu",
         &ControlGains::storing_power_limit_pu);
    gain("control.rec_energy_ceiling_pu",
         &ControlGains::rec_energy_ceiling_pu);
    gain("control.storing_taper_pu", &ControlGains::storing_taper_pu);
    gain("control.recovery_tau_s", &ControlGains::recovery_tau_s);
    gain("control.command_lag_s", &ControlGains::command_lag_s);
    gain("control.sec_divert_threshold_pu",
         &ControlGains::sec_divert_threshold_pu);
    gain("control.sec_divert_droop", &ControlGains::sec_divert_droop);
    gain("control.sec_energy_ceiling_pu",
         &ControlGains::sec_energy_ceiling_pu);
    gain("control.sec_emergency_pu", &ControlGains::sec_emergency_pu);
    t["control.energy_control"] = [](Scenario& sc, const std::string& v,
                                     int line) {
      sc.energy_control_enabled = parse_bool(v, line);
    };

    t["sim.t_end_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.t_end_s = parse_double(v, line);
    };
    t["sim.dt_s"] = [](Scenario& sc, const std::string& v, int line) {
      sc.dt_s = parse_double(v, line);
      if (sc.dt_s <= 0) throw ParseError("dt_s must be positive", line);
    };
    t["sim.log_decimation"] = [](Scenario& sc, const std::string& v,
                                 int line) {
      sc.log_decimation = parse_int(v, line);
    };
    t["sim.slg_export_reading"] = [](Scenario& sc, const std::string& v,
                                     int line) {
      if (v == "phase_count") sc.use_phase_count_limit = true;
      else if (v == "positive_sequence") sc.use_phase_count_limit = false;
      else throw ParseError("invalid slg_export_reading '" + v + "'", line);
    };
    return t;
  }();
  return table;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  const auto& table = key_table();

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "fault" && section != "owf" &&
          section != "control" && section != "edd" && section != "sim")
        throw ParseError("unknown section '" + section + "'", line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no);
    if (section.empty())
      throw ParseError("key outside any section", line_no);
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    const auto it = table.find(key);
    if (it == table.end())
      throw ParseError("unknown key '" + key + "'", line_no);
    it->second(sc, value, line_no);
  }
  // Keep the analytic side consistent with the wind profile defaults when
  // the [owf] keys were absent.
  sc.params.comm_delay_s = sc.wind.comm_delay_s;
  sc.params.turbine_rampdown_s = sc.wind.rampdown_s;
  sc.wind.rated_power_w = sc.params.rated_power_w;
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

void apply_override(Scenario& sc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ParseError("override must be section.key=value", 0);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto it = key_table().find(key);
  if (it == key_table().end())
    throw ParseError("unknown key '" + key + "'", 0);
  it->second(sc, value, 0);
  sc.params.comm_delay_s = sc.wind.comm_delay_s;
  sc.params.turbine_rampdown_s = sc.wind.rampdown_s;
  sc.wind.rated_power_w = sc.params.rated_power_w;
}

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream os;
  os.precision(17);
  auto kv = [&os](const std::string& k, auto v) { os << k << " = " << v << "\n"; };
  auto kb = [&os](const std::string& k, bool v) {
    os << k << " = " << (v ? "true" : "false") << "\n";
  };

  os << "[system]\n";
  kv("rated_power_w", sc.params.rated_power_w);
  kv("dc_voltage_v", sc.params.dc_voltage_v);
  kv("sm_per_arm", sc.params.sm_per_arm);
  kv("sm_capacitance_f", sc.params.sm_capacitance_f);
  kv("sm_rated_voltage_v", sc.params.sm_rated_voltage_v);
  kv("grid_frequency_hz", sc.params.grid_frequency_hz);
  kv("arm_inductance_h", sc.params.arm_inductance_h);
  kv("transformer_reactance_pu", sc.params.transformer_reactance_pu);
  kv("ac_base_voltage_v", sc.params.ac_base_voltage_v);
  kv("dc_link_capacitance_f", sc.params.dc_link_capacitance_f);
  kv("dc_line_resistance_ohm", sc.params.dc_line_resistance_ohm);
  kv("dc_line_inductance_h", sc.params.dc_line_inductance_h);
  kv("cap_overvoltage_limit", sc.params.cap_overvoltage_limit);
  kv("dc_overvoltage_limit_pu", sc.params.dc_overvoltage_limit_pu);

  os << "\n[fault]\n";
  os << "kind = "
     << (sc.fault.kind == FaultKind::None
             ? "None"
             : sc.fault.kind == FaultKind::SLG ? "SLG" : "LLLG")
     << "\n";
  kv("onset_s", sc.fault.onset_s);
  kv("duration_s", sc.fault.duration_s);
  kv("residual", sc.fault.residual_factor);
  kv("phase", sc.fault.faulted_phase);

  os << "\n[owf]\n";
  kb("curtailment", sc.wind.curtailment_enabled);
  kv("comm_delay_s", sc.wind.comm_delay_s);
  kv("rampdown_s", sc.wind.rampdown_s);
  kv("recovery_s", sc.wind.recovery_s);

  os << "\n[control]\n";
  kb("energy_control", sc.energy_control_enabled);
  kv("pll_kp", sc.gains.pll_kp);
  kv("pll_ki", sc.gains.pll_ki);
  kv("outer_vdc_kp", sc.gains.outer_vdc_kp);
  kv("outer_vdc_ki", sc.gains.outer_vdc_ki);
  kv("outer_q_kp", sc.gains.outer_q_kp);
  kv("outer_q_ki", sc.gains.outer_q_ki);
  kv("current_limit_pu", sc.gains.current_limit_pu);
  kv("inner_tau_s", sc.gains.inner_tau_s);
  kv("series_resistance_pu", sc.gains.series_resistance_pu);
  kv("vf_kp", sc.gains.vf_kp);
  kv("vf_ki", sc.gains.vf_ki);
  kv("storing_trigger_pu", sc.gains.storing_trigger_pu);
  kv("storing_droop", sc.gains.storing_droop);
  kv("storing_power_limit_pu", sc.gains.storing_power_limit_pu);
  kv("rec_energy_ceiling_pu", sc.gains.rec_energy_ceiling_pu);
  kv("storing_taper_pu", sc.gains.storing_taper_pu);
  kv("recovery_tau_s", sc.gains.recovery_tau_s);
  kv("command_lag_s", sc.gains.command_lag_s);
  kv("sec_divert_threshold_pu", sc.gains.sec_divert_threshold_pu);
  kv("sec_divert_droop", sc.gains.sec_divert_droop);
  kv("sec_energy_ceiling_pu", sc.gains.sec_energy_ceiling_pu);
  kv("sec_emergency_pu", sc.gains.sec_emergency_pu);

  os << "\n[edd]\n";
  kb("enabled", sc.edd_enabled);
  kv("activation_pu", sc.params.edd_activation_pu);
  kv("rated_power_w", sc.params.edd_rated_power_w);

  os << "\n[sim]\n";
  kv("t_end_s", sc.t_end_s);
  kv("dt_s", sc.dt_s);
  kv("log_decimation", sc.log_decimation);
  os << "slg_export_reading = "
     << (sc.use_phase_count_limit ? "phase_count" : "positive_sequence")
     << "\n";
  return os.str();
}

}  // namespace mmcfrt
