#include "mmcfrt/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mmcfrt {

namespace {
const char* kHeader =
    "t_s,v_dc_onshore_pu,v_dc_onshore_v,v_dc_offshore_v,"
    "v_pcc_a_v,v_pcc_b_v,v_pcc_c_v,p_wind_w,p_export_w,surplus_w,"
    "rec_cap_v,rec_energy_j,rec_energy_pu,sec_cap_v,sec_energy_j,"
    "sec_energy_pu,m_dc,m_ac_mag,stage,edd_duty,edd_power_w,edd_energy_j,"
    "i_line_a,i_d_a,i_q_a,owf_bus_v,losses_j";
}

std::string timeseries_csv(const TimeSeriesLog& log) {
  std::ostringstream os;
  os.precision(12);
  os << kHeader << "\n";
  for (const Sample& s : log.samples) {
    os << s.t_s << ',' << s.v_dc_onshore_pu << ',' << s.v_dc_onshore_v << ','
       << s.v_dc_offshore_v << ',' << s.v_pcc_a_v << ',' << s.v_pcc_b_v << ','
       << s.v_pcc_c_v << ',' << s.p_wind_w << ',' << s.p_export_w << ','
       << s.surplus_w << ',' << s.rec_cap_v << ',' << s.rec_energy_j << ','
       << s.rec_energy_pu << ',' << s.sec_cap_v << ',' << s.sec_energy_j << ','
       << s.sec_energy_pu << ',' << s.m_dc << ',' << s.m_ac_mag << ','
       << s.stage << ',' << s.edd_duty << ',' << s.edd_power_w << ','
       << s.edd_energy_j << ',' << s.i_line_a << ',' << s.i_d_a << ','
       << s.i_q_a << ',' << s.owf_bus_v << ',' << s.losses_j << "\n";
  }
  return os.str();
}

void write_timeseries_csv(const TimeSeriesLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << timeseries_csv(log);
}

TimeSeriesLog read_timeseries_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  TimeSeriesLog log;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + path);
  if (line != kHeader) throw std::runtime_error("unexpected CSV header");
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> v;
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 27) throw std::runtime_error("bad CSV row");
    Sample s;
    int i = 0;
    s.t_s = v[i++]; s.v_dc_onshore_pu = v[i++]; s.v_dc_onshore_v = v[i++];
    s.v_dc_offshore_v = v[i++]; s.v_pcc_a_v = v[i++]; s.v_pcc_b_v = v[i++];
    s.v_pcc_c_v = v[i++]; s.p_wind_w = v[i++]; s.p_export_w = v[i++];
    s.surplus_w = v[i++]; s.rec_cap_v = v[i++]; s.rec_energy_j = v[i++];
    s.rec_energy_pu = v[i++]; s.sec_cap_v = v[i++]; s.sec_energy_j = v[i++];
    s.sec_energy_pu = v[i++]; s.m_dc = v[i++]; s.m_ac_mag = v[i++];
    s.stage = static_cast<int>(v[i++]); s.edd_duty = v[i++];
    s.edd_power_w = v[i++]; s.edd_energy_j = v[i++]; s.i_line_a = v[i++];
    s.i_d_a = v[i++]; s.i_q_a = v[i++]; s.owf_bus_v = v[i++];
    s.losses_j = v[i++];
    log.samples.push_back(s);
  }
  return log;
}

std::string budget_report(const EnergyBudget& b, const RunResult& r) {
  std::ostringstream os;
  os.precision(6);
  auto mj = [](double j) { return j / 1e6; };
  os << "Energy budget over [" << b.t0_s << ", " << b.t1_s << "] s\n"
     << "  surplus integral   " << mj(b.surplus_integral_j) << " MJ\n"
     << "  delta E REC        " << mj(b.delta_e_rec_j) << " MJ\n"
     << "  delta E SEC        " << mj(b.delta_e_sec_j) << " MJ\n"
     << "  delta E DC link    " << mj(b.delta_e_dclink_j) << " MJ\n"
     << "  EDD dissipated     " << mj(b.edd_energy_j) << " MJ\n"
     << "  series losses      " << mj(b.losses_j) << " MJ\n"
     << "  closure residual   " << mj(b.closure_residual_j) << " MJ\n"
     << "Run summary\n"
     << "  peak v_dc          " << r.peak_v_dc_pu << " p.u.\n"
     << "  REC peak energy    " << r.rec_peak_energy_pu << " p.u.\n"
     << "  SEC peak energy    " << r.sec_peak_energy_pu << " p.u.\n"
     << "  EDD total          " << mj(r.edd_total_j) << " MJ\n";
  if (r.aborted)
    os << "  ABORTED at t=" << r.abort_t_s << ": " << r.abort_reason << "\n"
       << "  " << r.abort_snapshot << "\n";
  return os.str();
}

}  // namespace mmcfrt
