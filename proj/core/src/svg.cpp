#include "mmcfrt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <functional>
#include <sstream>
#include <vector>

namespace mmcfrt {

namespace {

struct Series {
  std::string label;
  std::string color;
  std::function<double(const Sample&)> get;
};

struct Panel {
  std::string title;
  std::string unit;
  std::vector<Series> series;
};

void fmt(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  os << buf;
}

void draw_panel(std::ostringstream& os, const Panel& p,
                const TimeSeriesLog& log, double x0, double y0, double w,
                double h) {
  const auto& ss = log.samples;
  double tmin = ss.front().t_s, tmax = ss.back().t_s;
  double vmin = 1e300, vmax = -1e300;
  for (const auto& s : ss)
    for (const auto& sr : p.series) {
      const double v = sr.get(s);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  if (vmax - vmin < 1e-12) {
    vmax += 1.0;
    vmin -= 1.0;
  }
  const double pad = 0.06 * (vmax - vmin);
  vmin -= pad;
  vmax += pad;

  auto X = [&](double t) { return x0 + (t - tmin) / (tmax - tmin) * w; };
  auto Y = [&](double v) { return y0 + h - (v - vmin) / (vmax - vmin) * h; };

  os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w
     << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + 14
     << "\" font-size=\"12\" font-family=\"sans-serif\">" << p.title
     << "</text>\n";
  // y-axis extremes
  os << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + 26
     << "\" font-size=\"9\" fill=\"#555\" font-family=\"sans-serif\">max ";
  fmt(os, vmax);
  os << " " << p.unit << "</text>\n";
  os << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + h - 4
     << "\" font-size=\"9\" fill=\"#555\" font-family=\"sans-serif\">min ";
  fmt(os, vmin);
  os << " " << p.unit << "</text>\n";

  // Decimate to at most ~2000 points per series to keep files small.
  const size_t stride = std::max<size_t>(1, ss.size() / 2000);
  for (const auto& sr : p.series) {
    os << "<polyline fill=\"none\" stroke=\"" << sr.color
       << "\" stroke-width=\"1\" points=\"";
    for (size_t i = 0; i < ss.size(); i += stride) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", X(ss[i].t_s),
                    Y(sr.get(ss[i])));
      os << buf;
    }
    // always include the final sample
    {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f", X(ss.back().t_s),
                    Y(sr.get(ss.back())));
      os << buf;
    }
    os << "\"/>\n";
  }
}

}  // namespace

std::string panels_svg(const TimeSeriesLog& log) {
  std::ostringstream os;
  const double W = 1000, H = 900, pw = 460, ph = 260, gx = 30, gy = 30;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  if (log.samples.empty()) {
    os << "</svg>\n";
    return os.str();
  }

  const std::vector<Panel> panels = {
      {"(a) DC-link voltage", "p.u.",
       {{"vdc", "#1f77b4", [](const Sample& s) { return s.v_dc_onshore_pu; }}}},
      {"(b) Grid-side AC voltages", "V",
       {{"va", "#1f77b4", [](const Sample& s) { return s.v_pcc_a_v; }},
        {"vb", "#ff7f0e", [](const Sample& s) { return s.v_pcc_b_v; }},
        {"vc", "#2ca02c", [](const Sample& s) { return s.v_pcc_c_v; }}}},
      {"(c) Wind-side AC voltage", "V",
       {{"vbus", "#1f77b4", [](const Sample& s) { return s.owf_bus_v; }}}},
      {"(d) Active power", "MW",
       {{"wind", "#1f77b4", [](const Sample& s) { return s.p_wind_w / 1e6; }},
        {"export", "#d62728",
         [](const Sample& s) { return s.p_export_w / 1e6; }}}},
      {"(e) MMC energy", "p.u.",
       {{"REC", "#d62728", [](const Sample& s) { return s.rec_energy_pu; }},
        {"SEC", "#1f77b4", [](const Sample& s) { return s.sec_energy_pu; }}}},
      {"(f) Energy dissipated in EDD", "MJ",
       {{"edd", "#9467bd",
         [](const Sample& s) { return s.edd_energy_j / 1e6; }}}},
  };

  for (size_t i = 0; i < panels.size(); ++i) {
    const double x0 = gx + (i % 2) * (pw + gx);
    const double y0 = gy + (i / 2) * (ph + gy);
    draw_panel(os, panels[i], log, x0, y0, pw, ph);
  }
  os << "</svg>\n";
  return os.str();
}

void write_panels_svg(const TimeSeriesLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << panels_svg(log);
}

}  // namespace mmcfrt
