#include "cpsim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cpsim {

namespace {

constexpr double kWidth = 920.0;
constexpr double kHeight = 430.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 18.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 48.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22"};
constexpr int kPaletteSize = 10;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;  // data range
  double p0 = 0.0, p1 = 1.0;  // pixel range

  double map(double v) const {
    if (hi == lo) return (p0 + p1) / 2.0;
    return p0 + (v - lo) / (hi - lo) * (p1 - p0);
  }
};

// Widens [lo, hi] slightly and picks a 1/2/5 tick step.
void nice_range(double& lo, double& hi, double& step) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  double span = hi - lo;
  double raw = span / 6.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double factor = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  step = factor * mag;
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;
}

struct Svg {
  std::string body;

  void raw(const std::string& s) { body += s; }

  void line(double x1, double y1, double x2, double y2, const std::string& style) {
    body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
            "\" y2=\"" + num(y2) + "\" " + style + "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& style) {
    body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
            "\" height=\"" + num(h) + "\" " + style + "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& style) {
    body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" " +
            style + "/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& style) {
    body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" " + style + ">" + xml_escape(s) +
            "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                bool dashed, double width = 1.6) {
    body += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) +
            "\"";
    if (dashed) body += " stroke-dasharray=\"5,3\"";
    body += " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body += ' ';
      body += num(pts[i].first) + "," + num(pts[i].second);
    }
    body += "\"/>\n";
  }

  std::string finish() const {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
        num(kWidth) + "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
        num(kHeight) + "\">\n<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" +
        num(kHeight) + "\" fill=\"#ffffff\"/>\n";
    out += body;
    out += "</svg>\n";
    return out;
  }
};

const char* kTextStyle = "font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\"";
const char* kTitleStyle = "font-family=\"sans-serif\" font-size=\"14\" fill=\"#111111\"";

void draw_frame_axes(Svg& svg, const Axis& x, const Axis& y, double xstep, double ystep,
                     const std::string& xlabel, const std::string& ylabel) {
  svg.line(kLeft, kTop, kLeft, kHeight - kBottom, "stroke=\"#444444\" stroke-width=\"1\"");
  svg.line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom,
           "stroke=\"#444444\" stroke-width=\"1\"");
  for (double v = x.lo; v <= x.hi + 1e-9; v += xstep) {
    double px = x.map(v);
    svg.line(px, kHeight - kBottom, px, kHeight - kBottom + 4, "stroke=\"#444444\"");
    svg.text(px - 8, kHeight - kBottom + 16, tick_label(v), kTextStyle);
  }
  for (double v = y.lo; v <= y.hi + 1e-9; v += ystep) {
    double py = y.map(v);
    svg.line(kLeft - 4, py, kLeft, py, "stroke=\"#444444\"");
    svg.line(kLeft, py, kWidth - kRight, py, "stroke=\"#eeeeee\" stroke-width=\"0.7\"");
    svg.text(kLeft - 46, py + 3.5, tick_label(v), kTextStyle);
  }
  svg.text((kLeft + kWidth - kRight) / 2 - 20, kHeight - 12, xlabel, kTextStyle);
  svg.text(10, kTop - 10, ylabel, kTextStyle);
}

struct MaskRun {
  unsigned bit;
  int a, b;  // inclusive step range
};

std::vector<MaskRun> mask_runs(const SimulationLog& log) {
  std::vector<MaskRun> runs;
  for (unsigned bit : {1u, 2u, 4u}) {
    int start = -1;
    for (size_t t = 0; t <= log.frames.size(); ++t) {
      bool on = t < log.frames.size() && (log.frames[t].attack_mask & bit);
      if (on && start < 0) start = static_cast<int>(t);
      if (!on && start >= 0) {
        runs.push_back({bit, start, static_cast<int>(t) - 1});
        start = -1;
      }
    }
  }
  return runs;
}

const char* mask_color(unsigned bit) {
  switch (bit) {
    case 1: return "#8a8a8a";
    case 2: return "#e8a33d";
    case 4: return "#d65c5c";
  }
  return "#cccccc";
}

const char* mask_name(unsigned bit) {
  switch (bit) {
    case 1: return "DoS";
    case 2: return "DoD";
    case 4: return "FDI";
  }
  return "?";
}

void draw_attack_spans(Svg& svg, const SimulationLog& log, const Axis& x) {
  for (const MaskRun& r : mask_runs(log)) {
    double x0 = x.map(std::max(r.a - 0.5, x.lo));
    double x1 = x.map(std::min(r.b + 0.5, x.hi));
    svg.rect(x0, kTop, x1 - x0, kHeight - kTop - kBottom,
             "class=\"attack-span\" fill=\"" + std::string(mask_color(r.bit)) +
                 "\" fill-opacity=\"0.16\"");
  }
}

void draw_legend(Svg& svg, const std::vector<std::pair<std::string, std::string>>& entries,
                 bool dashed_second_half = false) {
  double x = kLeft + 6;
  const double y = kTop + 6;
  size_t half = dashed_second_half ? entries.size() / 2 : entries.size();
  for (size_t i = 0; i < entries.size(); ++i) {
    bool dashed = i >= half;
    std::string style = "stroke=\"" + entries[i].second + "\" stroke-width=\"2\"";
    if (dashed) style += " stroke-dasharray=\"5,3\"";
    svg.line(x, y + 4, x + 18, y + 4, style);
    svg.text(x + 22, y + 8, entries[i].first, kTextStyle);
    x += 28 + 7.0 * entries[i].first.size() + 14;
  }
}

Axis time_axis(const SimulationLog& log) {
  Axis x;
  x.lo = 0.0;
  x.hi = static_cast<double>(log.frames.size() - 1);
  if (x.hi <= x.lo) x.hi = x.lo + 1.0;
  x.p0 = kLeft;
  x.p1 = kWidth - kRight;
  return x;
}

double time_tick_step(const SimulationLog& log) {
  double span = static_cast<double>(log.frames.size());
  double lo = 0.0, hi = span, step = 1.0;
  nice_range(lo, hi, step);
  return step;
}

Axis value_axis(double lo, double hi, double& step) {
  nice_range(lo, hi, step);
  Axis y;
  y.lo = lo;
  y.hi = hi;
  y.p0 = kHeight - kBottom;
  y.p1 = kTop;
  return y;
}

std::vector<int> bus_positions(const SimulationLog& log, const std::vector<int>& wanted) {
  std::vector<int> pos;
  const std::vector<int>& ids = log.bus_ids;
  if (wanted.empty()) {
    pos.resize(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) pos[i] = static_cast<int>(i);
    return pos;
  }
  for (int id : wanted) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw PlotError("unknown bus " + std::to_string(id));
    pos.push_back(static_cast<int>(it - ids.begin()));
  }
  return pos;
}

std::string heat_color(double u) {
  // #2166ac -> #f7f7f7 -> #b2182b
  auto lerp = [](int a, int b, double w) { return static_cast<int>(std::lround(a + (b - a) * w)); };
  int r, g, b;
  u = std::clamp(u, 0.0, 1.0);
  if (u < 0.5) {
    double w = u / 0.5;
    r = lerp(0x21, 0xf7, w);
    g = lerp(0x66, 0xf7, w);
    b = lerp(0xac, 0xf7, w);
  } else {
    double w = (u - 0.5) / 0.5;
    r = lerp(0xf7, 0xb2, w);
    g = lerp(0xf7, 0x18, w);
    b = lerp(0xf7, 0x2b, w);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void plot_title(Svg& svg, const std::string& fallback, const std::string& title) {
  svg.text(kLeft, 22, title.empty() ? fallback : title, kTitleStyle);
}

std::string render_voltages(const PlotRequest& req, const SimulationLog& log,
                            const SimulationLog* baseline) {
  std::vector<int> pos = bus_positions(log, req.buses);
  Svg svg;
  plot_title(svg, "Bus voltage magnitudes", req.title);

  double lo = 1e300, hi = -1e300;
  auto scan = [&](const SimulationLog& l) {
    for (const TelemetryFrame& f : l.frames)
      for (int p : pos) {
        lo = std::min(lo, f.vm_true[p]);
        hi = std::max(hi, f.vm_true[p]);
      }
  };
  scan(log);
  if (baseline) scan(*baseline);
  lo = std::min(lo, 0.94);
  hi = std::max(hi, 1.06);

  Axis x = time_axis(log);
  double ystep = 0.0;
  Axis y = value_axis(lo, hi, ystep);
  draw_attack_spans(svg, log, x);
  draw_frame_axes(svg, x, y, time_tick_step(log), ystep, "timestep", "vm (p.u.)");

  for (double band : {0.95, 1.05})
    svg.line(x.map(x.lo), y.map(band), x.map(x.hi), y.map(band),
             "class=\"band\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");

  std::vector<std::pair<std::string, std::string>> legend;
  for (size_t s = 0; s < pos.size(); ++s) {
    const std::string color = kPalette[s % kPaletteSize];
    std::vector<std::pair<double, double>> pts;
    for (const TelemetryFrame& f : log.frames)
      pts.push_back({x.map(f.t), y.map(f.vm_true[pos[s]])});
    svg.polyline(pts, color, false);
    legend.push_back({"bus " + std::to_string(log.bus_ids[pos[s]]), color});
  }
  if (baseline) {
    for (size_t s = 0; s < pos.size(); ++s) {
      std::vector<std::pair<double, double>> pts;
      for (const TelemetryFrame& f : baseline->frames)
        pts.push_back({x.map(f.t), y.map(f.vm_true[pos[s]])});
      svg.polyline(pts, kPalette[s % kPaletteSize], true, 1.1);
    }
  }
  draw_legend(svg, legend);
  return svg.finish();
}

std::string render_heatmap(const PlotRequest& req, const SimulationLog& log,
                           const SimulationLog* baseline) {
  const size_t nb = log.bus_ids.size();
  const size_t nt = log.frames.size();
  std::vector<double> grid(nb * nt);
  for (size_t t = 0; t < nt; ++t)
    for (size_t b = 0; b < nb; ++b)
      grid[b * nt + t] = baseline
                             ? log.frames[t].vm_true[b] - baseline->frames[t].vm_true[b]
                             : log.frames[t].vm_true[b];

  double lo = 1e300, hi = -1e300;
  for (double v : grid) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Svg svg;
  plot_title(svg, baseline ? "Voltage delta heatmap" : "Voltage heatmap", req.title);

  double u_lo = lo, u_hi = hi;
  if (baseline) {
    double mag = std::max(std::abs(lo), std::abs(hi));
    u_lo = -mag;
    u_hi = mag;
  }

  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kTop, y1 = kHeight - kBottom;
  const double cw = (x1 - x0) / static_cast<double>(nt);
  const double ch = (y1 - y0) / static_cast<double>(nb);
  for (size_t b = 0; b < nb; ++b) {
    for (size_t t = 0; t < nt; ++t) {
      double v = grid[b * nt + t];
      double u = u_hi == u_lo ? 0.5 : (v - u_lo) / (u_hi - u_lo);
      svg.rect(x0 + cw * static_cast<double>(t), y0 + ch * static_cast<double>(b), cw + 0.15,
               ch + 0.15, "fill=\"" + heat_color(u) + "\"");
    }
    if (nb <= 20)
      svg.text(kLeft - 34, y0 + ch * (static_cast<double>(b) + 0.68),
               std::to_string(log.bus_ids[b]), kTextStyle);
  }
  svg.text(10, kTop - 10, "bus", kTextStyle);
  svg.text((x0 + x1) / 2 - 20, kHeight - 12, "timestep", kTextStyle);
  svg.text(x1 - 190, kTop - 10,
           "range [" + tick_label(lo) + ", " + tick_label(hi) + "]" +
               (baseline ? " centered at 0" : ""),
           kTextStyle);
  return svg.finish();
}

std::string render_rms(const PlotRequest& req, const SimulationLog& log,
                       const SimulationLog* baseline) {
  std::vector<double> ra(log.frames.size());
  for (size_t t = 0; t < log.frames.size(); ++t) ra[t] = rms_deviation(log.frames[t].vm_true);
  std::vector<double> rb;
  if (baseline) {
    rb.resize(baseline->frames.size());
    for (size_t t = 0; t < rb.size(); ++t) rb[t] = rms_deviation(baseline->frames[t].vm_true);
  }

  double lo = 0.0, hi = 1e-300;
  for (double v : ra) hi = std::max(hi, v);
  for (double v : rb) hi = std::max(hi, v);

  Svg svg;
  plot_title(svg, "RMS voltage deviation", req.title);
  Axis x = time_axis(log);
  double ystep = 0.0;
  Axis y = value_axis(lo, hi, ystep);
  draw_attack_spans(svg, log, x);
  draw_frame_axes(svg, x, y, time_tick_step(log), ystep, "timestep", "rms dev (p.u.)");

  std::vector<std::pair<double, double>> pts;
  for (size_t t = 0; t < ra.size(); ++t) pts.push_back({x.map(static_cast<double>(t)), y.map(ra[t])});
  svg.polyline(pts, kPalette[0], false);
  std::vector<std::pair<std::string, std::string>> legend = {{"run", kPalette[0]}};
  if (baseline) {
    pts.clear();
    for (size_t t = 0; t < rb.size(); ++t)
      pts.push_back({x.map(static_cast<double>(t)), y.map(rb[t])});
    svg.polyline(pts, kPalette[1], true);
    legend.push_back({"baseline", kPalette[1]});
    for (size_t t = 0; t < std::min(ra.size(), rb.size()); ++t)
      if (std::abs(ra[t] - rb[t]) > req.tau)
        svg.circle(x.map(static_cast<double>(t)), y.map(ra[t]), 3.0,
                   "class=\"anomaly\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.4\"");
  }
  draw_legend(svg, legend);
  return svg.finish();
}

std::string render_timeline(const PlotRequest& req, const SimulationLog& log) {
  Svg svg;
  plot_title(svg, "Attack timeline", req.title);
  Axis x = time_axis(log);
  const double laneH = (kHeight - kTop - kBottom) / 3.0;
  unsigned bits[3] = {1, 2, 4};
  for (int lane = 0; lane < 3; ++lane) {
    double yTop = kTop + laneH * lane + 8;
    svg.text(kLeft - 46, yTop + laneH / 2 - 4, mask_name(bits[lane]), kTextStyle);
    svg.line(kLeft, kTop + laneH * (lane + 1), kWidth - kRight, kTop + laneH * (lane + 1),
             "stroke=\"#dddddd\" stroke-width=\"0.8\"");
  }
  for (const MaskRun& r : mask_runs(log)) {
    int lane = r.bit == 1 ? 0 : r.bit == 2 ? 1 : 2;
    double x0 = x.map(std::max(r.a - 0.5, x.lo));
    double x1 = x.map(std::min(r.b + 0.5, x.hi));
    svg.rect(x0, kTop + laneH * lane + 8, x1 - x0, laneH - 16,
             "class=\"attack-span\" fill=\"" + std::string(mask_color(r.bit)) +
                 "\" fill-opacity=\"0.75\"");
    svg.text((x0 + x1) / 2 - 22, kTop + laneH * lane + laneH / 2 + 4,
             "[" + std::to_string(r.a) + "," + std::to_string(r.b) + "]", kTextStyle);
  }
  svg.line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom,
           "stroke=\"#444444\" stroke-width=\"1\"");
  double step = time_tick_step(log);
  for (double v = 0; v <= x.hi + 1e-9; v += step) {
    svg.line(x.map(v), kHeight - kBottom, x.map(v), kHeight - kBottom + 4, "stroke=\"#444444\"");
    svg.text(x.map(v) - 8, kHeight - kBottom + 16, tick_label(v), kTextStyle);
  }
  svg.text((kLeft + kWidth - kRight) / 2 - 20, kHeight - 12, "timestep", kTextStyle);
  return svg.finish();
}

std::string render_balance(const PlotRequest& req, const SimulationLog& log) {
  Svg svg;
  plot_title(svg, "Power balance", req.title);
  double lo = 0.0, hi = -1e300;
  for (const TelemetryFrame& f : log.frames) {
    hi = std::max({hi, f.total_load_mw, f.total_gen_mw, f.losses_mw});
    lo = std::min({lo, f.total_load_mw, f.total_gen_mw, f.losses_mw});
  }
  Axis x = time_axis(log);
  double ystep = 0.0;
  Axis y = value_axis(lo, hi, ystep);
  draw_attack_spans(svg, log, x);
  draw_frame_axes(svg, x, y, time_tick_step(log), ystep, "timestep", "MW");

  const char* names[3] = {"total load", "total gen", "losses"};
  for (int s = 0; s < 3; ++s) {
    std::vector<std::pair<double, double>> pts;
    for (const TelemetryFrame& f : log.frames) {
      double v = s == 0 ? f.total_load_mw : s == 1 ? f.total_gen_mw : f.losses_mw;
      pts.push_back({x.map(f.t), y.map(v)});
    }
    svg.polyline(pts, kPalette[s], false);
  }
  draw_legend(svg, {{names[0], kPalette[0]}, {names[1], kPalette[1]}, {names[2], kPalette[2]}});
  return svg.finish();
}

std::string render_genpq(const PlotRequest& req, const SimulationLog& log) {
  Svg svg;
  plot_title(svg, "Generator outputs", req.title);
  double lo = 0.0, hi = -1e300;
  for (const TelemetryFrame& f : log.frames) {
    for (double v : f.pg) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : f.qg) { lo = std::min(lo, v); hi = std::max(hi, v); }
  }
  Axis x = time_axis(log);
  double ystep = 0.0;
  Axis y = value_axis(lo, hi, ystep);
  draw_attack_spans(svg, log, x);
  draw_frame_axes(svg, x, y, time_tick_step(log), ystep, "timestep", "MW / MVAr");

  std::vector<std::pair<std::string, std::string>> legend;
  for (int g = 0; g < log.n_gens; ++g) {
    const std::string color = kPalette[g % kPaletteSize];
    std::vector<std::pair<double, double>> pts;
    for (const TelemetryFrame& f : log.frames) pts.push_back({x.map(f.t), y.map(f.pg[g])});
    svg.polyline(pts, color, false);
    pts.clear();
    for (const TelemetryFrame& f : log.frames) pts.push_back({x.map(f.t), y.map(f.qg[g])});
    svg.polyline(pts, color, true, 1.1);
    legend.push_back({"G" + std::to_string(g + 1), color});
  }
  draw_legend(svg, legend);
  return svg.finish();
}

std::string render_switching(const PlotRequest& req, const SimulationLog& log,
                             const SimulationLog* baseline) {
  Svg svg;
  plot_title(svg, "PV to PQ switch events", req.title);
  double lo = 0.0, hi = 1.0;
  for (const TelemetryFrame& f : log.frames)
    hi = std::max(hi, static_cast<double>(f.pvpq_switch_count));
  if (baseline)
    for (const TelemetryFrame& f : baseline->frames)
      hi = std::max(hi, static_cast<double>(f.pvpq_switch_count));

  Axis x = time_axis(log);
  double ystep = 0.0;
  Axis y = value_axis(lo, hi, ystep);
  draw_attack_spans(svg, log, x);
  draw_frame_axes(svg, x, y, time_tick_step(log), ystep, "timestep", "conversions");

  auto steps = [&](const SimulationLog& l) {
    std::vector<std::pair<double, double>> pts;
    for (const TelemetryFrame& f : l.frames) {
      pts.push_back({x.map(f.t - 0.5), y.map(static_cast<double>(f.pvpq_switch_count))});
      pts.push_back({x.map(f.t + 0.5), y.map(static_cast<double>(f.pvpq_switch_count))});
    }
    return pts;
  };
  svg.polyline(steps(log), kPalette[0], false);
  std::vector<std::pair<std::string, std::string>> legend = {{"run", kPalette[0]}};
  if (baseline) {
    svg.polyline(steps(*baseline), kPalette[1], true);
    legend.push_back({"baseline", kPalette[1]});
  }
  draw_legend(svg, legend);
  return svg.finish();
}

}  // namespace

PlotKind plot_kind_from_name(const std::string& name) {
  if (name == "voltages") return PlotKind::Voltages;
  if (name == "heatmap") return PlotKind::Heatmap;
  if (name == "rms") return PlotKind::Rms;
  if (name == "timeline") return PlotKind::Timeline;
  if (name == "balance") return PlotKind::Balance;
  if (name == "genpq") return PlotKind::GenPQ;
  if (name == "switching") return PlotKind::Switching;
  throw PlotError("unknown plot kind \"" + name + "\"");
}

std::string render_plot(const PlotRequest& req, const SimulationLog& log,
                        const SimulationLog* baseline) {
  if (log.frames.empty()) throw PlotError("empty input: log has no frames");
  if (baseline) {
    if (baseline->frames.empty()) throw PlotError("empty input: baseline has no frames");
    if (baseline->frames.size() != log.frames.size() || baseline->bus_ids != log.bus_ids)
      throw PlotError("baseline shape does not match run");
  }
  switch (req.kind) {
    case PlotKind::Voltages: return render_voltages(req, log, baseline);
    case PlotKind::Heatmap: return render_heatmap(req, log, baseline);
    case PlotKind::Rms: return render_rms(req, log, baseline);
    case PlotKind::Timeline: return render_timeline(req, log);
    case PlotKind::Balance: return render_balance(req, log);
    case PlotKind::GenPQ: return render_genpq(req, log);
    case PlotKind::Switching: return render_switching(req, log, baseline);
  }
  throw PlotError("unknown plot kind");
}

}  // namespace cpsim
