#include "fjmask/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fjmask/errors.hpp"

namespace fjmask {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

class SvgBuilder {
 public:
  SvgBuilder() {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
            "height=\"500\" viewBox=\"0 0 800 500\">\n";
    out_ << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke = "black", double width = 1.0) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
         << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "black") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
         << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill
         << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void text(double x, double y, const std::string& content,
            const std::string& anchor = "middle", int size = 12) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y)
         << "\" font-family=\"sans-serif\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << "\">" << content << "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke
         << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& [x, y] : pts) out_ << num(x) << "," << num(y) << " ";
    out_ << "\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

const char* kLineColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                             "#bcbd22", "#17becf"};

void draw_frame(SvgBuilder& svg, double x0, double y0, double x1, double y1) {
  svg.line(x0, y1, x1, y1);  // x axis
  svg.line(x0, y0, x0, y1);  // y axis
}

void draw_panel_trajectory(SvgBuilder& svg, const Trajectory& traj, double px0,
                           double py0, double px1, double py1,
                           const std::string& title) {
  const int steps = static_cast<int>(traj.states.size());
  const int n = static_cast<int>(traj.states.front().size());
  double lo = traj.states.front().minCoeff();
  double hi = traj.states.front().maxCoeff();
  for (const auto& x : traj.states) {
    lo = std::min(lo, x.minCoeff());
    hi = std::max(hi, x.maxCoeff());
  }
  if (hi == lo) hi = lo + 1.0;
  const double span = hi - lo;
  auto map_x = [&](int t) {
    return steps > 1
               ? px0 + (px1 - px0) * static_cast<double>(t) / (steps - 1)
               : (px0 + px1) / 2.0;
  };
  auto map_y = [&](double v) {
    return py1 - (py1 - py0) * (v - lo) / span;
  };
  draw_frame(svg, px0, py0, px1, py1);
  svg.text((px0 + px1) / 2.0, py0 - 6.0, title);
  svg.text(px0 - 8.0, py1 + 4.0, label(lo), "end", 10);
  svg.text(px0 - 8.0, py0 + 4.0, label(hi), "end", 10);
  svg.text(px1, py1 + 16.0, "t=" + std::to_string(steps - 1), "end", 10);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(steps);
    for (int t = 0; t < steps; ++t)
      pts.emplace_back(map_x(t), map_y(traj.states[t](i)));
    svg.polyline(pts, kLineColors[i % 10]);
  }
}

}  // namespace

std::string render_box_plot(const std::vector<ValueSummary>& summary) {
  if (summary.empty()) throw ParameterError("no summary rows to plot");
  SvgBuilder svg;
  const double x0 = 70.0, x1 = kWidth - 30.0;
  const double y0 = 40.0, y1 = kHeight - 50.0;
  double hi = 0.0;
  for (const auto& s : summary) hi = std::max(hi, s.max);
  if (hi <= 0.0) hi = 1.0;
  auto map_y = [&](double v) { return y1 - (y1 - y0) * v / hi; };
  draw_frame(svg, x0, y0, x1, y1);
  svg.text(x0 - 8.0, y0 + 4.0, label(hi), "end", 10);
  svg.text(x0 - 8.0, y1 + 4.0, "0", "end", 10);
  svg.text(kWidth / 2.0, y0 - 18.0, "estimate error spread");
  const double slot = (x1 - x0) / static_cast<double>(summary.size());
  for (std::size_t k = 0; k < summary.size(); ++k) {
    const auto& s = summary[k];
    const double cx = x0 + slot * (static_cast<double>(k) + 0.5);
    const double bw = std::min(40.0, slot * 0.5);
    if (s.count - static_cast<int>(s.fraction_infinite * s.count) > 0) {
      svg.line(cx, map_y(s.min), cx, map_y(s.max));
      svg.line(cx - bw / 2.0, map_y(s.min), cx + bw / 2.0, map_y(s.min));
      svg.line(cx - bw / 2.0, map_y(s.max), cx + bw / 2.0, map_y(s.max));
      svg.rect(cx - bw / 2.0, map_y(s.q3), bw, map_y(s.q1) - map_y(s.q3),
               "#cfe2f3");
      svg.line(cx - bw / 2.0, map_y(s.median), cx + bw / 2.0, map_y(s.median),
               "black", 2.0);
    }
    svg.text(cx, y1 + 18.0, label(s.swept_value), "middle", 11);
  }
  return svg.finish();
}

std::string render_histogram(const std::vector<double>& errors, int bins) {
  if (bins < 1) throw ParameterError("histogram needs at least one bin");
  std::vector<double> finite;
  int infinite = 0;
  for (double e : errors) {
    if (std::isinf(e))
      ++infinite;
    else
      finite.push_back(e);
  }
  if (finite.empty()) throw ParameterError("no finite errors to plot");
  const double lo = 0.0;
  const double hi = std::max(*std::max_element(finite.begin(), finite.end()),
                             1e-12);
  std::vector<int> counts(bins, 0);
  for (double e : finite) {
    int b = static_cast<int>(std::floor((e - lo) / (hi - lo) * bins));
    b = std::clamp(b, 0, bins - 1);
    ++counts[b];
  }
  const int peak = *std::max_element(counts.begin(), counts.end());
  SvgBuilder svg;
  const double x0 = 70.0, x1 = kWidth - 30.0;
  const double y0 = 50.0, y1 = kHeight - 50.0;
  draw_frame(svg, x0, y0, x1, y1);
  svg.text(kWidth / 2.0, 28.0, "estimate error distribution");
  svg.text(kWidth / 2.0, 44.0,
           std::to_string(finite.size()) + " finite, " +
               std::to_string(infinite) + " infinite",
           "middle", 10);
  svg.text(x0 - 8.0, y1 + 4.0, label(lo), "end", 10);
  svg.text(x1, y1 + 16.0, label(hi), "end", 10);
  svg.text(x0 - 8.0, y0 + 4.0, std::to_string(peak), "end", 10);
  const double bw = (x1 - x0) / bins;
  for (int b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double h = (y1 - y0) * counts[b] / peak;
    svg.rect(x0 + b * bw, y1 - h, bw, h, "#cfe2f3");
  }
  return svg.finish();
}

std::string render_trajectory(const Trajectory& top, const Trajectory* bottom) {
  if (top.states.empty()) throw ParameterError("empty trajectory");
  SvgBuilder svg;
  const double x0 = 70.0, x1 = kWidth - 30.0;
  if (bottom == nullptr) {
    draw_panel_trajectory(svg, top, x0, 40.0, x1, kHeight - 50.0, "opinions");
  } else {
    if (bottom->states.empty()) throw ParameterError("empty trajectory");
    draw_panel_trajectory(svg, top, x0, 40.0, x1, 240.0, "without mask");
    draw_panel_trajectory(svg, *bottom, x0, 290.0, x1, kHeight - 20.0,
                          "with mask");
  }
  return svg.finish();
}

}  // namespace fjmask
