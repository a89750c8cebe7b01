#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "steinhaus/sumset_grid.hpp"

namespace steinhaus::svg {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string escape(const std::string& s) {
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

// World window [xmin, xmax] x [ymin, ymax] drawn with y up.
class Canvas {
 public:
  Canvas(double xmin, double ymin, double xmax, double ymax, double width = 600.0, double margin = 20.0)
      : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax), margin_(margin) {
    const double w = std::max(xmax - xmin, 1e-300), h = std::max(ymax - ymin, 1e-300);
    scale_ = width / std::max(w, h);
    width_ = w * scale_ + 2 * margin;
    height_ = h * scale_ + 2 * margin;
  }

  double px(double x) const { return margin_ + (x - xmin_) * scale_; }
  double py(double y) const { return margin_ + (ymax_ - y) * scale_; }
  double len(double d) const { return d * scale_; }

  void polyline(const std::vector<Vec>& pts, const std::string& stroke, double width = 1.0) {
    if (pts.empty()) return;
    std::string p;
    for (const auto& v : pts) p += (p.empty() ? "" : " ") + num(px(v[0])) + "," + num(py(v[1]));
    body_ += "<polyline points=\"" + p + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(width) + "\"/>\n";
  }

  void circle(const Vec& c, double r, const std::string& stroke, const std::string& fill = "none") {
    body_ += "<circle cx=\"" + num(px(c[0])) + "\" cy=\"" + num(py(c[1])) + "\" r=\"" + num(std::max(len(r), 0.75)) +
             "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
  }

  void dot(const Vec& c, const std::string& fill, double r_px = 2.0) {
    body_ += "<circle cx=\"" + num(px(c[0])) + "\" cy=\"" + num(py(c[1])) + "\" r=\"" + num(r_px) + "\" fill=\"" +
             fill + "\"/>\n";
  }

  // Occupied cells of a 2D grid, one rectangle per horizontal run.
  void cells(const GridSet& g, const std::string& fill) {
    if (g.dim() != 2) return;
    const double h = g.h();
    for (auto y = g.lo()[1]; y < g.lo()[1] + g.dims()[1]; ++y) {
      for (auto x = g.lo()[0]; x < g.lo()[0] + g.dims()[0];) {
        if (!g.test({x, y, 0})) {
          ++x;
          continue;
        }
        auto start = x;
        while (x < g.lo()[0] + g.dims()[0] && g.test({x, y, 0})) ++x;
        const double x0 = (static_cast<double>(start) - 0.5) * h, x1 = (static_cast<double>(x) - 0.5) * h;
        const double y1 = (static_cast<double>(y) + 0.5) * h;
        body_ += "<rect x=\"" + num(px(x0)) + "\" y=\"" + num(py(y1)) + "\" width=\"" + num(len(x1 - x0)) +
                 "\" height=\"" + num(len(h)) + "\" fill=\"" + fill + "\"/>\n";
      }
    }
  }

  void text(double x_px, double y_px, const std::string& s, int size = 12) {
    body_ += "<text x=\"" + num(x_px) + "\" y=\"" + num(y_px) + "\" font-family=\"sans-serif\" font-size=\"" +
             std::to_string(size) + "\">" + escape(s) + "</text>\n";
  }

  void raw(const std::string& s) { body_ += s; }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  double xmin_, ymin_, xmax_, ymax_, margin_;
  double scale_ = 1.0, width_ = 0.0, height_ = 0.0;
  std::string body_;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Line chart with linear axes and tick labels at the data range ends.
inline std::string line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                              const std::vector<Series>& series) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x), xmax = std::max(xmax, x);
      ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
  if (xmin > xmax) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  ymin = std::min(ymin, 0.0);
  if (ymax == ymin) ymax = ymin + 1;
  const double W = 480, H = 320, L = 70, T = 40;
  auto X = [&](double x) { return L + (x - xmin) / (xmax - xmin) * W; };
  auto Y = [&](double y) { return T + (ymax - y) / (ymax - ymin) * H; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::string b;
  b += "<line x1=\"" + num(L) + "\" y1=\"" + num(T + H) + "\" x2=\"" + num(L + W) + "\" y2=\"" + num(T + H) +
       "\" stroke=\"black\"/>\n";
  b += "<line x1=\"" + num(L) + "\" y1=\"" + num(T) + "\" x2=\"" + num(L) + "\" y2=\"" + num(T + H) +
       "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& s, const char* anchor) {
    b += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" +
         anchor + "\">" + escape(s) + "</text>\n";
  };
  label(L, T + H + 16, num(xmin), "middle");
  label(L + W, T + H + 16, num(xmax), "middle");
  label(L - 6, T + H + 4, num(ymin), "end");
  label(L - 6, T + 4, num(ymax), "end");
  label(L + W / 2, T + H + 34, xlabel, "middle");
  label(L - 50, T - 10, ylabel, "start");
  label(L + W / 2, T - 20, title, "middle");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* c = colors[i % 5];
    std::string pts;
    for (auto [x, y] : series[i].points) {
      pts += (pts.empty() ? "" : " ") + num(X(x)) + "," + num(Y(y));
      b += "<circle cx=\"" + num(X(x)) + "\" cy=\"" + num(Y(y)) + "\" r=\"2.5\" fill=\"" + c + "\"/>\n";
    }
    b += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + c + "\"/>\n";
    label(L + W - 4, T + 14 + 14 * static_cast<double>(i), series[i].name, "end");
  }
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(W + L + 30) + "\" height=\"" + num(H + T + 50) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         b + "</svg>\n";
}

}  // namespace steinhaus::svg
