#include "taucert/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "taucert/set_spec.hpp"

namespace taucert {

namespace {

constexpr int kCanvas = 840;
constexpr int kMargin = 60;

// Fixed-format numbers keep repeated renders byte-identical.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Frame {
  double x0, y0, x1, y1;  // world window

  double sx(double x) const {
    return kMargin + (x - x0) / (x1 - x0) * (kCanvas - 2 * kMargin);
  }
  double sy(double y) const {
    return kCanvas - kMargin - (y - y0) / (y1 - y0) * (kCanvas - 2 * kMargin);
  }
};

class SvgWriter {
 public:
  SvgWriter() {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
        << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n"
        << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" fill=\"white\"/>\n";
  }

  void rect(const Frame& f, double x0, double y0, double x1, double y1,
            const std::string& style) {
    double a = f.sx(x0), b = f.sy(y1);
    os_ << "<rect x=\"" << fmt(a) << "\" y=\"" << fmt(b) << "\" width=\""
        << fmt(f.sx(x1) - a) << "\" height=\"" << fmt(f.sy(y0) - b) << "\" " << style
        << "/>\n";
  }

  void line(const Frame& f, double x0, double y0, double x1, double y1,
            const std::string& style) {
    os_ << "<line x1=\"" << fmt(f.sx(x0)) << "\" y1=\"" << fmt(f.sy(y0)) << "\" x2=\""
        << fmt(f.sx(x1)) << "\" y2=\"" << fmt(f.sy(y1)) << "\" " << style << "/>\n";
  }

  void polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts,
                const std::string& style) {
    os_ << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os_ << " ";
      os_ << fmt(f.sx(pts[i].first)) << "," << fmt(f.sy(pts[i].second));
    }
    os_ << "\"/>\n";
  }

  void circle(const Frame& f, double x, double y, double r, const std::string& style) {
    os_ << "<circle cx=\"" << fmt(f.sx(x)) << "\" cy=\"" << fmt(f.sy(y)) << "\" r=\""
        << fmt(r) << "\" " << style << "/>\n";
  }

  void text(const Frame& f, double x, double y, const std::string& s) {
    os_ << "<text x=\"" << fmt(f.sx(x)) << "\" y=\"" << fmt(f.sy(y))
        << "\" font-family=\"monospace\" font-size=\"13\">" << s << "</text>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
};

const char* kWindowStyle = "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"";
const char* kPinBoxStyle = "fill=\"none\" stroke=\"purple\" stroke-width=\"1.2\"";
const char* kSetStyle = "fill=\"steelblue\"";
const char* kCurveLoStyle = "stroke=\"crimson\" stroke-width=\"1.2\"";
const char* kCurveHiStyle = "stroke=\"royalblue\" stroke-width=\"1.2\"";
const char* kWedgeStyle = "stroke=\"darkorange\" stroke-width=\"1\" stroke-dasharray=\"6,4\"";

void draw_axis_sets(SvgWriter& svg, const Frame& f, const StageSet& k1, const StageSet& k2) {
  double band = (f.y1 - f.y0) / 80.0;
  for (const auto& iv : k1.intervals()) {
    double w = rat_max(iv.width(), Rational(1, 100000)) == iv.width() ? to_double(iv.width())
                                                                      : 1e-5;
    svg.rect(f, to_double(iv.lo), f.y0, to_double(iv.lo) + w, f.y0 + band, kSetStyle);
  }
  double bandx = (f.x1 - f.x0) / 80.0;
  for (const auto& iv : k2.intervals()) {
    double w = rat_max(iv.width(), Rational(1, 100000)) == iv.width() ? to_double(iv.width())
                                                                      : 1e-5;
    svg.rect(f, f.x0, to_double(iv.lo), f.x0 + bandx, to_double(iv.lo) + w, kSetStyle);
  }
}

Frame frame_around(std::vector<std::pair<double, double>> pts) {
  double x0 = pts[0].first, x1 = pts[0].first, y0 = pts[0].second, y1 = pts[0].second;
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  double padx = std::max(1e-6, (x1 - x0) * 0.15);
  double pady = std::max(1e-6, (y1 - y0) * 0.15);
  return Frame{x0 - padx, y0 - pady, x1 + padx, y1 + pady};
}

std::vector<std::pair<double, double>> sample_curve(const PhiSpec& phi,
                                                    const RationalPoint& pin, double t,
                                                    double z0, double z1) {
  std::vector<std::pair<double, double>> pts;
  double px = to_double(pin.x), py = to_double(pin.y);
  for (int i = 0; i <= 128; ++i) {
    double z = z0 + (z1 - z0) * i / 128.0;
    double y;
    switch (phi.kind) {
      case PhiSpec::Kind::euclidean: {
        double rad = t * t - (z - px) * (z - px);
        if (rad < 0) continue;
        y = py + std::sqrt(rad);
        break;
      }
      case PhiSpec::Kind::dot:
        y = t / py - px / py * z;
        break;
      case PhiSpec::Kind::pnorm: {
        double p = to_double(phi.p);
        double rad = std::pow(t, p) - std::pow(std::abs(z - px), p);
        if (rad < 0) continue;
        y = py + std::pow(rad, 1.0 / p);
        break;
      }
    }
    pts.push_back({z, y});
  }
  return pts;
}

void draw_pin_payload(SvgWriter& svg, const Frame& f, const PhiSpec& phi,
                      const RationalPoint& pin, const Box2& pin_box,
                      const ClosedInterval& t_window, const Box2& window_box, bool wedge) {
  svg.rect(f, to_double(window_box.x.lo), to_double(window_box.y.lo),
           to_double(window_box.x.hi), to_double(window_box.y.hi), kWindowStyle);
  svg.rect(f, to_double(pin_box.x.lo), to_double(pin_box.y.lo), to_double(pin_box.x.hi),
           to_double(pin_box.y.hi), kPinBoxStyle);
  svg.circle(f, to_double(pin.x), to_double(pin.y), 3.0, "fill=\"black\"");

  double z0 = to_double(window_box.x.lo) - 0.25 * (f.x1 - f.x0);
  double z1 = to_double(window_box.x.hi) + 0.25 * (f.x1 - f.x0);
  svg.polyline(f, sample_curve(phi, pin, to_double(t_window.lo), z0, z1), kCurveLoStyle);
  svg.polyline(f, sample_curve(phi, pin, to_double(t_window.hi), z0, z1), kCurveHiStyle);

  if (wedge) {
    // boundary rays of W_pin: y = pin_y + (x - pin_x) and y = pin_y + (x - pin_x)/3
    double px = to_double(pin.x), py = to_double(pin.y);
    svg.line(f, px, py, f.x1, py + (f.x1 - px), kWedgeStyle);
    svg.line(f, px, py, f.x1, py + (f.x1 - px) / 3.0, kWedgeStyle);
  }
}

}  // namespace

std::string render_svg(const PinCertificate& cert) {
  StageSet k1 = restrict(build(parse_set_spec(cert.set1_desc)), cert.window1());
  StageSet k2 = restrict(build(parse_set_spec(cert.set2_desc)), cert.window2());
  Box2 window_box{k1.hull(), k2.hull()};
  Box2 S = cert.pin_box();

  Frame f = frame_around({{to_double(S.x.lo), to_double(S.y.lo)},
                          {to_double(window_box.x.hi), to_double(window_box.y.hi)},
                          {to_double(window_box.x.lo), to_double(window_box.y.lo)},
                          {to_double(cert.pin.x), to_double(cert.pin.y)}});
  SvgWriter svg;
  draw_axis_sets(svg, f, k1, k2);
  draw_pin_payload(svg, f, cert.phi, cert.pin, S, cert.t_window, window_box, cert.wedge);
  svg.text(f, f.x0 + (f.x1 - f.x0) * 0.02, f.y1 - (f.y1 - f.y0) * 0.04,
           cert.engine + " pin certificate, T=[" + to_string(cert.t_window.lo) + ", " +
               to_string(cert.t_window.hi) + "]");
  return svg.finish();
}

std::string render_svg(const DotPinCertificate& cert) {
  StageSet k1 = build(parse_set_spec(cert.set1_desc));
  StageSet k2 = build(parse_set_spec(cert.set2_desc));
  Box2 window_box{k1.hull(), k2.hull()};
  Box2 S = cert.pin_box();
  Frame f = frame_around({{to_double(S.x.lo), to_double(S.y.lo)},
                          {to_double(S.x.hi), to_double(S.y.hi)},
                          {to_double(window_box.x.lo), to_double(window_box.y.lo)},
                          {to_double(window_box.x.hi), to_double(window_box.y.hi)}});
  SvgWriter svg;
  draw_axis_sets(svg, f, k1, k2);
  draw_pin_payload(svg, f, PhiSpec::dot(), cert.pin, S, cert.t_window, window_box, false);
  svg.text(f, f.x0 + (f.x1 - f.x0) * 0.02, f.y1 - (f.y1 - f.y0) * 0.04,
           "dot pin certificate, T=(" + to_string(cert.t_window.lo) + ", " +
               to_string(cert.t_window.hi) + ")");
  return svg.finish();
}

std::string render_svg(const TreeCertificate& cert) {
  std::vector<std::pair<double, double>> anchors;
  for (const auto& p : cert.skeleton.points)
    anchors.push_back({to_double(p.x), to_double(p.y)});
  Frame f = frame_around(anchors);
  SvgWriter svg;

  StageSet k1 = build(parse_set_spec(cert.set1_desc));
  StageSet k2 = build(parse_set_spec(cert.set2_desc));
  draw_axis_sets(svg, f, k1, k2);

  // skeleton edges, points, and per-vertex boxes
  for (const auto& [a, b] : cert.tree.edges) {
    const auto& pa = cert.skeleton.points[a - 1];
    const auto& pb = cert.skeleton.points[b - 1];
    svg.line(f, to_double(pa.x), to_double(pa.y), to_double(pb.x), to_double(pb.y),
             "stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
  }
  for (std::size_t v = 1; v <= cert.tree.vertex_count; ++v) {
    Box2 box = cert.vertex_box(v);
    svg.rect(f, to_double(box.x.lo), to_double(box.y.lo), to_double(box.x.hi),
             to_double(box.y.hi), kWindowStyle);
    const auto& p = cert.skeleton.points[v - 1];
    svg.circle(f, to_double(p.x), to_double(p.y), 2.5, "fill=\"black\"");
  }

  // wedge rays from every pin of the middle-thirds engine
  if (cert.engine == "middle-thirds") {
    for (const auto& step : cert.steps) {
      const auto& p = cert.skeleton.points[step.neighbor - 1];
      double px = to_double(p.x), py = to_double(p.y);
      svg.line(f, px, py, f.x1, py + (f.x1 - px), kWedgeStyle);
      svg.line(f, px, py, f.x1, py + (f.x1 - px) / 3.0, kWedgeStyle);
    }
  }

  svg.text(f, f.x0 + (f.x1 - f.x0) * 0.02, f.y1 - (f.y1 - f.y0) * 0.04,
           cert.engine + " tree certificate, " + std::to_string(cert.tree.edge_count()) +
               " edges, scope " + cert.scope);
  return svg.finish();
}

std::string render_svg(const CertificateFile& file) {
  if (const auto* pin = std::get_if<PinCertificate>(&file.payload)) return render_svg(*pin);
  if (const auto* dot = std::get_if<DotPinCertificate>(&file.payload)) return render_svg(*dot);
  return render_svg(std::get<TreeCertificate>(file.payload));
}

}  // namespace taucert
