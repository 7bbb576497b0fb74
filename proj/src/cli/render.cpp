#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "hammersley/cli.hpp"
#include "hammersley/geometry.hpp"

namespace hammersley::cli {
namespace {

struct Polyline {
  std::vector<Point2> pts;
  int sign = 0;
};

struct Scene {
  std::optional<std::vector<double>> domain;  // t0 t1 u_min u_max v_min v_max
  std::vector<Polyline> lines;
  std::vector<Polyline> paths;
  std::vector<Polyline> attractors;
};

[[noreturn]] void malformed(int line_no, const std::string& what) {
  throw ConfigError("line " + std::to_string(line_no) + ": " + what);
}

double number(std::istringstream& in, int line_no) {
  std::string tok;
  if (!(in >> tok)) malformed(line_no, "record ends early");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (*end != '\0' || !std::isfinite(v)) malformed(line_no, "not a finite number: '" + tok + "'");
  return v;
}

std::vector<Point2> vertices(std::istringstream& in, int line_no) {
  const double k = number(in, line_no);
  if (k < 0 || k != std::floor(k)) malformed(line_no, "bad vertex count");
  std::vector<Point2> pts;
  for (int i = 0; i < int(k); ++i) {
    const double t = number(in, line_no);
    pts.push_back({t, number(in, line_no)});
  }
  std::string extra;
  if (in >> extra) malformed(line_no, "trailing fields");
  return pts;
}

Scene read_scene(std::istream& is) {
  Scene s;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    if (kind == "DOMAIN") {
      if (s.domain) malformed(line_no, "second DOMAIN record");
      std::vector<double> d;
      for (int i = 0; i < 6; ++i) d.push_back(number(in, line_no));
      if (!(d[0] < d[1])) malformed(line_no, "empty time range");
      s.domain = d;
    } else if (kind == "LINE") {
      number(in, line_no);
      s.lines.push_back({vertices(in, line_no), 0});
    } else if (kind == "PATH") {
      number(in, line_no);
      std::string sign, end;
      in >> sign >> end;
      if (sign != "+" && sign != "-") malformed(line_no, "path sign must be + or -");
      if (end != "exited" && end != "annihilated" && end != "truncated") malformed(line_no, "unknown path end '" + end + "'");
      s.paths.push_back({vertices(in, line_no), sign == "+" ? 1 : -1});
    } else if (kind == "ATTRACTOR") {
      number(in, line_no);
      number(in, line_no);
      number(in, line_no);
      s.attractors.push_back({vertices(in, line_no), 0});
    } else {
      malformed(line_no, "unknown record '" + kind + "'");
    }
  }
  if (!s.domain) throw ConfigError("missing DOMAIN record");
  return s;
}

// Keeps the part of a polygon where a t + b x <= c.
std::vector<Point2> clip(const std::vector<Point2>& poly, double a, double b, double c) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const double fp = a * p.t + b * p.x - c;
    const double fq = a * q.t + b * q.x - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const double s = fp / (fp - fq);
      out.push_back({p.t + s * (q.t - p.t), p.x + s * (q.x - p.x)});
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(double t0, double t1, double x_lo, double x_hi, const RenderOptions& o)
      : t0_(t0), x_hi_(x_hi), m_(o.margin), s_((o.width - 2 * o.margin) / (t1 - t0)) {
    width_ = o.width;
    height_ = 2 * m_ + s_ * (x_hi - x_lo);
  }
  double width() const { return width_; }
  double height() const { return height_; }
  std::string sx(double t) const { return fmt(m_ + s_ * (t - t0_)); }
  std::string sy(double x) const { return fmt(m_ + s_ * (x_hi_ - x)); }
  std::string at(const Point2& p) const { return sx(p.t) + "," + sy(p.x); }
  std::string points(const std::vector<Point2>& pts) const {
    std::string out;
    for (const auto& p : pts) out += (out.empty() ? "" : " ") + at(p);
    return out;
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

 private:
  double t0_, x_hi_, m_, s_;
  double width_ = 0, height_ = 0;
};

}  // namespace

void render_svg(std::istream& in, std::ostream& out, const RenderOptions& o) {
  if (!(o.width > 2 * o.margin) || !(o.margin >= 0)) throw ConfigError("render: width must exceed twice the margin");
  const auto scene = read_scene(in);
  const auto& d = *scene.domain;
  const double t0 = d[0], t1 = d[1];
  const double x_lo = std::max((d[2] - d[5]) / 2, -(t1 - t0) * 4);
  const double x_hi = std::min((d[3] - d[4]) / 2, (t1 - t0) * 4);
  if (!(x_lo < x_hi)) throw ConfigError("DOMAIN record describes an empty region");
  std::vector<Point2> region{{t0, x_lo}, {t1, x_lo}, {t1, x_hi}, {t0, x_hi}};
  region = clip(region, -1, -1, -d[2]);  // u >= u_min
  region = clip(region, 1, 1, d[3]);     // u <= u_max
  region = clip(region, -1, 1, -d[4]);   // v >= v_min
  region = clip(region, 1, -1, d[5]);    // v <= v_max
  const Canvas c(t0, t1, x_lo, x_hi, o);

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Canvas::fmt(c.width()) << "\" height=\""
      << Canvas::fmt(c.height()) << "\" viewBox=\"0 0 " << Canvas::fmt(c.width()) << ' ' << Canvas::fmt(c.height())
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"domain\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\">\n";
  if (region.size() >= 3) out << "<polygon points=\"" << c.points(region) << "\"/>\n";
  out << "</g>\n";
  out << "<g id=\"axes\" stroke=\"#444444\" stroke-width=\"0.75\">\n";
  // The t-axis, and the x-direction at t0.
  out << "<line x1=\"" << c.sx(t0) << "\" y1=\"" << c.sy(0) << "\" x2=\"" << c.sx(t1) << "\" y2=\"" << c.sy(0) << "\"/>\n";
  out << "<line x1=\"" << c.sx(t0) << "\" y1=\"" << c.sy(x_hi) << "\" x2=\"" << c.sx(t0) << "\" y2=\"" << c.sy(x_lo)
      << "\"/>\n";
  out << "</g>\n";
  out << "<g id=\"attractors\" fill=\"#8fa3b8\" fill-opacity=\"0.35\" stroke=\"none\">\n";
  for (const auto& a : scene.attractors) {
    if (a.pts.size() >= 3) out << "<polygon points=\"" << c.points(a.pts) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g id=\"lines\" fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
  for (const auto& l : scene.lines) out << "<polyline points=\"" << c.points(l.pts) << "\"/>\n";
  out << "</g>\n";
  out << "<g id=\"paths\" fill=\"none\" stroke-width=\"2\">\n";
  for (const auto& p : scene.paths) {
    if (p.sign > 0) {
      out << "<polyline stroke=\"#c0392b\" points=\"" << c.points(p.pts) << "\"/>\n";
    } else {
      out << "<polyline stroke=\"#2c6fbb\" stroke-dasharray=\"6 3\" points=\"" << c.points(p.pts) << "\"/>\n";
    }
  }
  out << "</g>\n";
  // Axis points are the path origins.
  std::set<std::pair<double, double>> origins;
  for (const auto& p : scene.paths) {
    if (!p.pts.empty()) origins.insert({p.pts.front().t, p.pts.front().x});
  }
  out << "<g id=\"axis-points\" fill=\"#c0392b\">\n";
  for (const auto& [t, x] : origins) {
    out << "<circle cx=\"" << c.sx(t) << "\" cy=\"" << c.sy(x) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace hammersley::cli
