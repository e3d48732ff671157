#include "toricres/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace toricres {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string class_label(const DivisorClass& c) {
  std::string s = "O(";
  for (size_t i = 0; i < c.coeffs.size(); ++i) {
    if (i) s += ",";
    s += c.coeffs[i].get_str();
  }
  s += ")";
  return s;
}

const char* kPalette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                          "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};

}  // namespace

std::string render_svg(const ExitPathQuiver& q, const RenderOptions& opt) {
  size_t c = q.torus.codim;
  if (c > 2) throw std::invalid_argument("DIM_TOO_HIGH");
  double s = opt.scale;
  double margin = 48;
  double w = (c >= 1 ? s : s / 2) + 2 * margin;
  double h = (c == 2 ? s : s / 4) + 2 * margin;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
      << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
  out << "<!-- fundamental domain [0,1)^" << c << " -->\n";

  auto X = [&](double u) { return margin + u * s; };
  auto Y = [&](double v) { return c == 2 ? margin + (1.0 - v) * s : margin + s / 8; };

  if (c == 0) {
    out << "<circle cx=\"" << fmt(X(0.5)) << "\" cy=\"" << fmt(Y(0)) << "\" r=\"4\"/>\n";
    if (opt.cell_labels)
      out << "<text x=\"" << fmt(X(0.5) + 8) << "\" y=\"" << fmt(Y(0)) << "\" font-size=\"12\">"
          << class_label(q.strata[0].bundle) << "</text>\n";
    out << "</svg>\n";
    return out.str();
  }

  // domain outline; endpoint identification marks in one dimension
  if (c == 1) {
    out << "<line x1=\"" << fmt(X(0)) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\"" << fmt(X(1))
        << "\" y2=\"" << fmt(Y(0)) << "\" stroke=\"black\"/>\n";
    for (double u : {0.0, 1.0})
      out << "<line x1=\"" << fmt(X(u)) << "\" y1=\"" << fmt(Y(0) - 10) << "\" x2=\"" << fmt(X(u))
          << "\" y2=\"" << fmt(Y(0) + 10) << "\" stroke=\"black\" stroke-dasharray=\"2,2\"/>\n";
  } else {
    out << "<rect x=\"" << fmt(X(0)) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(s)
        << "\" height=\"" << fmt(s) << "\" fill=\"none\" stroke=\"black\" "
        << "stroke-dasharray=\"4,3\"/>\n";
  }

  // walls per family with hair ticks toward increasing evaluation
  for (size_t fi = 0; fi < q.torus.families.size(); ++fi) {
    size_t ray = q.torus.families[fi];
    const IntVec& a = q.torus.ray_functionals[ray];
    const char* color = kPalette[fi % 8];
    double off = 1.5 * double(fi % 4);  // doubled hairs stay visible
    if (c == 1) {
      double av = a[0].get_d();
      long lo = (long)std::ceil(std::min(0.0, av));
      long hi = (long)std::floor(std::max(0.0, av));
      // wall points: a*u = k for u in [0,1]
      for (long k = lo; k <= hi; ++k) {
        double u = double(k) / av;
        if (u < 0 || u > 1) continue;
        out << "<circle cx=\"" << fmt(X(u)) << "\" cy=\"" << fmt(Y(0) + off) << "\" r=\"3\" fill=\""
            << color << "\"/>\n";
        if (opt.hairs) {
          double dir = av > 0 ? 1.0 : -1.0;
          out << "<line x1=\"" << fmt(X(u)) << "\" y1=\"" << fmt(Y(0) + off) << "\" x2=\""
              << fmt(X(u) + 8 * dir) << "\" y2=\"" << fmt(Y(0) + off - 6) << "\" stroke=\"" << color
              << "\"/>\n";
        }
      }
    } else {
      double a0 = a[0].get_d(), a1 = a[1].get_d();
      double lo = std::min({0.0, a0, a1, a0 + a1});
      double hi = std::max({0.0, a0, a1, a0 + a1});
      for (long k = (long)std::ceil(lo); k <= (long)std::floor(hi); ++k) {
        // clip {a . w = k} to the unit square
        std::vector<std::pair<double, double>> pts;
        auto push = [&](double u, double v) {
          if (u < -1e-9 || u > 1 + 1e-9 || v < -1e-9 || v > 1 + 1e-9) return;
          for (auto& p : pts)
            if (std::abs(p.first - u) + std::abs(p.second - v) < 1e-9) return;
          pts.push_back({u, v});
        };
        if (a1 != 0)
          for (double u : {0.0, 1.0}) push(u, (k - a0 * u) / a1);
        if (a0 != 0)
          for (double v : {0.0, 1.0}) push((k - a1 * v) / a0, v);
        if (pts.size() < 2) continue;
        auto [u1, v1] = pts[0];
        auto [u2, v2] = pts[1];
        out << "<line x1=\"" << fmt(X(u1)) << "\" y1=\"" << fmt(Y(v1)) << "\" x2=\"" << fmt(X(u2))
            << "\" y2=\"" << fmt(Y(v2)) << "\" stroke=\"" << color << "\"/>\n";
        if (opt.hairs) {
          double norm = std::hypot(a0, a1);
          double nu = a0 / norm, nv = a1 / norm;  // direction of increase
          for (double t : {0.3, 0.7}) {
            double mu = u1 + t * (u2 - u1), mv = v1 + t * (v2 - v1);
            double hu = mu + 0.02 * nu + 0.004 * off, hv = mv + 0.02 * nv + 0.004 * off;
            out << "<line x1=\"" << fmt(X(mu)) << "\" y1=\"" << fmt(Y(mv)) << "\" x2=\""
                << fmt(X(hu)) << "\" y2=\"" << fmt(Y(hv)) << "\" stroke=\"" << color << "\"/>\n";
          }
        }
      }
    }
  }

  if (opt.cell_labels) {
    for (const Stratum& st : q.strata) {
      double u = st.sample.empty() ? 0.5 : st.sample[0].get_d();
      double v = st.sample.size() > 1 ? st.sample[1].get_d() : 0;
      u -= std::floor(u);
      v -= std::floor(v);
      double y = c == 2 ? Y(v) : Y(0) + 20 + 12 * double(st.dim);
      out << "<text x=\"" << fmt(X(u)) << "\" y=\"" << fmt(y)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << class_label(st.bundle)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace toricres
