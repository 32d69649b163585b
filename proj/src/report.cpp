#include "chainwave/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "chainwave/error.hpp"

namespace chainwave {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string spectrum_csv(const std::vector<SpectralRoot>& roots) {
  std::string out = "index,z,lambda_im,residual,family,family_k\n";
  for (const auto& r : roots) {
    out += std::to_string(r.index) + "," + format_double(r.z) + "," + format_double(r.lambda_im) + "," +
           format_double(r.residual) + "," + (r.family ? r.family->label() : "unclassified") + "," +
           std::to_string(r.family_k) + "\n";
  }
  return out;
}

std::string energy_trace_csv(const EnergyTrace& trace) {
  std::string out = "t,E,diss_total";
  for (std::size_t i = 0; i < trace.term_labels.size(); ++i) out += ",diss_term_" + std::to_string(i + 1);
  out += ",balance_residual\n";
  for (const auto& s : trace.samples) {
    out += format_double(s.t) + "," + format_double(s.energy) + "," + format_double(s.dissipation_total);
    for (double d : s.dissipation_terms) out += "," + format_double(d);
    out += "," + format_double(s.balance_residual) + "\n";
  }
  return out;
}

std::string resolvent_csv(const std::vector<ResolventSample>& samples) {
  std::string out = "beta,norm,norm_over_beta\n";
  for (const auto& s : samples) {
    out += format_double(s.beta) + "," + format_double(s.norm) + "," + format_double(s.norm_over_beta) + "\n";
  }
  return out;
}

std::string mode_csv(const Eigenmode& mode, int samples_per_edge) {
  std::string out = "# z=" + format_double(mode.z) + "\n";
  for (std::size_t j = 0; j < mode.per_edge.size(); ++j) {
    const auto& e = mode.per_edge[j];
    out += "# edge " + std::to_string(j + 1) + (e.kind == EdgeKind::String ? " string" : " beam") +
           (e.exponential_basis ? " exp" : "") + " coeffs";
    const std::size_t n = e.kind == EdgeKind::String ? 2 : 4;
    for (std::size_t k = 0; k < n; ++k) out += " " + format_double(e.c[k]);
    out += "\n";
  }
  const auto& r = mode.residuals;
  out += "# residuals clamped=" + format_double(r.clamped_ends) + " moments=" + format_double(r.beam_moments) +
         " continuity=" + format_double(r.continuity) + " force=" + format_double(r.force_balance) +
         " propagation=" + format_double(r.propagation) + "\n";
  out += "edge,x,phi\n";
  for (std::size_t j = 0; j < mode.per_edge.size(); ++j) {
    const auto& e = mode.per_edge[j];
    for (int i = 0; i < samples_per_edge; ++i) {
      const double x = e.length * i / (samples_per_edge - 1);
      out += std::to_string(j + 1) + "," + format_double(x) + "," + format_double(e.eval(0, x)) + "\n";
    }
  }
  return out;
}

std::string decay_report(const DecayFit& fit) {
  std::ostringstream os;
  os << "window: [" << format_double(fit.t_lo) << ", " << format_double(fit.t_hi) << "]\n"
     << "samples: " << fit.samples << "\n"
     << "slope: " << format_double(fit.slope) << "\n"
     << "intercept: " << format_double(fit.intercept) << "\n"
     << "c_hat: " << format_double(fit.c_hat) << "\n"
     << "last_window_increase: " << format_double(fit.last_window_increase) << "\n"
     << "verdict: " << (fit.bounded ? "bounded" : "unbounded") << "\n";
  return os.str();
}

void read_trace_csv(const std::filesystem::path& path, std::vector<double>& t, std::vector<double>& e) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read trace " + path.string());
  std::string line;
  int line_no = 0;
  int col_t = -1, col_e = -1;
  t.clear();
  e.clear();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (col_t < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "t") col_t = static_cast<int>(i);
        if (cells[i] == "E") col_e = static_cast<int>(i);
      }
      if (col_t < 0 || col_e < 0) {
        throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": header lacks t or E column");
      }
      continue;
    }
    auto parse = [&](int col) {
      const auto c = static_cast<std::size_t>(col);
      double v = 0.0;
      if (c >= cells.size()) {
        throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": missing column");
      }
      const auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size()) {
        throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad number '" + cells[c] + "'");
      }
      return v;
    };
    t.push_back(parse(col_t));
    e.push_back(parse(col_e));
  }
  if (col_t < 0) throw Error(Errc::ParseError, path.string() + ": empty trace");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

namespace {

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (double d = std::ceil(a.lo); d <= a.hi + 1e-12; d += 1.0) out.push_back(d);
    return out;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-12 * span; v += step) out.push_back(v);
  return out;
}

std::string tick_label(double v, bool log) {
  std::ostringstream os;
  os.precision(4);
  if (log) {
    os << "1e" << static_cast<int>(std::lround(v));
  } else {
    os << (std::abs(v) < 1e-12 ? 0.0 : v);
  }
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_plot(const PlotSpec& spec) {
  constexpr double W = 720, H = 440, L = 70, R = 20, T = 40, B = 50;
  Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), spec.log_x};
  Axis ay{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), spec.log_y};
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], ax.log) || !usable(s.y[i], ay.log)) continue;
      ax.lo = std::min(ax.lo, ax.map(s.x[i]));
      ax.hi = std::max(ax.hi, ax.map(s.x[i]));
      ay.lo = std::min(ay.lo, ay.map(s.y[i]));
      ay.hi = std::max(ay.hi, ay.map(s.y[i]));
    }
  }
  if (!(ax.hi >= ax.lo)) ax.lo = 0.0, ax.hi = 1.0;
  if (!(ay.hi >= ay.lo)) ay.lo = 0.0, ay.hi = 1.0;
  if (ax.hi == ax.lo) ax.lo -= 0.5, ax.hi += 0.5;
  if (ay.hi == ay.lo) ay.lo -= 0.5, ay.hi += 0.5;

  auto px = [&](double v) { return L + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * (H - T - B); };
  auto num = [](double v) { return format_double(std::round(v * 100.0) / 100.0); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(ax)) {
    const double x = L + (t - ax.lo) / (ax.hi - ax.lo) * (W - L - R);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << H - B << "\" x2=\"" << num(x) << "\" y2=\"" << H - B + 5
       << "\" stroke=\"black\"/><text x=\"" << num(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
       << tick_label(t, ax.log) << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double y = H - B - (t - ay.lo) / (ay.hi - ay.lo) * (H - T - B);
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << L << "\" y2=\"" << num(y)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
       << tick_label(t, ay.log) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << escape(spec.x_label)
     << "</text>\n<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (double v : spec.vertical_marks) {
    if (!usable(v, ax.log) || ax.map(v) < ax.lo || ax.map(v) > ax.hi) continue;
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << T << "\" x2=\"" << num(px(v)) << "\" y2=\"" << H - B
       << "\" stroke=\"#999999\" stroke-width=\"0.5\" stroke-dasharray=\"3,3\"/>\n";
  }
  double legend_y = T + 14;
  for (const auto& s : spec.series) {
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], ax.log) || !usable(s.y[i], ay.log)) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << s.color
           << "\"/>\n";
      }
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], ax.log) || !usable(s.y[i], ay.log)) continue;
        os << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
      }
      os << "\"/>\n";
    }
    if (!s.label.empty()) {
      os << "<text x=\"" << W - R - 8 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" fill=\"" << s.color << "\">"
         << escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace chainwave
