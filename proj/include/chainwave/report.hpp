#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chainwave/decay.hpp"
#include "chainwave/dynamics.hpp"
#include "chainwave/eigenmode.hpp"
#include "chainwave/resolvent.hpp"
#include "chainwave/spectrum.hpp"

namespace chainwave {

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

std::string spectrum_csv(const std::vector<SpectralRoot>& roots);
std::string energy_trace_csv(const EnergyTrace& trace);
std::string resolvent_csv(const std::vector<ResolventSample>& samples);

/// '#'-prefixed header with z, coefficients and residuals, then edge,x,phi rows.
std::string mode_csv(const Eigenmode& mode, int samples_per_edge);

std::string decay_report(const DecayFit& fit);

/// Reads the t and E columns of an energy trace CSV. Throws Error(IoError) or
/// Error(ParseError) with the line number.
void read_trace_csv(const std::filesystem::path& path, std::vector<double>& t, std::vector<double>& e);

/// Writes text to path, creating parent directories. Throws Error(IoError).
void write_text(const std::filesystem::path& path, const std::string& text);

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
  bool markers = false;  // circles instead of a polyline
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_marks;  // thin dashed guides at these x values
};

/// SVG 1.1 line plot. Non-finite points and, on log axes, non-positive points are skipped.
std::string svg_plot(const PlotSpec& spec);

}  // namespace chainwave
