#include "ncc/plot.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "ncc/errors.hpp"

namespace ncc {

namespace {

constexpr std::array<const char*, 8> kPalette{"#4d4d4d", "#1b9e77", "#d95f02", "#7570b3",
                                              "#e7298a", "#66a61e", "#e6ab02", "#a6761d"};

// fixed two-decimal output keeps the document byte-stable across platforms
std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
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

}  // namespace

void write_trial_svg(const TrialData& data, std::ostream& os, const PlotOptions& opts) {
  if (data.size() == 0) throw Error("cannot plot an empty trial");
  const auto& windows = data.arm_windows();
  const int n = data.periods().total_participants();

  const double left = 110.0, right = 30.0, top = 50.0, axis_space = 50.0;
  const double plot_w = opts.width - left - right;
  const int bars = static_cast<int>(windows.size());
  const double plot_h = bars * opts.bar_height + (bars + 1) * opts.bar_gap;
  const double height = top + plot_h + axis_space;

  // participant j occupies [j-1, j] on the axis
  auto x_of = [&](double pos) { return left + plot_w * pos / n; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << opts.width << ' ' << num(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << num(height)
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(opts.width / 2.0) << "\" y=\"28\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << escape(opts.title) << "</text>\n";

  os << "<g class=\"bars\">\n";
  for (int b = 0; b < bars; ++b) {
    const auto& w = windows[static_cast<std::size_t>(b)];
    const double y = top + opts.bar_gap + b * (opts.bar_height + opts.bar_gap);
    const std::string label = w.arm == 0 ? "Control" : "Arm " + std::to_string(w.arm);
    os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + opts.bar_height * 0.7)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label
       << "</text>\n";
    if (w.end_j < w.start_j || w.end_j == 0) continue;
    os << "<rect class=\"arm\" data-arm=\"" << w.arm << "\" data-start=\"" << w.start_j
       << "\" data-end=\"" << w.end_j << "\" x=\"" << num(x_of(w.start_j - 1)) << "\" y=\""
       << num(y) << "\" width=\"" << num(x_of(w.end_j) - x_of(w.start_j - 1)) << "\" height=\""
       << opts.bar_height << "\" fill=\"" << kPalette[static_cast<std::size_t>(w.arm) % kPalette.size()]
       << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g class=\"periods\">\n";
  const auto& periods = data.periods().periods();
  for (std::size_t p = 1; p < periods.size(); ++p) {
    const double x = x_of(periods[p].start_j - 1);
    os << "<line class=\"period-boundary\" x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\""
       << num(x) << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"black\" "
       << "stroke-dasharray=\"4,3\"/>\n";
  }
  for (const auto& p : periods) {
    const double xm = x_of((p.start_j - 1 + p.end_j) / 2.0);
    os << "<text x=\"" << num(xm) << "\" y=\"" << num(top - 4)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">P" << p.index
       << "</text>\n";
  }
  os << "</g>\n";

  const double axis_y = top + plot_h;
  os << "<g class=\"axis\">\n";
  os << "<line x1=\"" << num(left) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(left + plot_w)
     << "\" y2=\"" << num(axis_y) << "\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const int j = t == 0 ? 1 : static_cast<int>(static_cast<long long>(n) * t / ticks);
    const double x = x_of(j - 0.5);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(axis_y + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(axis_y + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << j
       << "</text>\n";
  }
  os << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(axis_y + 38)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << "Recruitment index</text>\n";
  os << "</g>\n</svg>\n";
}

std::string trial_svg(const TrialData& data, const PlotOptions& opts) {
  std::ostringstream os;
  write_trial_svg(data, os, opts);
  return os.str();
}

}  // namespace ncc
