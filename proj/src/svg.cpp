#include "starcert/svg.hpp"

#include <sstream>

#include "starcert/certainty.hpp"
#include "starcert/io.hpp"

namespace starcert {

namespace {

std::string num(double v) { return format_double(v); }

void polygon_path(std::ostringstream& os, const std::vector<Point>& pts, double scale,
                  const char* style) {
  if (pts.empty()) return;
  os << "<path d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i == 0 ? 'M' : 'L') << num(pts[i].x * scale) << ' ' << num(pts[i].y * scale) << ' ';
  }
  os << "Z\" " << style << "/>\n";
}

std::vector<Contour> mask_outline(const BitMask& m) {
  const Box b = m.bounds();
  if (b.empty()) return {};
  std::vector<double> values(std::size_t(b.width()) * b.height());
  for (int y = b.y0; y < b.y1; ++y) {
    for (int x = b.x0; x < b.x1; ++x) {
      values[std::size_t(y - b.y0) * b.width() + (x - b.x0)] = m.test(x, y) ? 1.0 : 0.0;
    }
  }
  return iso_contours(values, b, 0.5);
}

}  // namespace

std::string reliability_svg(const CalibrationReport& report, const std::string& title) {
  constexpr double size = 400.0, left = 60.0, top = 40.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 100 << "\" height=\""
     << size + 100 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-size=\"16\">" << title << "</text>\n";
  os << "<g transform=\"translate(" << left << ' ' << top << ")\">\n";
  for (const ReliabilityBin& b : report.bins) {
    if (b.count == 0) continue;
    const double x = b.lo * size;
    const double w = (b.hi - b.lo) * size;
    const double h = b.accuracy * size;
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(size - h) << "\" width=\"" << num(w)
       << "\" height=\"" << num(h) << "\" fill=\"#4a7bd0\" stroke=\"#1f3f7a\"/>\n";
  }
  os << "<line x1=\"0\" y1=\"" << size << "\" x2=\"" << size
     << "\" y2=\"0\" stroke=\"#d03030\" stroke-dasharray=\"6 4\"/>\n";
  os << "<rect width=\"" << size << "\" height=\"" << size
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 10; t += 2) {
    const double v = t / 10.0;
    os << "<text x=\"" << num(v * size) << "\" y=\"" << size + 16
       << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    os << "<text x=\"-8\" y=\"" << num(size - v * size + 4) << "\" text-anchor=\"end\">" << num(v)
       << "</text>\n";
  }
  os << "<text x=\"" << size / 2 << "\" y=\"" << size + 36
     << "\" text-anchor=\"middle\">certainty</text>\n";
  os << "<text transform=\"translate(-40 " << size / 2
     << ") rotate(-90)\" text-anchor=\"middle\">accuracy</text>\n";
  std::ostringstream stats;
  stats.setf(std::ios::fixed);
  stats.precision(3);
  stats << "R = ";
  if (report.pearson_r) {
    stats << *report.pearson_r;
  } else {
    stats << "n/a";
  }
  os << "<text x=\"10\" y=\"20\">" << stats.str() << "</text>\n";
  stats.str("");
  stats << "ECE = " << report.ece;
  os << "<text x=\"10\" y=\"36\">" << stats.str() << "</text>\n";
  stats.str("");
  stats << "MCE = " << report.mce;
  os << "<text x=\"10\" y=\"52\">" << stats.str() << "</text>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string overlay_svg(const ClusterReport& report, const LabelMask* ground_truth) {
  const double scale = report.width <= 256 && report.height <= 256 ? 4.0 : 1.0;
  const char* median_style = "fill=\"none\" stroke=\"#e02020\" stroke-width=\"2\"";
  const char* band_style =
      "fill=\"none\" stroke=\"#f0c000\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"";
  const char* gt_style = "fill=\"none\" stroke=\"#909090\" stroke-width=\"1\"";
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(report.width * scale)
     << "\" height=\"" << num(report.height * scale) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#202020\"/>\n";
  if (ground_truth) {
    for (const LabeledMask& lm : split_labels(*ground_truth)) {
      for (const Contour& c : mask_outline(lm.mask)) polygon_path(os, c, scale, gt_style);
    }
  }
  for (const ClusterSummary& c : report.clusters) {
    if (c.band) {
      polygon_path(os, vertices(c.band->outer), scale, band_style);
      polygon_path(os, vertices(c.band->inner), scale, band_style);
    }
    for (const Contour& k : c.outer_contours) polygon_path(os, k, scale, band_style);
    for (const Contour& k : c.inner_contours) polygon_path(os, k, scale, band_style);
    if (c.median_polygon) polygon_path(os, vertices(*c.median_polygon), scale, median_style);
    if (c.median_mask) {
      for (const Contour& k : mask_outline(*c.median_mask)) polygon_path(os, k, scale, median_style);
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace starcert
