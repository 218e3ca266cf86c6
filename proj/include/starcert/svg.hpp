#pragma once

// Standalone SVG figures.

#include <string>

#include "starcert/calibration.hpp"
#include "starcert/pipeline.hpp"

namespace starcert {

/// Reliability diagram: one bar per bin at its accuracy, the identity
/// diagonal, and R / ECE / MCE in the corner.
std::string reliability_svg(const CalibrationReport& report, const std::string& title);

/// Cluster overlay over the image frame: median predictions stroked solid red,
/// inner and outer bands dashed yellow. Ground-truth outlines are drawn thin
/// grey when given.
std::string overlay_svg(const ClusterReport& report, const LabelMask* ground_truth = nullptr);

}  // namespace starcert
