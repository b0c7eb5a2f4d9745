#ifndef SUDONET_REPORT_HPP
#define SUDONET_REPORT_HPP

#include <filesystem>
#include <functional>

#include "sudonet/experiment.hpp"
#include "sudonet/netpbm.hpp"
#include "sudonet/network.hpp"

namespace sudonet {

/// resolution x resolution raster over [-1,1]^2 (x left to right, y top
/// down); red where the classifier output is >= 0, black elsewhere.
RgbImage render_decision_surface(const Network& net, std::size_t resolution);
RgbImage render_decision_surface(const std::function<double(double, double)>& f,
                                 std::size_t resolution);

/// Queries every pixel coordinate of a width x height image through a
/// 2-input 1-output network and rescales [-1,1] to 0..255 (rounding half
/// away from zero).
GrayImage render_reconstruction(const Network& net, std::size_t width, std::size_t height);
GrayImage render_reconstruction(const std::function<double(double, double)>& f,
                                std::size_t width, std::size_t height);

void emit_histogram_csv(const std::filesystem::path& path, const ActivationHistogram& hist);
void emit_fit_curve_csv(const std::filesystem::path& path, const Matrix& x, const Matrix& pred);

}  // namespace sudonet

#endif  // SUDONET_REPORT_HPP
