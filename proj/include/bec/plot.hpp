#pragma once

#include <string>
#include <vector>

#include "bec/edge.hpp"

namespace bec {

// Columns band_id,k,lambda; one row per sample, bands in tracking order.
std::string bands_csv(const std::vector<DispersionBand>& bands);

struct PlotFrame {
    double k_min, k_max;
    double lambda_min, lambda_max;
    double E;
    std::string title;
};

// SVG 1.1: shaded bulk spectrum, fiducial line, edge bands, axes.
std::string bands_svg(const std::vector<DispersionBand>& bands, const Symbol& bulk, const PlotFrame& frame);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bec
