#pragma once

#include <string>

#include "toricres/strat.hpp"

namespace toricres {

struct RenderOptions {
  bool cell_labels = true;
  bool hairs = true;
  double scale = 360.0;  // pixels per fundamental-domain unit
};

// fundamental-domain drawing of a codim <= 2 stratification with hyperplane
// walls, hair ticks on the side of increasing evaluation, and cell labels;
// throws DIM_TOO_HIGH above two dimensions
std::string render_svg(const ExitPathQuiver& q, const RenderOptions& opt = {});

}  // namespace toricres
