#ifndef FJMASK_PLOT_HPP
#define FJMASK_PLOT_HPP

#include <string>
#include <vector>

#include "fjmask/dynamics.hpp"
#include "fjmask/experiments.hpp"

namespace fjmask {

// All renderers emit a fixed 800x500 viewport with no timestamps or other
// run-dependent content, so outputs are byte-diffable.

// One box per swept value: whiskers at min/max, box at the quartiles.
std::string render_box_plot(const std::vector<ValueSummary>& summary);

// Fixed-bin histogram of the finite errors; infinite values are counted in
// the subtitle, not binned.
std::string render_histogram(const std::vector<double>& errors, int bins = 40);

// Opinion lines against time; optionally two stacked panels for an
// unmasked/masked comparison.
std::string render_trajectory(const Trajectory& top,
                              const Trajectory* bottom = nullptr);

}  // namespace fjmask

#endif
