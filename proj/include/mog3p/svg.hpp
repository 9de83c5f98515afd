#pragma once

#include <span>
#include <string>
#include <vector>

#include "mog3p/matrix.hpp"

namespace mog3p::svg {

std::string escape(const std::string& text);

struct PlotText {
    std::string title;
    std::string x_label = "dim 1";
    std::string y_label = "dim 2";
    std::string comment;  // emitted as an XML comment (seed, config hash)
};

// 2D scatter, one <circle class="point"> per row, coloured by class.
std::string scatter(const Matrix& coords, std::span<const int> labels,
                    std::span<const std::string> class_names, const PlotText& text);

// Vertical bar chart, one <rect class="bar"> per value.
std::string bar_chart(std::span<const std::string> names, std::span<const std::size_t> values,
                      const PlotText& text);

}  // namespace mog3p::svg
