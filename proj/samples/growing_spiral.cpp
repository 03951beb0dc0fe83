// Draws the golden spiral r = phi^(b theta t) at a few instants, one SVG
// path per instant, on top of the Fibonacci squares.
//
//   growing_spiral > spiral.svg

#include <iostream>
#include <vector>

#include "morphocell/morphocell.hpp"

int main() {
    using namespace morphocell;
    std::vector<io::SvgItem> items;
    items.push_back({spirals::fibonacci_squares(8), {"#999999", 0.5, "none"}, "squares"});

    const char* colours[] = {"#1f77b4", "#2ca02c", "#d62728"};
    const double instants[] = {0.5, 0.75, 1.0};
    for (int i = 0; i < 3; ++i) {
        spirals::SpiralSpec spec;
        spec.t = instants[i];
        spec.theta_end = 6 * 3.141592653589793;
        spec.samples = 1081;
        items.push_back({spirals::log_spiral(spec), {colours[i], 1.5, "none"}, "t" + std::to_string(i)});
    }
    io::write_svg(items, std::cout);
}
