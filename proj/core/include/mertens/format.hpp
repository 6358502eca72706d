#pragma once

#include <string>

namespace mertens {

// Shortest decimal form that round-trips.
std::string format_exact(double v);

// printf %.<digits>g.
std::string format_sig(double v, int digits = 6);

}  // namespace mertens
