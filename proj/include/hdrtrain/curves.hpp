#pragma once

#include <string>

namespace hdrtrain {

// CSV with columns luminance_cd_m2, linear, mulaw, pq, pu21 over `points`
// log-spaced luminances from 0.005 to 10000 cd/m^2. Linear and mu-law take
// L / 10000 as their relative input.
std::string transfer_curve_csv(int points = 256);

}  // namespace hdrtrain
