#include "hdrtrain/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hdrtrain/error.hpp"
#include "hdrtrain/transfer.hpp"

namespace hdrtrain {

std::string transfer_curve_csv(int points) {
  if (points < 2) throw ContractError("curve needs at least 2 points");
  const double lo = std::log10(PU21Params::min_luminance);
  const double hi = std::log10(PU21Params::max_luminance);
  std::string out = "luminance_cd_m2,linear,mulaw,pq,pu21\n";
  char line[160];
  for (int i = 0; i < points; ++i) {
    double lum = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
    lum = std::clamp(lum, PU21Params::min_luminance, PU21Params::max_luminance);
    const double rel = lum / DisplayModel::kReferenceMax;
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g\n", lum, rel, encode_mulaw(rel),
                  encode_pq(lum), encode_pu21(lum));
    out += line;
  }
  return out;
}

}  // namespace hdrtrain
