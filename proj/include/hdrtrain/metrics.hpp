#pragma once

#include <string>
#include <string_view>

#include "hdrtrain/image.hpp"
#include "hdrtrain/transfer.hpp"

namespace hdrtrain {

enum class Metric { PuPsnr, PuSsim };

std::string_view metric_name(Metric m);  // "PU-PSNR", "PU-SSIM"
Metric parse_metric(std::string_view name);

struct MetricScore {
  Metric metric;
  double value;
  std::string image_id;
};

inline constexpr double kPsnrCapDb = 120.0;

// PSNR over all PU21-encoded RGB elements with peak signal 1.0, capped at
// kPsnrCapDb.
double pu_psnr(const LinearImage& test, const LinearImage& ref, const DisplayModel& display = {});

struct SsimOptions {
  int window = 11;  // odd
  double sigma = 1.5;
  double dynamic_range = 1.0;
};

// Mean SSIM over all fully contained Gaussian windows, computed on the BT.709
// luma of the PU21-encoded channels.
double pu_ssim(const LinearImage& test, const LinearImage& ref, const DisplayModel& display = {},
               const SsimOptions& options = {});

double compute_metric(Metric m, const LinearImage& test, const LinearImage& ref,
                      const DisplayModel& display = {});

}  // namespace hdrtrain
