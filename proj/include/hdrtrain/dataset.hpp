#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hdrtrain/degrade.hpp"
#include "hdrtrain/image.hpp"
#include "hdrtrain/loss.hpp"
#include "hdrtrain/transfer.hpp"

namespace hdrtrain {

struct SplitSpec {
  double train_frac = 0.6;
  double val_frac = 0.2;
  double test_frac = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Shuffled partition with sizes round(train_frac n), round(val_frac n) and
// the remainder. Requires at least 5 ids.
DatasetSplit split_dataset(const std::vector<std::string>& ids, const SplitSpec& spec);

// Scales all channels by one factor so that the mean BT.709 luminance,
// in absolute units through `display`, equals target_mean_nits.
LinearImage normalize_exposure(const LinearImage& img, double target_mean_nits,
                               const DisplayModel& display = {});
double mean_luminance_nits(const LinearImage& img, const DisplayModel& display = {});

struct ExposureAugmentSpec {
  int count = 5;
  double low = 0.1;
  double high = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ExposureSet {
  std::vector<double> coefficients;  // coefficients[0] == 1 (the original)
  std::vector<LinearImage> images;
};

// The original followed by `count` copies scaled by i.i.d. U(low, high)
// coefficients.
ExposureSet augment_exposures(const LinearImage& img, const ExposureAugmentSpec& spec);

// Exposure scaling applied the same way augment_exposures does it.
LinearImage scale_exposure(const LinearImage& img, double coefficient);

enum class Task { Denoise, Deblur, SuperRes4x };

std::string_view task_name(Task t);  // "denoise", "deblur", "superres4x"
Task parse_task(std::string_view name);

struct DegradeParams {
  NoiseParams noise;
  BlurParams blur;
  int sr_factor = 4;
};

// Applies the task's degradation in linear space.
LinearImage degrade_for_task(Task task, const LinearImage& clean, const DegradeParams& params);

struct TrainingPair {
  EncodedImage input;
  EncodedImage target;
  std::string condition_label;
  std::string source_id;
  std::string degradation;
};

std::string describe_degradation(Task task, const DegradeParams& params);

// Degrades `clean` in linear space, then encodes input and target with the
// condition's pixel encoding.
TrainingPair materialize_pair(Task task, const LinearImage& clean, const Condition& condition,
                              const DisplayModel& display, const DegradeParams& params,
                              std::string source_id = {});

// Same as materialize_pair, reusing an already degraded input.
TrainingPair encode_pair(const LinearImage& degraded, const LinearImage& clean,
                         const Condition& condition, const DisplayModel& display,
                         std::string source_id, std::string degradation);

struct PatchSpec {
  int size = 64;
  int count = 16;
  std::uint64_t seed = 0;
};

// Random crops at positions drawn from the (seed, patch index) stream.
std::vector<LinearImage> extract_patches(const LinearImage& img, const PatchSpec& spec);
LinearImage crop(const LinearImage& img, int x0, int y0, int width, int height);

}  // namespace hdrtrain
