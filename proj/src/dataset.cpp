#include "hdrtrain/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hdrtrain/error.hpp"
#include "hdrtrain/random.hpp"

namespace hdrtrain {

void SplitSpec::validate() const {
  if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0 ||
      std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw ContractError("split fractions must be non-negative and sum to 1");
  }
}

DatasetSplit split_dataset(const std::vector<std::string>& ids, const SplitSpec& spec) {
  spec.validate();
  if (ids.size() < 5) {
    throw ContractError("split_dataset needs at least 5 ids, got " + std::to_string(ids.size()));
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    throw ContractError("split_dataset: duplicate image ids");
  }
  const std::size_t n = ids.size();
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_frac * n));
  const auto n_val =
      std::min(static_cast<std::size_t>(std::llround(spec.val_frac * n)), n - n_train);

  const auto order = shuffled_indices(n, spec.seed);
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val(order.begin() + n_train, order.begin() + n_train + n_val);
  std::vector<std::size_t> test(order.begin() + n_train + n_val, order.end());

  auto collect = [&](std::vector<std::size_t>& idx) {
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(ids[i]);
    return out;
  };
  return {collect(train), collect(val), collect(test)};
}

double mean_luminance_nits(const LinearImage& img, const DisplayModel& display) {
  double sum = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      sum += bt709_luminance(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
    }
  }
  return display.absolute(sum / (static_cast<double>(img.width()) * img.height()));
}

LinearImage normalize_exposure(const LinearImage& img, double target_mean_nits,
                               const DisplayModel& display) {
  check_linear(img);
  if (!(target_mean_nits > 0.0)) {
    throw ContractError("target mean luminance must be positive");
  }
  const double mean = mean_luminance_nits(img, display);
  if (!(mean > 0.0)) {
    throw ContractError("cannot normalize exposure of an all-black image");
  }
  return scale_exposure(img, target_mean_nits / mean);
}

void ExposureAugmentSpec::validate() const {
  if (count < 0 || !(low > 0.0) || !(low <= high)) {
    throw ContractError("exposure augmentation needs count >= 0 and 0 < low <= high");
  }
}

LinearImage scale_exposure(const LinearImage& img, double coefficient) {
  LinearImage out(img.width(), img.height());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>(static_cast<double>(src[i]) * coefficient);
  }
  return out;
}

ExposureSet augment_exposures(const LinearImage& img, const ExposureAugmentSpec& spec) {
  spec.validate();
  const CounterRng rng(spec.seed);
  ExposureSet set;
  set.coefficients.push_back(1.0);
  set.images.push_back(img);
  for (int k = 0; k < spec.count; ++k) {
    const double c = spec.low + (spec.high - spec.low) * rng.uniform(static_cast<std::uint64_t>(k));
    set.coefficients.push_back(c);
    set.images.push_back(scale_exposure(img, c));
  }
  return set;
}

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Denoise:
      return "denoise";
    case Task::Deblur:
      return "deblur";
    case Task::SuperRes4x:
      return "superres4x";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "denoise") return Task::Denoise;
  if (name == "deblur") return Task::Deblur;
  if (name == "superres4x" || name == "superres" || name == "sr4x") return Task::SuperRes4x;
  throw ContractError("unknown task '" + std::string(name) + "'");
}

LinearImage degrade_for_task(Task task, const LinearImage& clean, const DegradeParams& params) {
  switch (task) {
    case Task::Denoise:
      return add_camera_noise(clean, params.noise);
    case Task::Deblur:
      return gaussian_blur(clean, params.blur);
    case Task::SuperRes4x:
      return downsample_bilinear(clean, params.sr_factor);
  }
  throw ContractError("unknown task");
}

std::string describe_degradation(Task task, const DegradeParams& params) {
  std::ostringstream os;
  os.precision(17);
  switch (task) {
    case Task::Denoise:
      os << "camera_noise(k=" << params.noise.photon_gain << ",sigma_r=" << params.noise.readout_std
         << ",seed=" << params.noise.seed << ")";
      break;
    case Task::Deblur:
      os << "gaussian_blur(sigma=" << params.blur.sigma << ",radius=" << params.blur.radius() << ")";
      break;
    case Task::SuperRes4x:
      os << "downsample_bilinear(factor=" << params.sr_factor << ")";
      break;
  }
  return os.str();
}

TrainingPair encode_pair(const LinearImage& degraded, const LinearImage& clean,
                         const Condition& condition, const DisplayModel& display,
                         std::string source_id, std::string degradation) {
  return {encode_image(degraded, condition.encoding, display),
          encode_image(clean, condition.encoding, display), condition.label, std::move(source_id),
          std::move(degradation)};
}

TrainingPair materialize_pair(Task task, const LinearImage& clean, const Condition& condition,
                              const DisplayModel& display, const DegradeParams& params,
                              std::string source_id) {
  check_linear(clean);
  const LinearImage degraded = degrade_for_task(task, clean, params);
  return encode_pair(degraded, clean, condition, display, std::move(source_id),
                     describe_degradation(task, params));
}

LinearImage crop(const LinearImage& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > img.width() ||
      y0 + height > img.height()) {
    throw ContractError("crop rectangle outside the image");
  }
  LinearImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < kChannels; ++c) out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
    }
  }
  return out;
}

std::vector<LinearImage> extract_patches(const LinearImage& img, const PatchSpec& spec) {
  if (spec.size <= 0 || spec.size > img.width() || spec.size > img.height()) {
    throw ContractError("patch size " + std::to_string(spec.size) + " does not fit the image");
  }
  const CounterRng rng(spec.seed);
  const int span_x = img.width() - spec.size + 1;
  const int span_y = img.height() - spec.size + 1;
  std::vector<LinearImage> patches;
  patches.reserve(spec.count);
  for (int p = 0; p < spec.count; ++p) {
    const auto u = rng.uniform2(static_cast<std::uint64_t>(p));
    const int x0 = std::min(static_cast<int>(u[0] * span_x), span_x - 1);
    const int y0 = std::min(static_cast<int>(u[1] * span_y), span_y - 1);
    patches.push_back(crop(img, x0, y0, spec.size, spec.size));
  }
  return patches;
}

}  // namespace hdrtrain
