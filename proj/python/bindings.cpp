#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hdrtrain/dataset.hpp"
#include "hdrtrain/degrade.hpp"
#include "hdrtrain/error.hpp"
#include "hdrtrain/loss.hpp"
#include "hdrtrain/metrics.hpp"
#include "hdrtrain/pfm.hpp"
#include "hdrtrain/pipeline.hpp"
#include "hdrtrain/report.hpp"
#include "hdrtrain/stats.hpp"
#include "hdrtrain/transfer.hpp"

namespace py = pybind11;
using namespace hdrtrain;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

PixelBuffer to_buffer(const FloatArray& a) {
  if (a.ndim() != 3 || a.shape(2) != kChannels) {
    throw ContractError("expected an array of shape (height, width, 3)");
  }
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return PixelBuffer(w, h, std::vector<float>(a.data(), a.data() + a.size()));
}

LinearImage to_linear(const FloatArray& a) { return LinearImage(to_buffer(a)); }

FloatArray to_array(const PixelBuffer& p) {
  FloatArray out({static_cast<py::ssize_t>(p.height()), static_cast<py::ssize_t>(p.width()),
                  static_cast<py::ssize_t>(kChannels)});
  std::copy(p.values().begin(), p.values().end(), out.mutable_data());
  return out;
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_hdrtrain, m) {
  m.doc() = "Perceptual encodings, losses, degradations, HDR metrics and significance testing.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

  py::class_<DisplayModel>(m, "DisplayModel")
      .def(py::init([](double black_level, double peak) {
             DisplayModel d{black_level, peak};
             d.validate();
             return d;
           }),
           py::arg("black_level") = 0.005, py::arg("peak") = 4000.0)
      .def_readwrite("black_level", &DisplayModel::black_level)
      .def_readwrite("peak", &DisplayModel::peak)
      .def_readonly_static("reference_max", &DisplayModel::kReferenceMax)
      .def("__repr__", [](const DisplayModel& d) {
        return "DisplayModel(black_level=" + std::to_string(d.black_level) +
               ", peak=" + std::to_string(d.peak) + ")";
      });

  py::enum_<Encoding>(m, "Encoding")
      .value("Linear", Encoding::Linear)
      .value("MuLaw", Encoding::MuLaw)
      .value("PQ", Encoding::PQ)
      .value("PU21", Encoding::PU21);

  py::class_<EncodingKind>(m, "EncodingKind")
      .def(py::init([](const std::string& name, double mu) { return parse_encoding(name, mu); }),
           py::arg("name"), py::arg("mu") = EncodingKind::kDefaultMu)
      .def_readonly("tag", &EncodingKind::tag)
      .def_readonly("mu", &EncodingKind::mu)
      .def_property_readonly("name", [](const EncodingKind& k) { return std::string(encoding_name(k.tag)); })
      .def("__eq__", [](const EncodingKind& a, const EncodingKind& b) { return a == b; })
      .def("__repr__", [](const EncodingKind& k) {
        return "EncodingKind('" + std::string(encoding_name(k.tag)) + "')";
      });

  // Scalar transfer functions, vectorized over numpy input.
  m.def("encode_mulaw", py::vectorize([](double l, double mu) { return encode_mulaw(l, mu); }),
        py::arg("l"), py::arg("mu") = EncodingKind::kDefaultMu);
  m.def("decode_mulaw", py::vectorize([](double v, double mu) { return decode_mulaw(v, mu); }),
        py::arg("v"), py::arg("mu") = EncodingKind::kDefaultMu);
  m.def("encode_pu21", py::vectorize([](double l) { return encode_pu21(l); }), py::arg("luminance"));
  m.def("decode_pu21", py::vectorize([](double v) { return decode_pu21(v); }), py::arg("v"));
  m.def("encode_pq", py::vectorize([](double l) { return encode_pq(l); }), py::arg("luminance"));
  m.def("decode_pq", py::vectorize([](double v) { return decode_pq(v); }), py::arg("v"));
  m.def("derivative", [](const EncodingKind& k, double x) { return derivative(k, x); },
        py::arg("kind"), py::arg("x"));

  m.def("encode_image",
        [](const FloatArray& img, const EncodingKind& kind, const DisplayModel& display) {
          return to_array(encode_image(to_linear(img), kind, display).pixels());
        },
        py::arg("image"), py::arg("kind"), py::arg("display") = DisplayModel{});
  m.def("decode_image",
        [](const FloatArray& img, const EncodingKind& kind, const DisplayModel& display) {
          return to_array(decode_image(EncodedImage(to_buffer(img), kind), display).pixels());
        },
        py::arg("image"), py::arg("kind"), py::arg("display") = DisplayModel{});

  m.def("loss_l1", [](const FloatArray& p, const FloatArray& r) { return loss_l1(to_linear(p), to_linear(r)); },
        py::arg("pred"), py::arg("ref"));
  m.def("loss_encoded_l1",
        [](const FloatArray& p, const FloatArray& r, const EncodingKind& k, const DisplayModel& d) {
          return loss_encoded_l1(to_linear(p), to_linear(r), k, d);
        },
        py::arg("pred"), py::arg("ref"), py::arg("encoding"), py::arg("display") = DisplayModel{});
  m.def("loss_smape",
        [](const FloatArray& p, const FloatArray& r, double eps) {
          return loss_smape(to_linear(p), to_linear(r), eps);
        },
        py::arg("pred"), py::arg("ref"), py::arg("epsilon") = SmapeLoss::kDefaultEpsilon);
  m.def("condition_loss",
        [](const std::string& label, const FloatArray& p, const FloatArray& r, const DisplayModel& d) {
          return evaluate_loss(condition_by_label(label).loss, to_linear(p), to_linear(r), d);
        },
        py::arg("label"), py::arg("pred"), py::arg("ref"), py::arg("display") = DisplayModel{},
        "Loss of the named condition applied to linear operands.");
  m.def("conditions", [] { return to_python(registry_to_json()); });
  m.def("condition_encoding", [](const std::string& label) { return condition_by_label(label).encoding; },
        py::arg("label"));

  m.def("pu_psnr",
        [](const FloatArray& t, const FloatArray& r, const DisplayModel& d) {
          return pu_psnr(to_linear(t), to_linear(r), d);
        },
        py::arg("test"), py::arg("ref"), py::arg("display") = DisplayModel{});
  m.def("pu_ssim",
        [](const FloatArray& t, const FloatArray& r, const DisplayModel& d, int window, double sigma) {
          return pu_ssim(to_linear(t), to_linear(r), d, SsimOptions{window, sigma, 1.0});
        },
        py::arg("test"), py::arg("ref"), py::arg("display") = DisplayModel{}, py::arg("window") = 11,
        py::arg("sigma") = 1.5);

  m.def("add_camera_noise",
        [](const FloatArray& img, double photon_gain, double readout_std, std::uint64_t seed, bool clamp) {
          return to_array(add_camera_noise(to_linear(img), {photon_gain, readout_std, seed, clamp}).pixels());
        },
        py::arg("image"), py::arg("photon_gain") = 0.01, py::arg("readout_std") = 0.002,
        py::arg("seed") = 0, py::arg("clamp_negative") = true);
  m.def("gaussian_blur",
        [](const FloatArray& img, double sigma) {
          return to_array(gaussian_blur(to_linear(img), BlurParams{sigma, -1}).pixels());
        },
        py::arg("image"), py::arg("sigma") = 8.0);
  m.def("downsample_bilinear",
        [](const FloatArray& img, int factor) {
          return to_array(downsample_bilinear(to_linear(img), factor).pixels());
        },
        py::arg("image"), py::arg("factor") = 4);

  m.def("split_dataset",
        [](const std::vector<std::string>& ids, std::uint64_t seed) {
          SplitSpec spec;
          spec.seed = seed;
          const DatasetSplit s = split_dataset(ids, spec);
          return py::make_tuple(s.train, s.val, s.test);
        },
        py::arg("ids"), py::arg("seed") = 0);
  m.def("augment_exposures",
        [](const FloatArray& img, int count, double low, double high, std::uint64_t seed) {
          const ExposureSet set = augment_exposures(to_linear(img), {count, low, high, seed});
          py::list images;
          for (const auto& i : set.images) images.append(to_array(i.pixels()));
          return py::make_tuple(set.coefficients, images);
        },
        py::arg("image"), py::arg("count") = 5, py::arg("low") = 0.1, py::arg("high") = 0.9,
        py::arg("seed") = 0);
  m.def("normalize_exposure",
        [](const FloatArray& img, double nits, const DisplayModel& d) {
          return to_array(normalize_exposure(to_linear(img), nits, d).pixels());
        },
        py::arg("image"), py::arg("target_mean_nits") = 20.0, py::arg("display") = DisplayModel{});

  m.def("student_t_cdf", &student_t_cdf, py::arg("t"), py::arg("df"));
  m.def("paired_ttest",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          const TTestResult r = paired_ttest(a, b);
          return py::make_tuple(r.t, r.p, r.df);
        },
        py::arg("a"), py::arg("b"));
  m.def("significance_groups",
        [](const std::vector<std::string>& labels, const std::vector<std::vector<double>>& samples,
           double alpha, bool bonferroni) {
          const SignificanceGroups g =
              significance_groups(ScoreMatrix{labels, samples}, GroupingOptions{alpha, bonferroni, true});
          py::list groups;
          for (const auto& r : g.groups) {
            py::list members;
            for (std::size_t i = r.first; i <= r.last; ++i) members.append(g.sorted_conditions[i]);
            groups.append(members);
          }
          return py::make_tuple(g.sorted_conditions, groups);
        },
        py::arg("labels"), py::arg("samples"), py::arg("alpha") = 0.05, py::arg("bonferroni") = false);

  m.def("read_pfm", [](const std::filesystem::path& p) { return to_array(read_pfm(p).pixels()); },
        py::arg("path"));
  m.def("write_pfm",
        [](const FloatArray& img, const std::filesystem::path& p) { write_pfm(to_linear(img), p); },
        py::arg("image"), py::arg("path"));

  m.def("prepare",
        [](const std::filesystem::path& config, const std::map<std::string, std::string>& overrides) {
          std::vector<std::pair<std::string, std::string>> ov(overrides.begin(), overrides.end());
          return to_python(prepare_dataset(load_config(config, ov)));
        },
        py::arg("config"), py::arg("overrides") = std::map<std::string, std::string>{},
        "Runs the dataset pipeline from a config file; returns the manifest.");
  m.def("evaluate",
        [](const std::filesystem::path& ref, const std::vector<std::pair<std::string, std::filesystem::path>>& tests,
           const std::filesystem::path& out, double alpha) {
          EvaluateOptions opt;
          opt.grouping.alpha = alpha;
          const EvaluationReport report = evaluate_directories(ref, tests, opt);
          write_report(report, out);
          return to_python(report_to_json(report));
        },
        py::arg("ref"), py::arg("tests"), py::arg("out"), py::arg("alpha") = 0.05);
}
