// Copyright 2026 The MDRD Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "mdrd/cli/app.hpp"
#include "mdrd/data/batch.hpp"
#include "mdrd/data/synth.hpp"
#include "mdrd/data/text_clean.hpp"
#include "mdrd/data/zscore.hpp"
#include "mdrd/error.hpp"
#include "mdrd/eval/kappa.hpp"
#include "mdrd/eval/metrics.hpp"
#include "mdrd/model/audit.hpp"
#include "mdrd/model/checkpoint.hpp"
#include "mdrd/model/config.hpp"
#include "mdrd/model/model.hpp"

namespace py = pybind11;

namespace {

using mdrd::num::Tensor;

// JSON crosses the boundary as text; the stdlib parser builds the objects.
template <class Json>
py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::handle& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Tensor to_tensor(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw mdrd::DimensionError("tokens must be a 2-d array [length x dim]");
  const std::size_t rows = a.shape(0), cols = a.shape(1);
  return Tensor({rows, cols}, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> to_numpy(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

// Posts are dicts {"tokens": array, "domain": int, "metadata": [..]}.
mdrd::data::Batch make_batch(const py::list& posts, std::size_t max_len) {
  std::vector<mdrd::data::EmbeddedPost> items;
  for (const auto& item : posts) {
    const auto d = item.cast<py::dict>();
    mdrd::data::EmbeddedPost p;
    p.tokens = to_tensor(d["tokens"].cast<py::array>());
    p.domain = d.contains("domain") ? d["domain"].cast<std::size_t>() : 0;
    if (d.contains("metadata")) p.metadata = d["metadata"].cast<std::vector<double>>();
    items.push_back(std::move(p));
  }
  if (items.empty()) throw mdrd::Error("no posts given");
  return mdrd::data::collate(std::span<const mdrd::data::EmbeddedPost>(items), max_len);
}

class Model {
 public:
  explicit Model(mdrd::model::MdrdModel model, nlohmann::ordered_json extras = {})
      : model_(std::move(model)), extras_(std::move(extras)) {}

  static Model from_config(const py::dict& config) {
    return Model(mdrd::model::MdrdModel(mdrd::model::config_from_json(from_py(config))));
  }

  static Model load(const std::string& path) {
    auto loaded = mdrd::model::checkpoint_load(path);
    return Model(std::move(loaded.model), std::move(loaded.extras));
  }

  py::array_t<double> predict_proba(const py::list& posts) {
    return to_numpy(model_.predict_proba(make_batch(posts, model_.config().max_seq_len)));
  }

  void save(const std::string& path) const { mdrd::model::checkpoint_save(model_, path, extras_); }

  py::object config() const { return to_py(mdrd::model::to_json(model_.config())); }
  py::object extras() const { return to_py(extras_); }
  std::size_t parameter_count() const { return model_.parameter_count(); }

  py::dict parameters() const {
    py::dict out;
    for (const auto* p : model_.parameters()) out[py::str(p->name)] = to_numpy(p->value);
    return out;
  }

 private:
  mdrd::model::MdrdModel model_;
  nlohmann::ordered_json extras_;
};

}  // namespace

PYBIND11_MODULE(_mdrd, m) {
  m.doc() = "Domain-gated mixture-of-experts rumor classifier";

  // Translators run newest first, so the base class goes in first.
  const auto base = py::register_exception<mdrd::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<mdrd::ConfigError>(m, "ConfigError", base);
  py::register_exception<mdrd::FormatError>(m, "FormatError", base);
  py::register_exception<mdrd::DimensionError>(m, "DimensionError", base);

  m.def(
      "clean_text",
      [](const std::string& text, std::map<std::string, std::string> emoji_map) {
        mdrd::data::CleanOptions o;
        o.emoji_map = std::move(emoji_map);
        return mdrd::data::clean_text(text, o);
      },
      py::arg("text"), py::arg("emoji_map") = std::map<std::string, std::string>{},
      "Normalize a post; None when nothing is left.");

  m.def(
      "zscore",
      [](const std::vector<double>& train, const std::vector<double>& values) {
        const auto stats = mdrd::data::zscore_fit(train);
        std::vector<double> out;
        for (double v : values) out.push_back(mdrd::data::zscore_apply(v, stats));
        return py::make_tuple(stats.mean[0], stats.stddev[0], out);
      },
      py::arg("train"), py::arg("values"),
      "Fit on `train` (population std) and standardize `values`. Returns (mean, std, z).");

  m.def(
      "classification_metrics",
      [](const std::vector<int>& predictions, const std::vector<int>& labels) {
        return to_py(mdrd::eval::to_json(mdrd::eval::classification_metrics(predictions, labels)));
      },
      py::arg("predictions"), py::arg("labels"));

  m.def(
      "fleiss_kappa",
      [](std::vector<std::vector<std::size_t>> counts) {
        return mdrd::eval::fleiss_kappa(mdrd::eval::RatingsMatrix{std::move(counts)});
      },
      py::arg("counts"), "Rows are items, columns categories, cells rater counts.");
  m.def("kappa_band", &mdrd::eval::kappa_band, py::arg("kappa"));

  m.def(
      "bce_loss",
      [](const std::vector<double>& p_rumor, const std::vector<int>& labels, double clip) {
        return mdrd::model::bce_loss(p_rumor, labels, clip);
      },
      py::arg("p_rumor"), py::arg("labels"), py::arg("clip") = 1e-7);

  m.def(
      "gradcheck",
      [](std::uint64_t seed, double eps) {
        const auto r = mdrd::model::gradcheck_tiny_model(seed, eps);
        py::dict d;
        d["max_rel_error"] = r.max_rel_error;
        d["worst_parameter"] = r.worst_parameter;
        d["worst_index"] = r.worst_index;
        d["checked"] = r.checked;
        return d;
      },
      py::arg("seed") = 7, py::arg("eps") = 1e-5, "Finite-difference audit of the tiny model.");

  m.def(
      "synth",
      [](std::size_t domains, std::size_t per_domain, std::size_t dim, std::size_t layers, bool domain_cue,
         double label_noise, std::uint64_t seed) {
        mdrd::data::SyntheticSpec spec;
        spec.num_domains = domains;
        spec.samples_per_domain = per_domain;
        spec.dim = dim;
        spec.layers = layers;
        spec.domain_cue = domain_cue;
        spec.label_noise = label_noise;
        spec.seed = seed;
        const auto syn = mdrd::data::synth_generate(spec);
        py::list records;
        for (std::size_t i = 0; i < syn.records.size(); ++i) {
          py::dict r = to_py(mdrd::data::to_json(syn.records[i]));
          py::list layers;
          for (const auto& t : syn.embeddings[i].layers) layers.append(to_numpy(t));
          r["layers"] = layers;
          records.append(r);
        }
        py::dict out;
        out["domains"] = syn.domains;
        out["records"] = records;
        out["bayes_accuracy"] = syn.bayes_accuracy;
        out["domain_blind_cap"] = syn.domain_blind_cap;
        return out;
      },
      py::arg("domains") = 6, py::arg("per_domain") = 400, py::arg("dim") = 32, py::arg("layers") = 4,
      py::arg("domain_cue") = true, py::arg("label_noise") = 0.0, py::arg("seed") = 1,
      "Planted-rule corpus: records with their per-layer token embeddings.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"mdrd"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = mdrd::cli::run(argv, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one command line in-process. Returns (exit code, stdout, stderr).");

  py::class_<Model>(m, "Model")
      .def(py::init(&Model::from_config), py::arg("config"), "Fresh model from a config dict.")
      .def_static("load", &Model::load, py::arg("path"))
      .def("save", &Model::save, py::arg("path"))
      .def("predict_proba", &Model::predict_proba, py::arg("posts"),
           "Posts are dicts with 'tokens' [length x dim], 'domain' and 'metadata'. Returns [n x 2].")
      .def_property_readonly("config", &Model::config)
      .def_property_readonly("extras", &Model::extras)
      .def_property_readonly("parameter_count", &Model::parameter_count)
      .def("parameters", &Model::parameters);
}
