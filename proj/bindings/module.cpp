// Python bindings for the main operations: dataset I/O, synthetic data,
// the fit pipeline, bundle loading/prediction, and evaluation.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "trajml/error.hpp"
#include "trajml/pipeline.hpp"
#include "trajml/random.hpp"

namespace py = pybind11;
using namespace trajml;

namespace {

LabeledDataset dataset_from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> X,
                                   std::vector<int> y, std::vector<std::string> class_names) {
    if (X.ndim() != 2) throw data_error("features must be a 2-D array");
    LabeledDataset ds;
    ds.rows = static_cast<std::size_t>(X.shape(0));
    ds.cols = static_cast<std::size_t>(X.shape(1));
    ds.features.assign(X.data(), X.data() + ds.rows * ds.cols);
    ds.labels = std::move(y);
    ds.class_names = std::move(class_names);
    ds.validate();
    return ds;
}

py::array_t<double> features_array(const LabeledDataset& ds) {
    py::array_t<double> out({ds.rows, ds.cols});
    std::copy(ds.features.begin(), ds.features.end(), out.mutable_data());
    return out;
}

SynthSpec make_synth_spec(const std::string& profile, std::size_t balanced_total,
                          const std::vector<std::size_t>& custom_counts) {
    SynthSpec spec;
    if (profile == "paper_like") spec.profile = SynthProfile::PaperLike;
    else if (profile == "balanced") spec.profile = SynthProfile::Balanced;
    else if (profile == "custom") spec.profile = SynthProfile::Custom;
    else throw data_error("unknown synth profile '" + profile + "'");
    spec.balanced_total = balanced_total;
    spec.custom_counts = custom_counts;
    return spec;
}

py::dict report_dict(const ClassificationReport& rep, const std::vector<std::string>& names) {
    return py::module_::import("json").attr("loads")(report_json(rep, names).dump());
}

}  // namespace

PYBIND11_MODULE(_trajml, m) {
    m.doc() = "AutoML engine for trajectory action classification";

    py::register_exception<Error>(m, "TrajmlError");

    py::class_<LabeledDataset>(m, "Dataset")
        .def(py::init(&dataset_from_arrays), py::arg("features"), py::arg("labels"),
             py::arg("class_names"))
        .def_static("from_csv", &load_dataset_csv, py::arg("path"))
        .def("to_csv", [](const LabeledDataset& ds, const std::string& p) { save_dataset_csv(ds, p); })
        .def_property_readonly("features", &features_array)
        .def_property_readonly("labels", [](const LabeledDataset& ds) { return ds.labels; })
        .def_property_readonly("class_names", [](const LabeledDataset& ds) { return ds.class_names; })
        .def_property_readonly("feature_names", [](const LabeledDataset& ds) { return ds.feature_names; })
        .def("__len__", [](const LabeledDataset& ds) { return ds.rows; });

    m.def(
        "synth_generate",
        [](const std::string& profile, std::uint64_t seed, std::size_t balanced_total,
           const std::vector<std::size_t>& custom_counts) {
            SynthResult r = synth_generate(make_synth_spec(profile, balanced_total, custom_counts), seed);
            return py::make_tuple(std::move(r.train), std::move(r.test));
        },
        py::arg("profile") = "paper_like", py::arg("seed") = 0, py::arg("balanced_total") = 1100,
        py::arg("custom_counts") = std::vector<std::size_t>{},
        "Generate a (train, test) synthetic dataset pair");

    m.def(
        "class_weights",
        [](const std::vector<int>& labels, std::size_t num_classes) {
            ClassDistribution dist;
            dist.counts.assign(num_classes, 0);
            for (int y : labels) {
                if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
                    throw data_error("label out of range [0, C)");
                ++dist.counts[static_cast<std::size_t>(y)];
            }
            dist.total = labels.size();
            return class_weights(dist).w;
        },
        py::arg("labels"), py::arg("num_classes"),
        "Inverse-frequency class weights: N / (C * N_i)");

    m.def(
        "meta_features",
        [](const LabeledDataset& ds) {
            return compute_meta_features(ds).as_vector();
        },
        py::arg("dataset"), "8-dimensional dataset descriptor used for warmstart");

    py::class_<ModelBundle>(m, "Bundle")
        .def_static(
            "load",
            [](const std::string& path) { return ModelBundle::load(path, default_config_space()); },
            py::arg("path"))
        .def("save", &ModelBundle::save, py::arg("path"))
        .def_property_readonly("class_names", [](const ModelBundle& b) { return b.class_names; })
        .def_property_readonly("feature_names", [](const ModelBundle& b) { return b.feature_names; })
        .def_property_readonly("num_members",
                               [](const ModelBundle& b) { return b.ensemble.members.size(); })
        .def_property_readonly("weights", [](const ModelBundle& b) { return b.ensemble.weights; })
        .def_property_readonly(
            "training_summary",
            [](const ModelBundle& b) {
                return py::module_::import("json").attr("loads")(b.training_summary.dump());
            })
        .def(
            "predict_proba",
            [](const ModelBundle& b,
               py::array_t<double, py::array::c_style | py::array::forcecast> X) {
                if (X.ndim() != 2 ||
                    static_cast<std::size_t>(X.shape(1)) != b.feature_names.size())
                    throw data_error("expected an (n, " + std::to_string(b.feature_names.size()) +
                                     ") feature array");
                const auto n = static_cast<std::size_t>(X.shape(0));
                auto proba = ensemble_predict_proba(b.ensemble, X.data(), n, b.feature_names.size());
                py::array_t<double> out({n, b.class_names.size()});
                std::copy(proba.begin(), proba.end(), out.mutable_data());
                return out;
            },
            py::arg("features"))
        .def(
            "predict",
            [](const ModelBundle& b,
               py::array_t<double, py::array::c_style | py::array::forcecast> X) {
                const auto n = static_cast<std::size_t>(X.shape(0));
                auto proba = ensemble_predict_proba(b.ensemble, X.data(), n, b.feature_names.size());
                auto labels = argmax_labels(proba, n, b.class_names.size());
                std::vector<std::string> names;
                names.reserve(n);
                for (int y : labels) names.push_back(b.class_names[static_cast<std::size_t>(y)]);
                return names;
            },
            py::arg("features"));

    m.def(
        "fit",
        [](py::object dataset, const std::string& dataset_csv, const std::string& synth_profile,
           std::uint64_t seed, const std::string& metric, std::size_t budget_evals,
           double budget_seconds, std::size_t kfolds, const std::string& warmstart_kb,
           std::size_t ensemble_rounds, const std::string& out_dir) {
            RunConfig rc;
            LabeledDataset owned;
            if (!dataset.is_none()) {
                owned = dataset.cast<LabeledDataset>();
            } else if (!dataset_csv.empty()) {
                rc.dataset_path = dataset_csv;
            } else if (!synth_profile.empty()) {
                rc.synth = make_synth_spec(synth_profile, 1100, {});
            }
            rc.seed = seed;
            rc.metric = metric_from_string(metric);
            rc.budget.max_evaluations = budget_evals;
            rc.budget.max_wall_time_s = budget_seconds;
            rc.budget.k_folds = kfolds;
            if (!warmstart_kb.empty()) {
                rc.warmstart = true;
                rc.warmstart_kb_path = warmstart_kb;
            }
            rc.ensemble_rounds = ensemble_rounds;
            rc.out_dir = out_dir;

            FitArtifacts art;
            if (!dataset.is_none()) {
                // route an in-memory dataset through a temp CSV to reuse the
                // single pipeline entry point
                const std::string tmp =
                    (std::filesystem::temp_directory_path() /
                     ("trajml_fit_" + std::to_string(mix_seed(seed, owned.rows)) + ".csv"))
                        .string();
                save_dataset_csv(owned, tmp);
                rc.dataset_path = tmp;
                try {
                    art = run_fit(rc);
                } catch (...) {
                    std::filesystem::remove(tmp);
                    throw;
                }
                std::filesystem::remove(tmp);
            } else {
                art = run_fit(rc);
            }
            py::dict out;
            out["bundle"] = art.bundle;
            out["holdout_report"] = report_dict(art.holdout_report, art.bundle.class_names);
            out["num_evaluations"] = art.trace.size();
            return out;
        },
        py::arg("dataset") = py::none(), py::arg("dataset_csv") = "",
        py::arg("synth_profile") = "", py::arg("seed") = 0,
        py::arg("metric") = "balanced_accuracy", py::arg("budget_evals") = 50,
        py::arg("budget_seconds") = 1e9, py::arg("kfolds") = 5, py::arg("warmstart_kb") = "",
        py::arg("ensemble_rounds") = 50, py::arg("out_dir") = "",
        "Run the full AutoML pipeline; returns the bundle and the held-out report");

    m.def(
        "evaluate",
        [](const ModelBundle& b, const LabeledDataset& ds) {
            std::vector<int> remap(ds.class_names.size(), -1);
            for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
                for (std::size_t k = 0; k < b.class_names.size(); ++k)
                    if (ds.class_names[c] == b.class_names[k]) remap[c] = static_cast<int>(k);
                if (remap[c] < 0)
                    throw vocab_error("test label '" + ds.class_names[c] +
                                      "' not in the model's class vocabulary");
            }
            std::vector<int> y_true;
            for (int y : ds.labels) y_true.push_back(remap[static_cast<std::size_t>(y)]);
            auto pred = ensemble_predict_label(b.ensemble, ds);
            auto rep = classification_report(confusion(y_true, pred, b.class_names.size()));
            return report_dict(rep, b.class_names);
        },
        py::arg("bundle"), py::arg("dataset"),
        "Evaluate a bundle on a labeled dataset; returns the report as a dict");
}
