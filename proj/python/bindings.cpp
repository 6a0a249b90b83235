#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ovad/caption_parts.hpp"
#include "ovad/geometry.hpp"
#include "ovad/io.hpp"
#include "ovad/metrics.hpp"
#include "ovad/report.hpp"
#include "ovad/scoring.hpp"
#include "ovad/validate.hpp"

namespace py = pybind11;
using namespace ovad;

namespace {

Dataset load_valid(const std::filesystem::path& ann, const std::filesystem::path& categories) {
  auto d = load_dataset(ann, load_categories(categories, false), nullptr);
  const auto violations = validate_dataset(d);
  if (!violations.empty()) {
    throw DataError(ann.string() + ": " + violations.front().to_string() + " (" +
                    std::to_string(violations.size()) + " violation(s))");
  }
  return d;
}

BoundingBox to_box(const std::vector<double>& v) {
  if (v.size() != 4) throw std::invalid_argument("a box is [x, y, w, h]");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

PYBIND11_MODULE(_ovad, m) {
  m.doc() = "Attribute detection metrics";
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("iou", [](const std::vector<double>& a, const std::vector<double>& b) {
    return iou(to_box(a), to_box(b));
  }, py::arg("a"), py::arg("b"));

  m.def(
      "average_precision",
      [](const std::vector<double>& scores, const std::vector<bool>& positive,
         std::size_t ghost_positives) -> std::optional<double> {
        if (scores.size() != positive.size()) {
          throw std::invalid_argument("scores and labels differ in length");
        }
        RankedSamples s;
        s.ghost_positives = ghost_positives;
        for (std::size_t i = 0; i < scores.size(); ++i) s.entries.push_back({scores[i], positive[i]});
        return average_precision(s);
      },
      py::arg("scores"), py::arg("positive"), py::arg("ghost_positives") = 0);

  m.def(
      "frequency_splits",
      [](const std::vector<double>& freq) {
        const auto s = frequency_splits(freq);
        py::dict out;
        out["head"] = s.head;
        out["medium"] = s.medium;
        out["tail"] = s.tail;
        out["t_high"] = s.t_high;
        out["t_low"] = s.t_low;
        return out;
      },
      py::arg("frequencies"));

  m.def("sigmoid", &sigmoid, py::arg("z"));
  m.def(
      "match_score",
      [](const std::vector<double>& f, const std::vector<double>& g, double tau) {
        return match_score(Embedding(f), Embedding(g), Temperature(tau));
      },
      py::arg("region"), py::arg("text"), py::arg("tau") = 50.0);

  m.def(
      "extract_parts",
      [](const std::string& tagged) {
        const auto p = extract_parts(parse_tagged_caption(tagged));
        auto joined = [](const std::vector<std::vector<std::string>>& v) {
          std::vector<std::string> out;
          for (const auto& x : v) out.push_back(join_words(x));
          return out;
        };
        py::dict out;
        out["nouns"] = p.nouns;
        out["noun_phrases"] = joined(p.noun_phrases);
        out["noun_complements"] = joined(p.noun_complements);
        return out;
      },
      py::arg("tagged_caption"));

  m.def(
      "evaluate_json",
      [](const std::filesystem::path& ann, const std::filesystem::path& pred,
         const std::filesystem::path& categories, const std::string& mode, double iou_threshold,
         unsigned workers) {
        const auto d = load_valid(ann, categories);
        EvalOptions opts;
        opts.iou_threshold = iou_threshold;
        opts.workers = workers;
        py::gil_scoped_release release;
        EvalReport report;
        if (mode == "detection") {
          const auto preds = load_predictions(pred, d.categories.size(), d.attribute_count);
          report = attribute_eval(d, preds, opts);
          report.ovd80 = ovd80_eval(d, preds, opts);
        } else if (mode == "box") {
          report = box_oracle_eval(d, load_oracle_scores(pred, d.attribute_count), opts);
        } else {
          throw std::invalid_argument("mode must be 'detection' or 'box'");
        }
        return report_json(report, d);
      },
      py::arg("ann"), py::arg("pred"), py::arg("categories"), py::arg("mode") = "detection",
      py::arg("iou_threshold") = 0.5, py::arg("workers") = 0);

  m.def(
      "stats_json",
      [](const std::filesystem::path& ann, const std::filesystem::path& categories) {
        return stats_json(dataset_stats(load_valid(ann, categories)));
      },
      py::arg("ann"), py::arg("categories"));
}
