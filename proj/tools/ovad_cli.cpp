// ovad: command-line front end for the attribute benchmark.
//
// Exit codes: 0 success, 1 data error (bad or missing input), 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ovad/annotation.hpp"
#include "ovad/caption_parts.hpp"
#include "ovad/core_types.hpp"
#include "ovad/io.hpp"
#include "ovad/metrics.hpp"
#include "ovad/report.hpp"
#include "ovad/scoring.hpp"
#include "ovad/validate.hpp"

#ifndef OVAD_DATA_DIR
#define OVAD_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::string ann;
  std::string pred;
  std::string taxonomy;
  std::string categories;
  std::string json_out;
  std::string csv_out;
  double iou = 0.5;
  double tau = 50.0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string infeasible = "neg";

  // subcommand specific
  std::string other;
  std::string boxes;
  std::string emb;
  std::string out;
  bool oracle = false;
  std::string captions;
  std::string selections;
  std::vector<double> fractions{0.05, 0.1, 0.2, 0.3};
  std::size_t trials = 10;
  std::string stability_mode = "box";
};

fs::path default_data(const char* file) { return fs::path(OVAD_DATA_DIR) / file; }

std::vector<ovad::ObjectCategory> categories_for(const Config& c) {
  if (c.categories.empty()) return ovad::load_categories(default_data("categories.json"));
  return ovad::load_categories(c.categories, /*require_full_set=*/false);
}

std::shared_ptr<const ovad::AttributeTaxonomy> taxonomy_for(const Config& c, bool required) {
  if (!c.taxonomy.empty()) {
    return std::make_shared<const ovad::AttributeTaxonomy>(ovad::load_taxonomy(c.taxonomy));
  }
  if (!required) return nullptr;
  return std::make_shared<const ovad::AttributeTaxonomy>(
      ovad::load_taxonomy(default_data("taxonomy.json")));
}

ovad::Dataset load_checked(const Config& c, const std::string& path) {
  std::vector<std::string> warnings;
  auto d = ovad::load_dataset(path, categories_for(c), taxonomy_for(c, false), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto violations = ovad::validate_dataset(d);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "error: " << v.to_string() << "\n";
    throw ovad::DataError(path + ": " + std::to_string(violations.size()) +
                          " validation error(s)");
  }
  return d;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ovad::DataError("cannot write " + path);
  out << content;
  if (!out) throw ovad::DataError("failed writing " + path);
}

void emit(const Config& c, const std::string& table, const std::string& json_text,
          const std::string& csv_text) {
  std::cout << table;
  if (!c.json_out.empty()) write_file(c.json_out, json_text);
  if (!c.csv_out.empty()) {
    if (csv_text.empty()) throw std::invalid_argument("--csv is not supported by this command");
    write_file(c.csv_out, csv_text);
  }
}

ovad::EvalOptions eval_options(const Config& c) {
  ovad::EvalOptions o;
  o.iou_threshold = c.iou;
  o.workers = c.workers;
  return o;
}

int run_eval_ovad(const Config& c) {
  const auto d = load_checked(c, c.ann);
  const auto preds = ovad::load_predictions(c.pred, d.categories.size(), d.attribute_count);
  const auto opts = eval_options(c);
  auto report = ovad::attribute_eval(d, preds, opts);
  report.ovd80 = ovad::ovd80_eval(d, preds, opts);
  emit(c, ovad::render_table(report), ovad::report_json(report, d), ovad::report_csv(report, d));
  return 0;
}

int run_eval_box(const Config& c) {
  const auto d = load_checked(c, c.ann);
  const auto scores = ovad::load_oracle_scores(c.pred, d.attribute_count);
  const auto report = ovad::box_oracle_eval(d, scores, eval_options(c));
  emit(c, ovad::render_table(report), ovad::report_json(report, d), ovad::report_csv(report, d));
  return 0;
}

int run_chance(const Config& c) {
  const auto d = load_checked(c, c.ann);
  const auto freq = ovad::positive_frequencies(d);
  const auto report = ovad::chance_report(d, ovad::frequency_splits(freq));
  emit(c, ovad::render_table(report), ovad::report_json(report, d), ovad::report_csv(report, d));
  return 0;
}

int run_stats(const Config& c) {
  const auto d = load_checked(c, c.ann);
  const auto stats = ovad::dataset_stats(d);
  emit(c, ovad::render_stats(stats), ovad::stats_json(stats), "");
  return 0;
}

int run_splits(const Config& c) {
  const auto d = load_checked(c, c.ann);
  const auto freq = ovad::positive_frequencies(d);
  const auto splits = ovad::frequency_splits(freq);
  emit(c, ovad::render_splits(splits, freq, d), ovad::splits_json(splits, freq, d), "");
  return 0;
}

int run_stability(const Config& c) {
  const auto d = load_checked(c, c.ann);
  auto opts = eval_options(c);
  // Bands stay fixed to the full dataset so subsets are comparable.
  opts.splits = ovad::frequency_splits(ovad::positive_frequencies(d));
  ovad::SubsetEvaluator evaluate;
  if (c.stability_mode == "box") {
    auto scores = std::make_shared<const ovad::OracleScores>(
        ovad::load_oracle_scores(c.pred, d.attribute_count));
    evaluate = [scores, opts](const ovad::Dataset& sub) {
      // Oracle keys are per image, so subsets keep working with the full map.
      return ovad::box_oracle_eval(sub, *scores, opts);
    };
  } else {
    auto preds = std::make_shared<const ovad::Predictions>(
        ovad::load_predictions(c.pred, d.categories.size(), d.attribute_count));
    evaluate = [preds, opts](const ovad::Dataset& sub) {
      return ovad::attribute_eval(sub, *preds, opts);
    };
  }
  const auto rows = ovad::subset_stability(d, evaluate, c.fractions, c.trials, c.seed);
  emit(c, ovad::render_stability(rows), ovad::stability_json(rows, c.seed, c.trials),
       ovad::stability_csv(rows));
  return 0;
}

// --- score -----------------------------------------------------------------

ovad::Embedding region_embedding(const json& v, const ovad::EmbeddingTable& table) {
  if (v.is_string()) return table.at(v.get<std::string>());
  return ovad::Embedding(v.get<std::vector<double>>());
}

int run_score(const Config& c) {
  const auto table = ovad::load_embeddings(c.emb);
  const auto taxonomy = taxonomy_for(c, true);
  const auto categories = categories_for(c);
  const ovad::Temperature t(c.tau);

  std::vector<ovad::ClassEmbedding> object_classes;
  for (const auto& cat : categories) {
    object_classes.push_back({cat.name, ovad::class_embedding(cat.synonyms, table)});
  }
  std::vector<ovad::ClassEmbedding> attribute_classes;
  for (const auto& a : taxonomy->attributes) {
    attribute_classes.push_back({a.name, ovad::class_embedding(a.synonyms, table)});
  }

  json boxes;
  try {
    boxes = json::parse(ovad::read_text_file(c.boxes));
  } catch (const json::exception& e) {
    throw ovad::DataError(c.boxes + ": " + e.what());
  }
  if (!boxes.is_array()) throw ovad::DataError(c.boxes + ": expected an array of boxes");

  std::vector<ovad::Embedding> regions;
  try {
    for (const auto& b : boxes) regions.push_back(region_embedding(b.at("embedding"), table));
  } catch (const json::exception& e) {
    throw ovad::DataError(c.boxes + ": " + e.what());
  }
  const auto attr = ovad::score_all(regions, attribute_classes, t, c.workers);

  auto row = [](const ovad::ScoreMatrix& m, std::size_t r) {
    return std::vector<double>(m.values.begin() + static_cast<std::ptrdiff_t>(r * m.cols),
                               m.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols));
  };

  ordered_json out = ordered_json::array();
  try {
    if (c.oracle) {
      for (std::size_t r = 0; r < boxes.size(); ++r) {
        out.push_back({{"image_id", boxes[r].at("image_id").get<ovad::ImageId>()},
                       {"instance_index", boxes[r].at("instance_index").get<std::size_t>()},
                       {"attribute_scores", row(attr, r)}});
      }
    } else {
      const auto obj = ovad::score_all(regions, object_classes, t, c.workers);
      std::map<ovad::ImageId, ordered_json> per_image;
      for (std::size_t r = 0; r < boxes.size(); ++r) {
        auto& list = per_image[boxes[r].at("image_id").get<ovad::ImageId>()];
        if (list.is_null()) list = ordered_json::array();
        list.push_back({{"bbox", boxes[r].at("bbox").get<std::vector<double>>()},
                        {"object_scores", row(obj, r)},
                        {"attribute_scores", row(attr, r)}});
      }
      for (auto& [id, list] : per_image) {
        out.push_back({{"image_id", id}, {"predictions", std::move(list)}});
      }
    }
  } catch (const json::exception& e) {
    throw ovad::DataError(c.boxes + ": " + e.what());
  }
  write_file(c.out, out.dump() + "\n");
  std::cout << "scored " << regions.size() << " boxes against " << attribute_classes.size()
            << " attributes" << (c.oracle ? "" : " and " + std::to_string(categories.size()) +
                                                     " object classes")
            << " (tau " << t.value() << ") -> " << c.out << "\n";
  return 0;
}

// --- extract-parts ---------------------------------------------------------

int run_extract_parts(const Config& c) {
  std::istringstream in(ovad::read_text_file(c.captions));
  std::vector<ovad::TaggedCaption> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      corpus.push_back(ovad::parse_tagged_caption(line));
    } catch (const std::invalid_argument& e) {
      throw ovad::DataError(c.captions + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  auto phrases = [](const std::vector<std::vector<std::string>>& list) {
    std::vector<std::string> out;
    for (const auto& p : list) out.push_back(ovad::join_words(p));
    return out;
  };
  auto joined = [](const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
    return s;
  };

  std::ostringstream table;
  ordered_json captions = ordered_json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto parts = ovad::extract_parts(corpus[i]);
    const auto np = phrases(parts.noun_phrases);
    const auto nc = phrases(parts.noun_complements);
    table << i << "\tnouns: " << joined(parts.nouns) << " | phrases: " << joined(np)
          << " | complements: " << joined(nc) << "\n";
    captions.push_back({{"nouns", parts.nouns}, {"noun_phrases", np}, {"noun_complements", nc}});
  }
  ordered_json root;
  root["schema_version"] = ovad::kReportSchemaVersion;
  root["captions"] = std::move(captions);
  root["adjective_counts"] = ovad::count_adjectives(corpus);
  emit(c, table.str(), root.dump(2) + "\n", "");
  return 0;
}

// --- propagate -------------------------------------------------------------

std::size_t resolve_attribute(const json& ref, const std::string& field,
                              const ovad::AttributeTaxonomy& taxonomy) {
  const auto members = taxonomy.members(field);
  if (ref.is_number_integer()) {
    const auto id = ref.get<std::size_t>();
    if (id >= taxonomy.size()) throw ovad::DataError("attribute id " + std::to_string(id) +
                                                     " is out of range");
    return id;
  }
  const auto name = ref.get<std::string>();
  if (auto id = taxonomy.find(name)) return *id;
  for (auto id : members) {
    for (const auto& s : taxonomy.attributes[id].synonyms) {
      if (s == name) return id;
    }
  }
  throw ovad::DataError("'" + name + "' is not an attribute of field '" + field + "'");
}

int run_propagate(const Config& c) {
  const auto taxonomy = taxonomy_for(c, true);
  const auto categories = categories_for(c);
  const auto policy =
      c.infeasible == "unk" ? ovad::InfeasiblePolicy::Unknown : ovad::InfeasiblePolicy::Negative;

  json records;
  try {
    records = json::parse(ovad::read_text_file(c.selections));
  } catch (const json::exception& e) {
    throw ovad::DataError(c.selections + ": " + e.what());
  }
  if (!records.is_array()) throw ovad::DataError(c.selections + ": expected an array");

  std::ostringstream table;
  ordered_json out = ordered_json::array();
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto where = c.selections + " record " + std::to_string(r) + ": ";
    try {
      const auto& rec = records[r];
      const auto cat_id = rec.at("category_id").get<ovad::CategoryId>();
      const ovad::ObjectCategory* category = nullptr;
      for (const auto& cat : categories) {
        if (cat.id == cat_id) category = &cat;
      }
      if (!category) throw ovad::DataError("unknown category_id " + std::to_string(cat_id));

      std::vector<ovad::TypeSelection> selections;
      for (const auto& [field, chosen] : rec.at("selections").items()) {
        ovad::TypeSelection s{field, std::nullopt};
        if (!chosen.is_null()) {
          s.chosen.emplace();
          const json list = chosen.is_array() ? chosen : json::array({chosen});
          for (const auto& ref : list) s.chosen->insert(resolve_attribute(ref, field, *taxonomy));
        }
        selections.push_back(std::move(s));
      }
      const auto labels = ovad::propagate_labels(selections, *category, *taxonomy, policy);

      ordered_json o = ordered_json::object();
      for (const auto& [key, value] : rec.items()) {
        if (key != "selections") o[key] = value;
      }
      std::vector<int> att_vec;
      std::size_t pos = 0, neg = 0, unk = 0;
      for (auto l : labels) {
        att_vec.push_back(ovad::to_int(l));
        pos += l == ovad::TriState::Positive;
        neg += l == ovad::TriState::Negative;
        unk += l == ovad::TriState::Unknown;
      }
      o["att_vec"] = att_vec;
      out.push_back(std::move(o));
      table << r << "\t" << category->name << "\t+" << pos << " -" << neg << " ?" << unk << "\n";
    } catch (const json::exception& e) {
      throw ovad::DataError(where + e.what());
    } catch (const ovad::DataError& e) {
      throw ovad::DataError(where + e.what());
    }
  }
  emit(c, table.str(), out.dump() + "\n", "");
  return 0;
}

// --- validate --------------------------------------------------------------

int run_validate(const Config& c) {
  std::vector<std::string> warnings;
  const auto d = ovad::load_dataset(c.ann, categories_for(c), taxonomy_for(c, false), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto violations = ovad::validate_dataset(d);

  std::ostringstream table;
  ordered_json root;
  root["schema_version"] = ovad::kReportSchemaVersion;
  root["images"] = d.images.size();
  root["instances"] = d.instance_count();
  root["warnings"] = warnings;
  ordered_json errs = ordered_json::array();
  for (const auto& v : violations) errs.push_back(v.to_string());
  root["violations"] = std::move(errs);
  table << c.ann << ": " << d.images.size() << " images, " << d.instance_count()
        << " instances, " << violations.size() << " violation(s)\n";
  for (const auto& v : violations) table << "  " << v.to_string() << "\n";

  if (!c.other.empty()) {
    const auto o = ovad::load_dataset(c.other, categories_for(c), taxonomy_for(c, false));
    std::map<ovad::ImageId, const ovad::AnnotatedImage*> by_id;
    for (const auto& img : o.images) by_id[img.id] = &img;
    if (by_id.size() != d.images.size()) {
      throw ovad::DataError("annotation files cover different image sets");
    }
    std::vector<std::vector<ovad::TriState>> a, b;
    for (const auto& img : d.images) {
      auto it = by_id.find(img.id);
      if (it == by_id.end() || it->second->instances.size() != img.instances.size()) {
        throw ovad::DataError("image " + std::to_string(img.id) +
                              " differs between the annotation files");
      }
      for (std::size_t i = 0; i < img.instances.size(); ++i) {
        a.push_back(img.instances[i].labels);
        b.push_back(it->second->instances[i].labels);
      }
    }
    const double consistency = ovad::annotation_consistency(a, b);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", consistency);
    table << "consistency with " << c.other << ": " << buf << "%\n";
    root["consistency"] = consistency;
  }
  emit(c, table.str(), root.dump(2) + "\n", "");
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-vocabulary attribute detection benchmark tools", "ovad"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--categories", c.categories,
                    "Object category file (default: bundled COCO-80)");
    sub->add_option("--taxonomy", c.taxonomy, "Attribute taxonomy file");
    sub->add_option("--json", c.json_out, "Write the JSON report here");
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  };
  auto add_eval = [&](CLI::App* sub, bool needs_pred) {
    add_common(sub);
    sub->add_option("--ann", c.ann, "Annotation file")->required();
    if (needs_pred) {
      sub->add_option("--pred", c.pred, "Prediction or oracle score file")->required();
    }
    const CLI::Validator unit_interval(
        [](std::string& v) {
          double x = 0.0;
          if (!CLI::detail::lexical_cast(v, x)) return std::string("not a number");
          return x > 0.0 && x <= 1.0 ? std::string() : "must lie in (0, 1]";
        },
        "(0,1]");
    sub->add_option("--iou", c.iou, "IoU threshold for matching")->check(unit_interval);
    sub->add_option("--csv", c.csv_out, "Write the CSV report here");
  };

  std::map<CLI::App*, std::function<int(const Config&)>> actions;

  auto* eval_ovad = app.add_subcommand("eval-ovad", "Attribute mAP on detections plus OVD-80");
  add_eval(eval_ovad, true);
  actions[eval_ovad] = run_eval_ovad;

  auto* eval_box = app.add_subcommand("eval-box", "Attribute mAP on ground-truth boxes");
  add_eval(eval_box, true);
  actions[eval_box] = run_eval_box;

  auto* chance = app.add_subcommand("chance", "Attribute mAP of a constant scorer");
  add_eval(chance, false);
  actions[chance] = run_chance;

  auto* stats = app.add_subcommand("stats", "Annotation statistics");
  add_common(stats);
  stats->add_option("--ann", c.ann, "Annotation file")->required();
  actions[stats] = run_stats;

  auto* splits = app.add_subcommand("splits", "Head/medium/tail attribute bands");
  add_common(splits);
  splits->add_option("--ann", c.ann, "Annotation file")->required();
  actions[splits] = run_splits;

  auto* stability = app.add_subcommand("stability", "Std of mAP over disjoint image subsets");
  add_eval(stability, true);
  stability->add_option("--fractions", c.fractions, "Subset sizes as fractions of the images")
      ->delimiter(',');
  stability->add_option("--trials", c.trials, "Reshuffles per fraction")
      ->check(CLI::PositiveNumber);
  stability->add_option("--seed", c.seed, "Seed for the MT19937-64 shuffles");
  stability->add_option("--mode", c.stability_mode, "box (oracle scores) or det (detections)")
      ->check(CLI::IsMember({"box", "det"}));
  actions[stability] = run_stability;

  auto* score = app.add_subcommand("score", "Score box embeddings against class embeddings");
  add_common(score);
  score->add_option("--boxes", c.boxes, "Box file with embeddings")->required();
  score->add_option("--emb", c.emb, "Text embedding table (binary or JSON)")->required();
  score->add_option("--out", c.out, "Output prediction file")->required();
  score->add_option("--tau", c.tau, "Temperature");
  score->add_flag("--oracle", c.oracle, "Emit box-oracle scores keyed by instance_index");
  actions[score] = run_score;

  auto* parts = app.add_subcommand("extract-parts", "Nouns, noun phrases and complements");
  parts->add_option("--captions", c.captions, "POS-tagged captions, one per line")->required();
  parts->add_option("--json", c.json_out, "Write the parts file here");
  actions[parts] = run_extract_parts;

  auto* propagate = app.add_subcommand("propagate", "Expand field selections into att_vec labels");
  add_common(propagate);
  propagate->add_option("--selections", c.selections, "Selection file")->required();
  propagate->add_option("--infeasible", c.infeasible, "Label for infeasible fields")
      ->check(CLI::IsMember({"neg", "unk"}));
  actions[propagate] = run_propagate;

  auto* validate = app.add_subcommand("validate", "Check an annotation file");
  add_common(validate);
  validate->add_option("--ann", c.ann, "Annotation file")->required();
  validate->add_option("--other", c.other, "Second annotation of the same images");
  actions[validate] = run_validate;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (auto& [sub, action] : actions) {
      if (sub->parsed()) return action(c);
    }
  } catch (const ovad::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
