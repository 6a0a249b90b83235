#include "ovad/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ovad {

using nlohmann::ordered_json;

namespace {

std::string pct(const std::optional<double>& v, int width) {
  char buf[32];
  if (v) {
    std::snprintf(buf, sizeof buf, "%*.1f", width, 100.0 * *v);
  } else {
    std::snprintf(buf, sizeof buf, "%*s", width, "-");
  }
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json split_json(const SplitMeans& m) {
  return {{"all", opt(m.all)}, {"head", opt(m.head)}, {"medium", opt(m.medium)},
          {"tail", opt(m.tail)}};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string attribute_type(const Dataset& d, std::size_t a) {
  if (d.taxonomy && a < d.taxonomy->size()) return d.taxonomy->attributes[a].type;
  return "";
}

}  // namespace

std::vector<std::pair<std::string, std::optional<double>>> per_type_means(
    const EvalReport& report, const AttributeTaxonomy& taxonomy) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  for (const auto& type : taxonomy.types) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : taxonomy.attributes) {
      if (a.type == type && a.id < report.per_attribute_ap.size() &&
          report.per_attribute_ap[a.id]) {
        sum += *report.per_attribute_ap[a.id];
        ++n;
      }
    }
    out.emplace_back(type, n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
  }
  return out;
}

std::string render_table(const EvalReport& r) {
  std::ostringstream out;
  const bool ovd = r.ovd80.has_value();
  out << "OVAD attribute mAP (" << to_string(r.mode) << ")";
  if (ovd) out << "        | Generalized OVD-80 AP50";
  out << "\n    All   Head Medium   Tail";
  if (ovd) out << "        | Novel(32) Base(48)  All(80)";
  out << "\n" << pct(r.map.all, 7) << pct(r.map.head, 7) << pct(r.map.medium, 7)
      << pct(r.map.tail, 7);
  if (ovd) {
    out << "        |" << pct(r.ovd80->novel, 10) << pct(r.ovd80->base, 9)
        << pct(r.ovd80->all, 9);
  }
  std::size_t skipped = 0;
  for (const auto& ap : r.per_attribute_ap) skipped += !ap.has_value();
  out << "\nattributes: " << r.per_attribute_ap.size() << " (head " << r.splits.head.size()
      << ", medium " << r.splits.medium.size() << ", tail " << r.splits.tail.size()
      << "); skipped without positives: " << skipped << "\n";
  return out.str();
}

std::string report_json(const EvalReport& r, const Dataset& d) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["mode"] = std::string(to_string(r.mode));
  root["map"] = split_json(r.map);
  root["splits"] = {{"t_high", r.splits.t_high},
                    {"t_low", r.splits.t_low},
                    {"head", r.splits.head},
                    {"medium", r.splits.medium},
                    {"tail", r.splits.tail}};
  const auto bands = r.splits.bands();
  ordered_json attrs = ordered_json::array();
  for (std::size_t a = 0; a < r.per_attribute_ap.size(); ++a) {
    ordered_json ja = {{"id", a}, {"name", d.attribute_name(a)}};
    if (d.taxonomy) ja["type"] = attribute_type(d, a);
    if (a < bands.size()) ja["split"] = std::string(to_string(bands[a]));
    if (a < r.counts.size()) {
      ja["positives"] = r.counts[a].positives;
      ja["negatives"] = r.counts[a].negatives;
    }
    ja["ap"] = opt(r.per_attribute_ap[a]);
    attrs.push_back(std::move(ja));
  }
  root["per_attribute"] = std::move(attrs);
  if (d.taxonomy) {
    ordered_json types = ordered_json::object();
    for (const auto& [type, mean] : per_type_means(r, *d.taxonomy)) types[type] = opt(mean);
    root["per_type"] = std::move(types);
  }
  if (r.ovd80) {
    ordered_json cats = ordered_json::array();
    for (std::size_t c = 0; c < r.ovd80->per_category.size() && c < d.categories.size(); ++c) {
      cats.push_back({{"id", d.categories[c].id},
                      {"name", d.categories[c].name},
                      {"split", std::string(to_string(d.categories[c].split))},
                      {"ap50", opt(r.ovd80->per_category[c])}});
    }
    root["ovd80"] = {{"novel", opt(r.ovd80->novel)},
                     {"base", opt(r.ovd80->base)},
                     {"all", opt(r.ovd80->all)},
                     {"per_category", std::move(cats)}};
  }
  return root.dump(2) + "\n";
}

std::string report_csv(const EvalReport& r, const Dataset& d) {
  std::ostringstream out;
  out << "kind,key,name,type,split,positives,negatives,value\n";
  const auto bands = r.splits.bands();
  for (std::size_t a = 0; a < r.per_attribute_ap.size(); ++a) {
    out << "attribute," << a << ',' << csv_escape(d.attribute_name(a)) << ','
        << csv_escape(attribute_type(d, a)) << ','
        << (a < bands.size() ? to_string(bands[a]) : "") << ','
        << (a < r.counts.size() ? r.counts[a].positives : 0) << ','
        << (a < r.counts.size() ? r.counts[a].negatives : 0) << ','
        << csv_value(r.per_attribute_ap[a]) << '\n';
  }
  if (d.taxonomy) {
    for (const auto& [type, mean] : per_type_means(r, *d.taxonomy)) {
      out << "type," << csv_escape(type) << ',' << csv_escape(type) << ',' << csv_escape(type)
          << ",,,," << csv_value(mean) << '\n';
    }
  }
  const std::pair<const char*, std::optional<double>> summary[] = {
      {"all", r.map.all}, {"head", r.map.head}, {"medium", r.map.medium}, {"tail", r.map.tail}};
  for (const auto& [key, v] : summary) {
    out << "map," << key << ",,," << key << ",,," << csv_value(v) << '\n';
  }
  if (r.ovd80) {
    const std::pair<const char*, std::optional<double>> ovd[] = {
        {"novel", r.ovd80->novel}, {"base", r.ovd80->base}, {"all", r.ovd80->all}};
    for (const auto& [key, v] : ovd) out << "ovd80," << key << ",,,,,," << csv_value(v) << '\n';
  }
  return out.str();
}

std::vector<std::string> release_notes(const DatasetStats& s) {
  using R = ReleaseReference;
  std::vector<std::string> notes;
  if (s.images != R::images || s.instances != R::instances) return notes;
  auto compare_count = [&](const char* what, std::size_t computed, std::size_t published) {
    if (computed != published) {
      notes.push_back(std::string("[flag] ") + what + ": computed " + std::to_string(computed) +
                      ", published " + std::to_string(published));
    }
  };
  compare_count("positives", s.positives, R::positives);
  compare_count("negatives", s.negatives, R::negatives);
  compare_count("unknowns", s.unknowns, R::unknowns);
  auto compare_mean = [&](const char* what, const std::optional<double>& computed,
                          double published) {
    if (computed && std::abs(*computed - published) >= 0.05) {
      notes.push_back(std::string("[flag] ") + what + ": computed " + fixed(*computed, 2) +
                      ", published " + fixed(published, 1));
    }
  };
  compare_mean("objects per image", s.instances_per_image, R::instances_per_image);
  compare_mean("attribute annotations per image", s.annotations_per_image,
               R::annotations_per_image);
  compare_mean("attribute annotations per box", s.annotations_per_box, R::annotations_per_box);
  compare_mean("positives per box", s.positives_per_box, R::positives_per_box);
  compare_mean("negatives per box", s.negatives_per_box, R::negatives_per_box);
  return notes;
}

std::string render_stats(const DatasetStats& s) {
  std::ostringstream out;
  auto mean = [](const std::optional<double>& v) { return v ? fixed(*v, 2) : std::string("-"); };
  out << "images                " << s.images << "\n"
      << "instances             " << s.instances << "\n"
      << "attribute annotations " << s.annotations() << " (+" << s.positives << " / -"
      << s.negatives << ")\n"
      << "unknown labels        " << s.unknowns << "\n"
      << "objects per image     " << mean(s.instances_per_image) << "\n"
      << "annotations per image " << mean(s.annotations_per_image) << " (+"
      << mean(s.positives_per_image) << " / -" << mean(s.negatives_per_image) << ")\n"
      << "annotations per box   " << mean(s.annotations_per_box) << " (+"
      << mean(s.positives_per_box) << " / -" << mean(s.negatives_per_box) << ")\n";
  for (const auto& note : release_notes(s)) out << note << "\n";
  return out.str();
}

std::string stats_json(const DatasetStats& s) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["images"] = s.images;
  root["instances"] = s.instances;
  root["positives"] = s.positives;
  root["negatives"] = s.negatives;
  root["unknowns"] = s.unknowns;
  root["annotations"] = s.annotations();
  root["instances_per_image"] = opt(s.instances_per_image);
  root["annotations_per_image"] = opt(s.annotations_per_image);
  root["positives_per_image"] = opt(s.positives_per_image);
  root["negatives_per_image"] = opt(s.negatives_per_image);
  root["annotations_per_box"] = opt(s.annotations_per_box);
  root["positives_per_box"] = opt(s.positives_per_box);
  root["negatives_per_box"] = opt(s.negatives_per_box);
  root["notes"] = release_notes(s);
  return root.dump(2) + "\n";
}

std::string render_splits(const FrequencySplits& s, std::span<const double> freq,
                          const Dataset& d) {
  std::ostringstream out;
  out << "t_high " << fixed(s.t_high, 4) << "  t_low " << fixed(s.t_low, 4) << "\n"
      << "head " << s.head.size() << "  medium " << s.medium.size() << "  tail "
      << s.tail.size() << "\n";
  const auto bands = s.bands();
  for (std::size_t a = 0; a < bands.size(); ++a) {
    out << to_string(bands[a]) << "\t" << (a < freq.size() ? freq[a] : 0.0) << "\t"
        << d.attribute_name(a) << "\n";
  }
  return out.str();
}

std::string splits_json(const FrequencySplits& s, std::span<const double> freq,
                        const Dataset& d) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["t_high"] = s.t_high;
  root["t_low"] = s.t_low;
  root["counts"] = {{"head", s.head.size()}, {"medium", s.medium.size()},
                    {"tail", s.tail.size()}};
  ordered_json attrs = ordered_json::array();
  const auto bands = s.bands();
  for (std::size_t a = 0; a < bands.size(); ++a) {
    attrs.push_back({{"id", a},
                     {"name", d.attribute_name(a)},
                     {"positives", a < freq.size() ? freq[a] : 0.0},
                     {"split", std::string(to_string(bands[a]))}});
  }
  root["attributes"] = std::move(attrs);
  return root.dump(2) + "\n";
}

std::string render_stability(std::span<const StabilityRow> rows) {
  std::ostringstream out;
  out << "fraction  images  subsets   std(All)  std(Head)  std(Medium)  std(Tail)\n";
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%8.3f %7zu %8zu", r.fraction, r.subset_size, r.subsets);
    out << buf << pct(r.std_dev.all, 11) << pct(r.std_dev.head, 11) << pct(r.std_dev.medium, 13)
        << pct(r.std_dev.tail, 11) << "\n";
  }
  return out.str();
}

std::string stability_json(std::span<const StabilityRow> rows, std::uint64_t seed,
                           std::size_t trials) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["seed"] = seed;
  root["trials"] = trials;
  root["prng"] = "mt19937_64";
  ordered_json list = ordered_json::array();
  for (const auto& r : rows) {
    list.push_back({{"fraction", r.fraction},
                    {"subset_size", r.subset_size},
                    {"subsets", r.subsets},
                    {"std", split_json(r.std_dev)}});
  }
  root["rows"] = std::move(list);
  return root.dump(2) + "\n";
}

std::string stability_csv(std::span<const StabilityRow> rows) {
  std::ostringstream out;
  out << "fraction,subset_size,subsets,std_all,std_head,std_medium,std_tail\n";
  for (const auto& r : rows) {
    out << csv_value(r.fraction) << ',' << r.subset_size << ',' << r.subsets << ','
        << csv_value(r.std_dev.all) << ',' << csv_value(r.std_dev.head) << ','
        << csv_value(r.std_dev.medium) << ',' << csv_value(r.std_dev.tail) << '\n';
  }
  return out.str();
}

}  // namespace ovad
