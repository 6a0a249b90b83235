#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <random>

#include "ovad/annotation.hpp"
#include "ovad/io.hpp"

using namespace ovad;

namespace {

const std::filesystem::path kData = OVAD_DATA_DIR;

const AttributeTaxonomy& taxonomy() {
  static const auto t = load_taxonomy(kData / "taxonomy.json");
  return t;
}

const ObjectCategory& category(std::string_view name) {
  static const auto cats = load_categories(kData / "categories.json");
  for (const auto& c : cats) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no category " + std::string(name));
}

std::size_t id(std::string_view name) {
  auto found = taxonomy().find(name);
  REQUIRE(found.has_value());
  return *found;
}

TypeSelection pick(std::string field, std::initializer_list<std::string_view> names) {
  std::set<std::size_t> ids;
  for (auto n : names) ids.insert(id(n));
  return {std::move(field), ids};
}

}  // namespace

TEST_CASE("feasible fields per object group") {
  const auto person = feasible_types(category("person"), taxonomy());
  CHECK(person.count("gender"));
  CHECK(person.count("face expression"));
  CHECK(person.count("hair color"));
  CHECK_FALSE(person.count("material"));
  CHECK_FALSE(person.count("cooked"));

  CHECK_FALSE(feasible_types(category("skateboard"), taxonomy()).count("cooked"));
  CHECK(feasible_types(category("banana"), taxonomy()).count("cooked"));
}

TEST_CASE("exclusive position: vertical excludes horizontal") {
  const std::vector<TypeSelection> sel{pick("position", {"position:vertical"})};
  const auto labels = propagate_labels(sel, category("bottle"), taxonomy());
  CHECK(labels[id("position:vertical")] == TriState::Positive);
  CHECK(labels[id("position:horizontal")] == TriState::Negative);
  CHECK(labels[id("position:sitting")] == TriState::Negative);
}

TEST_CASE("state: only the antonym becomes negative") {
  const std::vector<TypeSelection> sel{pick("state", {"state:open"})};
  const auto labels = propagate_labels(sel, category("suitcase"), taxonomy());
  CHECK(labels[id("state:open")] == TriState::Positive);
  CHECK(labels[id("state:closed")] == TriState::Negative);
  CHECK(labels[id("state:wet")] == TriState::Unknown);
  CHECK(labels[id("state:dry")] == TriState::Unknown);
  CHECK(labels[id("state:broken")] == TriState::Unknown);
}

TEST_CASE("state without an antonym only sets the positive") {
  const std::vector<TypeSelection> sel{pick("state", {"state:broken"})};
  const auto labels = propagate_labels(sel, category("chair"), taxonomy());
  for (auto m : taxonomy().members("state")) {
    CHECK(labels[m] == (m == id("state:broken") ? TriState::Positive : TriState::Unknown));
  }
}

TEST_CASE("single colour pins every other colour negative") {
  const std::vector<TypeSelection> sel{pick("color quantity", {"color quantity:single-colored"}),
                                       pick("color", {"color:red"})};
  const auto labels = propagate_labels(sel, category("car"), taxonomy());
  for (auto m : taxonomy().members("color")) {
    CHECK(labels[m] == (m == id("color:red") ? TriState::Positive : TriState::Negative));
  }
}

TEST_CASE("colour negatives depend on the colour count") {
  SUBCASE("two-colored with two picks") {
    const std::vector<TypeSelection> sel{
        pick("color quantity", {"color quantity:two-colored"}),
        pick("color", {"color:red", "color:white"})};
    const auto labels = propagate_labels(sel, category("bus"), taxonomy());
    CHECK(labels[id("color:red")] == TriState::Positive);
    CHECK(labels[id("color:white")] == TriState::Positive);
    CHECK(labels[id("color:blue")] == TriState::Negative);
  }
  SUBCASE("two-colored with one pick leaves the rest unknown") {
    const std::vector<TypeSelection> sel{
        pick("color quantity", {"color quantity:two-colored"}), pick("color", {"color:red"})};
    const auto labels = propagate_labels(sel, category("bus"), taxonomy());
    CHECK(labels[id("color:blue")] == TriState::Unknown);
  }
  SUBCASE("multicolored leaves the rest unknown") {
    const std::vector<TypeSelection> sel{
        pick("color quantity", {"color quantity:multicolored"}),
        pick("color", {"color:red", "color:green", "color:blue"})};
    const auto labels = propagate_labels(sel, category("kite"), taxonomy());
    CHECK(labels[id("color:green")] == TriState::Positive);
    CHECK(labels[id("color:black")] == TriState::Unknown);
  }
  SUBCASE("no quantity selected") {
    const std::vector<TypeSelection> sel{pick("color", {"color:red"})};
    const auto labels = propagate_labels(sel, category("kite"), taxonomy());
    CHECK(labels[id("color:black")] == TriState::Unknown);
  }
}

TEST_CASE("hair colour is its own field for people") {
  const std::vector<TypeSelection> sel{pick("hair color", {"hair color:black"})};
  const auto labels = propagate_labels(sel, category("person"), taxonomy());
  CHECK(labels[id("hair color:black")] == TriState::Positive);
  CHECK(labels[id("clothes color:black")] == TriState::Unknown);
  // plain colour is not offered for people, so it follows the infeasible policy
  CHECK(labels[id("color:black")] == TriState::Negative);
}

TEST_CASE("infeasible policy and unknown fields") {
  const std::vector<TypeSelection> sel{{"gender", std::nullopt}};
  const auto neg = propagate_labels(sel, category("person"), taxonomy());
  const auto unk =
      propagate_labels(sel, category("person"), taxonomy(), InfeasiblePolicy::Unknown);
  CHECK(neg[id("material:wooden")] == TriState::Negative);
  CHECK(unk[id("material:wooden")] == TriState::Unknown);
  CHECK(neg[id("gender:male")] == TriState::Unknown);
  CHECK(neg[id("face expression:smiling")] == TriState::Unknown);
}

TEST_CASE("selection errors") {
  const auto& cup = category("cup");
  SUBCASE("attribute outside its type") {
    const std::vector<TypeSelection> sel{{"size", std::set<std::size_t>{id("color:red")}}};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
  SUBCASE("two selections for one type") {
    const std::vector<TypeSelection> sel{pick("size", {"size:big"}), pick("size", {"size:small"})};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
  SUBCASE("infeasible type") {
    const std::vector<TypeSelection> sel{pick("gender", {"gender:male"})};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
  SUBCASE("two picks in an exclusive type") {
    const std::vector<TypeSelection> sel{pick("size", {"size:big", "size:small"})};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
  SUBCASE("unknown type") {
    const std::vector<TypeSelection> sel{{"smell", std::set<std::size_t>{0}}};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
  SUBCASE("empty choice") {
    const std::vector<TypeSelection> sel{{"size", std::set<std::size_t>{}}};
    CHECK_THROWS_AS(propagate_labels(sel, cup, taxonomy()), DataError);
  }
}

// Random feasible selections for one category.
static std::vector<TypeSelection> random_selections(std::mt19937_64& rng,
                                                    const ObjectCategory& cat) {
  const auto& t = taxonomy();
  std::vector<TypeSelection> out;
  for (const auto& field : feasible_types(cat, t)) {
    const int r = std::uniform_int_distribution<int>(0, 3)(rng);
    if (r == 0) continue;
    if (r == 1) {
      out.push_back({field, std::nullopt});
      continue;
    }
    const auto members = t.members(field);
    std::set<std::size_t> chosen{
        members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)]};
    if (t.attributes[members.front()].exclusivity == Exclusivity::ColorMultiSelect && r == 3) {
      chosen.insert(members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)]);
    }
    out.push_back({field, chosen});
  }
  return out;
}

TEST_CASE("property: full length, exclusive fields resolved, order independent") {
  std::mt19937_64 rng(11);
  const char* names[] = {"person", "dog", "pizza", "chair", "car", "banana", "cat"};
  for (int iter = 0; iter < 300; ++iter) {
    const auto& cat = category(names[iter % 7]);
    auto sel = random_selections(rng, cat);
    const auto labels = propagate_labels(sel, cat, taxonomy());
    REQUIRE(labels.size() == 117);

    for (const auto& s : sel) {
      if (!s.chosen) continue;
      const auto members = taxonomy().members(s.attr_type);
      if (taxonomy().attributes[members.front()].exclusivity != Exclusivity::Exclusive) continue;
      const auto positives = std::count_if(members.begin(), members.end(), [&](auto m) {
        return labels[m] == TriState::Positive;
      });
      const auto negatives = std::count_if(members.begin(), members.end(), [&](auto m) {
        return labels[m] == TriState::Negative;
      });
      CHECK(positives == 1);
      CHECK(negatives == static_cast<long>(members.size()) - 1);
    }

    std::shuffle(sel.begin(), sel.end(), rng);
    CHECK(propagate_labels(sel, cat, taxonomy()) == labels);
  }
}

TEST_CASE("consistency examples") {
  std::vector<std::vector<TriState>> a{std::vector<TriState>(117, TriState::Negative)};
  CHECK(annotation_consistency(a, a) == 100.0);

  auto b = a;
  for (int k = 0; k < 58; ++k) b[0][k] = TriState::Positive;
  CHECK(annotation_consistency(a, b) == doctest::Approx(100.0 * 59.0 / 117.0).epsilon(1e-12));

  std::vector<std::vector<TriState>> empty;
  CHECK_THROWS_AS(annotation_consistency(empty, empty), DataError);
  std::vector<std::vector<TriState>> blank{{}};
  CHECK_THROWS_AS(annotation_consistency(blank, blank), DataError);
  CHECK_THROWS_AS(annotation_consistency(a, empty), DataError);
}

TEST_CASE("property: consistency is symmetric and 100 only for identical sets") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> state(-1, 1);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::vector<TriState>> a(3, std::vector<TriState>(9));
    for (auto& v : a) {
      for (auto& s : v) s = tristate_from_int(state(rng));
    }
    auto b = a;
    const bool mutate = iter % 2 == 0;
    if (mutate) {
      auto& s = b[iter % 3][iter % 9];
      s = s == TriState::Positive ? TriState::Unknown : TriState::Positive;
    }
    CHECK(annotation_consistency(a, b) == annotation_consistency(b, a));
    CHECK((annotation_consistency(a, b) == 100.0) == !mutate);
  }
}
