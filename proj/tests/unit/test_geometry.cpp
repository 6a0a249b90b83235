#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "generators.hpp"
#include "oracles.hpp"
#include "ovad/geometry.hpp"

using namespace ovad;

namespace {

AnnotatedInstance gt(BoundingBox b, CategoryId c = 1) { return {b, c, {}}; }

PredictedInstance pred(BoundingBox b, double score = 0.5) { return {b, {score}, {}}; }

}  // namespace

TEST_CASE("iou hand cases") {
  CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(iou({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
  CHECK(iou({0, 0, 10, 10}, {5, 5, 10, 10}) == doctest::Approx(25.0 / 175.0).epsilon(1e-15));
  CHECK(std::abs(iou({0, 0, 10, 10}, {5, 5, 10, 10}) - oracle::iou_by_cells({0, 0, 10, 10},
                                                                          {5, 5, 10, 10})) <
        1e-12);
  // touching edges share no area
  CHECK(iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);
}

TEST_CASE("property: iou matches unit-cell counting on integer boxes") {
  testgen::Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto a = testgen::integer_box(rng, 24);
    const auto b = testgen::integer_box(rng, 24);
    CHECK(std::abs(iou(a, b) - oracle::iou_by_cells(a, b)) < 1e-12);
  }
}

TEST_CASE("property: symmetry, identity, range and translation") {
  testgen::Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto a = testgen::real_box(rng, 200.0);
    const auto b = testgen::real_box(rng, 200.0);
    const double v = iou(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == iou(b, a));
    CHECK(iou(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    const double dx = testgen::uniform(rng, -50, 50), dy = testgen::uniform(rng, -50, 50);
    const BoundingBox a2{a.x + dx, a.y + dy, a.w, a.h}, b2{b.x + dx, b.y + dy, b.w, b.h};
    CHECK(std::abs(iou(a2, b2) - v) < 1e-9);
  }
}

TEST_CASE("attribute matching examples") {
  const std::vector<AnnotatedInstance> one{gt({0, 0, 10, 10})};
  // IoU 0.6: overlap 10x6 over union 100
  SUBCASE("single match at 0.6") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 6})};
    const auto m = match_for_attributes(one, p);
    REQUIRE(m[0]);
    CHECK(m[0]->prediction == 0);
    CHECK(m[0]->iou == doctest::Approx(0.6));
  }
  SUBCASE("argmax wins") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 6}), pred({0, 0, 10, 8})};
    const auto m = match_for_attributes(one, p);
    REQUIRE(m[0]);
    CHECK(m[0]->prediction == 1);
  }
  SUBCASE("below threshold") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 4})};
    CHECK_FALSE(match_for_attributes(one, p)[0]);
  }
  SUBCASE("exact threshold matches") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 5})};
    CHECK(match_for_attributes(one, p)[0]);
  }
  SUBCASE("ties go to the lowest index") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 8}), pred({0, 2, 10, 8})};
    CHECK(match_for_attributes(one, p)[0]->prediction == 0);
  }
  SUBCASE("no predictions") { CHECK_FALSE(match_for_attributes(one, {})[0]); }
}

TEST_CASE("one prediction may serve two ground truths") {
  const std::vector<AnnotatedInstance> gts{gt({0, 0, 10, 10}), gt({0, 0, 10, 9})};
  const std::vector<PredictedInstance> p{pred({0, 0, 10, 10}), pred({50, 50, 10, 10})};
  const auto m = match_for_attributes(gts, p);
  REQUIRE(m[0]);
  REQUIRE(m[1]);
  CHECK(m[0]->prediction == 0);
  CHECK(m[1]->prediction == 0);
}

TEST_CASE("attribute matching rejects bad thresholds") {
  CHECK_THROWS_AS(match_for_attributes({}, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(match_for_attributes({}, {}, 1.5), std::invalid_argument);
}

TEST_CASE("property: recorded match attains the maximum IoU") {
  testgen::Rng rng(8);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<AnnotatedInstance> gts;
    std::vector<PredictedInstance> preds;
    for (int k = testgen::uniform_int(rng, 0, 5); k > 0; --k) gts.push_back(gt(testgen::real_box(rng, 60)));
    for (int k = testgen::uniform_int(rng, 0, 6); k > 0; --k) preds.push_back(pred(testgen::real_box(rng, 60)));
    const auto m = match_for_attributes(gts, preds);
    const auto expect = oracle::attribute_matches(gts, preds, 0.5);
    REQUIRE(m.size() == gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
      CHECK(m[g].has_value() == expect[g].has_value());
      if (m[g] && expect[g]) CHECK(m[g]->prediction == *expect[g]);
    }
  }
}

TEST_CASE("detection matching examples") {
  const std::vector<AnnotatedInstance> gts{gt({0, 0, 10, 10}), gt({30, 30, 10, 10})};
  SUBCASE("perfect one-to-one") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 10}, 0.9), pred({30, 30, 10, 10}, 0.8)};
    CHECK(match_for_detection(gts, p, 1, 0) == std::vector<bool>{true, true});
  }
  SUBCASE("duplicate: higher score wins") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 10}, 0.4), pred({0, 0, 10, 9}, 0.9)};
    CHECK(match_for_detection(gts, p, 1, 0) == std::vector<bool>{false, true});
  }
  SUBCASE("other category is invisible") {
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 10}, 0.9)};
    CHECK(match_for_detection(gts, p, 2, 0) == std::vector<bool>{false});
  }
  SUBCASE("claims the best unclaimed ground truth") {
    const std::vector<AnnotatedInstance> close{gt({0, 0, 10, 10}), gt({0, 1, 10, 10})};
    const std::vector<PredictedInstance> p{pred({0, 0, 10, 10}, 0.9), pred({0, 0, 10, 10}, 0.8)};
    CHECK(match_for_detection(close, p, 1, 0) == std::vector<bool>{true, true});
  }
}

TEST_CASE("property: detection matching equals the brute-force greedy order") {
  testgen::Rng rng(21);
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<AnnotatedInstance> gts;
    std::vector<PredictedInstance> preds;
    for (int k = 0; k < 3; ++k) gts.push_back(gt(testgen::real_box(rng, 30), testgen::uniform_int(rng, 1, 2)));
    for (int k = 0; k < 3; ++k) {
      preds.push_back(pred(testgen::real_box(rng, 30), testgen::uniform_int(rng, 0, 3) / 3.0));
    }
    const auto flags = match_for_detection(gts, preds, 1, 0, 0.3);
    CHECK(flags == oracle::detection_flags(gts, preds, 1, 0, 0.3));

    const auto tp = std::count(flags.begin(), flags.end(), true);
    const auto same_cat = std::count_if(gts.begin(), gts.end(), [](auto& g) { return g.category == 1; });
    CHECK(tp <= same_cat);  // no ground truth claimed twice
  }
}

TEST_CASE("property: flags follow their predictions under input permutation") {
  testgen::Rng rng(22);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<AnnotatedInstance> gts;
    std::vector<PredictedInstance> preds;
    for (int k = 0; k < 4; ++k) gts.push_back(gt(testgen::real_box(rng, 30)));
    for (int k = 0; k < 5; ++k) {
      // distinct scores, so the visiting order does not depend on input order
      preds.push_back(pred(testgen::real_box(rng, 30), 0.1 * k + testgen::uniform(rng, 0, 0.05)));
    }
    const auto flags = match_for_detection(gts, preds, 1, 0);
    std::vector<std::size_t> perm(preds.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<PredictedInstance> shuffled;
    for (auto p : perm) shuffled.push_back(preds[p]);
    const auto again = match_for_detection(gts, shuffled, 1, 0);
    for (std::size_t k = 0; k < perm.size(); ++k) CHECK(again[k] == flags[perm[k]]);
  }
}
