#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ovad/core_types.hpp"

namespace ovad {

class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::vector<double> values);

  std::size_t dimension() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double norm() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
};

/// Text and region embeddings keyed by name; all of one dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view name) const;
  const Embedding& at(std::string_view name) const;
  void insert(std::string name, Embedding e);
  const std::map<std::string, Embedding, std::less<>>& entries() const { return entries_; }

 private:
  std::size_t dimension_;
  std::map<std::string, Embedding, std::less<>> entries_;
};

// Binary layout (little endian): u32 dimension, u32 count, then per record
// u32 name length, name bytes (UTF-8), dimension x f32.
// JSON layout: {"dimension": d, "entries": {"name": [d numbers], ...}}.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
EmbeddingTable parse_embeddings_json(std::string_view json_text);

class Temperature {
 public:
  explicit Temperature(double tau = 50.0);
  double value() const { return tau_; }

 private:
  double tau_;
};

double sigmoid(double z);
double cosine_similarity(const Embedding& a, const Embedding& b);

/// sigmoid(tau * cos(f, g)). Throws std::invalid_argument on zero norm or
/// mismatched dimensions.
double match_score(const Embedding& f, const Embedding& g, Temperature t = Temperature{});

/// Mean of the synonym vectors, not renormalised.
Embedding class_embedding(std::span<const std::string> synonyms, const EmbeddingTable& table);

struct ClassEmbedding {
  std::string name;
  Embedding embedding;
};

struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> column_names;
  std::vector<double> values;  // row major

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Independent sigmoid score for every (box, class) pair; no softmax.
ScoreMatrix score_all(std::span<const Embedding> boxes, std::span<const ClassEmbedding> classes,
                      Temperature t = Temperature{}, unsigned workers = 0);

inline constexpr double kLossEpsilon = 1e-7;

/// Binary cross entropy of a probability; s is clamped to [eps, 1 - eps].
double itc_loss(double s, int y);

/// Binary cross entropy of sigmoid(z), evaluated without forming sigmoid(z).
double bce_with_logit(double z, int y);

struct LabeledEmbedding {
  Embedding text;
  int label = 0;
};

/// Mean BCE of match_score(box, text) against each label.
double pairwise_bce_loss(const Embedding& box, std::span<const LabeledEmbedding> pairs,
                         Temperature t = Temperature{});

/// Closed-form gradient of pairwise_bce_loss with respect to the box
/// embedding.
std::vector<double> pairwise_bce_gradient(const Embedding& box,
                                          std::span<const LabeledEmbedding> pairs,
                                          Temperature t = Temperature{});

/// Image-caption loss: one positive caption and its negatives, all scored
/// against the whole-image box embedding.
double caption_batch_loss(const Embedding& image, std::string_view positive_caption,
                          std::span<const std::string> negative_captions,
                          const EmbeddingTable& table, Temperature t = Temperature{});

/// Parts-of-caption loss against the largest predicted box.
double proxy_parts_loss(const Embedding& max_area_box, std::span<const std::string> positive_parts,
                        std::span<const std::string> negative_parts,
                        const EmbeddingTable& table, Temperature t = Temperature{});

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
};

/// Compares pairwise_bce_gradient with central differences of
/// pairwise_bce_loss. Per coordinate the error is |a - n| / max(|a|, |n|,
/// 1e-6), so coordinates with a vanishing gradient are compared absolutely.
GradCheckResult grad_check(const Embedding& box, std::span<const LabeledEmbedding> pairs,
                           Temperature t, double epsilon);

}  // namespace ovad
