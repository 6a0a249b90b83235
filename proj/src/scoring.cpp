#include "ovad/scoring.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "ovad/io.hpp"
#include "ovad/parallel.hpp"

namespace ovad {

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("embedding has a non-finite component");
  }
}

double Embedding::norm() const {
  double ss = 0.0;
  for (double v : values_) ss += v * v;
  return std::sqrt(ss);
}

bool EmbeddingTable::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const Embedding& EmbeddingTable::at(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DataError("no embedding for '" + std::string(name) + "'");
  return it->second;
}

void EmbeddingTable::insert(std::string name, Embedding e) {
  if (e.dimension() != dimension_) {
    throw DataError("embedding '" + name + "' has dimension " + std::to_string(e.dimension()) +
                    ", table expects " + std::to_string(dimension_));
  }
  entries_.insert_or_assign(std::move(name), std::move(e));
}

namespace {

std::uint32_t read_u32(std::string_view bytes, std::size_t& pos) {
  if (pos + 4 > bytes.size()) throw DataError("embedding file is truncated");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i]);
  pos += 4;
  return v;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

EmbeddingTable parse_embeddings_json(std::string_view json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
    EmbeddingTable table(root.at("dimension").get<std::size_t>());
    for (const auto& [name, values] : root.at("entries").items()) {
      table.insert(name, Embedding(values.get<std::vector<double>>()));
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("embedding JSON: ") + e.what());
  }
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && bytes[first] == '{') return parse_embeddings_json(bytes);

  std::size_t pos = 0;
  const std::uint32_t dim = read_u32(bytes, pos);
  const std::uint32_t count = read_u32(bytes, pos);
  EmbeddingTable table(dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint32_t len = read_u32(bytes, pos);
    if (pos + len > bytes.size()) throw DataError("embedding file is truncated");
    std::string name = bytes.substr(pos, len);
    pos += len;
    std::vector<double> values(dim);
    for (auto& v : values) {
      const std::uint32_t raw = read_u32(bytes, pos);
      v = static_cast<double>(std::bit_cast<float>(raw));
    }
    table.insert(std::move(name), Embedding(std::move(values)));
  }
  if (pos != bytes.size()) throw DataError("embedding file has trailing bytes");
  return table;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_u32(out, static_cast<std::uint32_t>(table.dimension()));
  write_u32(out, static_cast<std::uint32_t>(table.size()));
  for (const auto& [name, e] : table.entries()) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    for (double v : e.values()) write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

Temperature::Temperature(double tau) : tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("temperature must be positive and finite");
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("embedding dimensions differ (" + std::to_string(a.dimension()) +
                                " vs " + std::to_string(b.dimension()) + ")");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("zero-norm embedding");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values()[i] * b.values()[i];
  return dot / (na * nb);
}

double match_score(const Embedding& f, const Embedding& g, Temperature t) {
  return sigmoid(cosine_similarity(g, f) * t.value());
}

Embedding class_embedding(std::span<const std::string> synonyms, const EmbeddingTable& table) {
  if (synonyms.empty()) throw std::invalid_argument("class has no synonyms");
  std::vector<double> sum(table.dimension(), 0.0);
  for (const auto& s : synonyms) {
    const auto v = table.at(s).values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  for (auto& v : sum) v /= static_cast<double>(synonyms.size());
  return Embedding(std::move(sum));
}

ScoreMatrix score_all(std::span<const Embedding> boxes, std::span<const ClassEmbedding> classes,
                      Temperature t, unsigned workers) {
  ScoreMatrix m;
  m.rows = boxes.size();
  m.cols = classes.size();
  for (const auto& c : classes) m.column_names.push_back(c.name);
  m.values.assign(m.rows * m.cols, 0.0);
  parallel_for(m.rows, workers, [&](std::size_t r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.values[r * m.cols + c] = match_score(boxes[r], classes[c].embedding, t);
    }
  });
  return m;
}

double itc_loss(double s, int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
  if (std::isnan(s)) throw std::invalid_argument("score is NaN");
  const double c = std::clamp(s, kLossEpsilon, 1.0 - kLossEpsilon);
  return -(y * std::log(c) + (1 - y) * std::log(1.0 - c));
}

double bce_with_logit(double z, int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
  // -log sigmoid(z) = softplus(-z); -log(1 - sigmoid(z)) = softplus(z)
  const double x = y == 1 ? -z : z;
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double pairwise_bce_loss(const Embedding& box, std::span<const LabeledEmbedding> pairs,
                         Temperature t) {
  if (pairs.empty()) throw std::invalid_argument("loss needs at least one pair");
  double sum = 0.0;
  for (const auto& p : pairs) {
    sum += bce_with_logit(t.value() * cosine_similarity(p.text, box), p.label);
  }
  return sum / static_cast<double>(pairs.size());
}

std::vector<double> pairwise_bce_gradient(const Embedding& box,
                                          std::span<const LabeledEmbedding> pairs,
                                          Temperature t) {
  if (pairs.empty()) throw std::invalid_argument("loss needs at least one pair");
  const std::size_t d = box.dimension();
  const double nf = box.norm();
  std::vector<double> grad(d, 0.0);
  for (const auto& p : pairs) {
    const double cos = cosine_similarity(p.text, box);
    const double ng = p.text.norm();
    // dL/dz = sigmoid(z) - y, z = tau * cos
    // dcos/df = g / (|g||f|) - cos * f / |f|^2
    const double dz = sigmoid(t.value() * cos) - p.label;
    const double scale = dz * t.value() / static_cast<double>(pairs.size());
    for (std::size_t i = 0; i < d; ++i) {
      grad[i] += scale * (p.text.values()[i] / (ng * nf) - cos * box.values()[i] / (nf * nf));
    }
  }
  return grad;
}

namespace {

std::vector<LabeledEmbedding> resolve_pairs(std::span<const std::string> positives,
                                            std::span<const std::string> negatives,
                                            const EmbeddingTable& table) {
  std::vector<LabeledEmbedding> pairs;
  pairs.reserve(positives.size() + negatives.size());
  for (const auto& p : positives) pairs.push_back({table.at(p), 1});
  for (const auto& n : negatives) pairs.push_back({table.at(n), 0});
  return pairs;
}

}  // namespace

double caption_batch_loss(const Embedding& image, std::string_view positive_caption,
                          std::span<const std::string> negative_captions,
                          const EmbeddingTable& table, Temperature t) {
  const std::string pos(positive_caption);
  return pairwise_bce_loss(image, resolve_pairs({&pos, 1}, negative_captions, table), t);
}

double proxy_parts_loss(const Embedding& max_area_box, std::span<const std::string> positive_parts,
                        std::span<const std::string> negative_parts,
                        const EmbeddingTable& table, Temperature t) {
  if (positive_parts.empty()) throw std::invalid_argument("parts loss needs a positive part");
  return pairwise_bce_loss(max_area_box, resolve_pairs(positive_parts, negative_parts, table), t);
}

GradCheckResult grad_check(const Embedding& box, std::span<const LabeledEmbedding> pairs,
                           Temperature t, double epsilon) {
  if (!(epsilon > 1e-8 && epsilon < 1e-2)) {
    throw std::invalid_argument("finite-difference step must lie in (1e-8, 1e-2)");
  }
  const auto analytic = pairwise_bce_gradient(box, pairs, t);
  GradCheckResult r;
  std::vector<double> probe(box.values().begin(), box.values().end());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + epsilon;
    const double up = pairwise_bce_loss(Embedding(probe), pairs, t);
    probe[i] = saved - epsilon;
    const double down = pairwise_bce_loss(Embedding(probe), pairs, t);
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
    r.max_relative_error = std::max(r.max_relative_error, std::abs(a - numeric) / denom);
    r.max_abs_analytic = std::max(r.max_abs_analytic, std::abs(a));
    r.max_abs_numeric = std::max(r.max_abs_numeric, std::abs(numeric));
  }
  return r;
}

}  // namespace ovad
