#pragma once

// Answer-selection probe: one tanh hidden layer over the seven concatenated
// context embeddings, output compared to the candidates by cosine.
// Trained with a max-margin hinge and mini-batch SGD with momentum.

#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "blm/embeddings.hpp"
#include "blm/error.hpp"
#include "blm/instance.hpp"
#include "blm/rng.hpp"

namespace blm {

struct ProbeHyper {
  std::size_t hidden = 0;  // 0 means 2 * dim
  double margin = 0.5;
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 50;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  friend bool operator==(const ProbeHyper&, const ProbeHyper&) = default;
};

inline nlohmann::ordered_json hyper_to_json(const ProbeHyper& h) {
  return {{"hidden", h.hidden},         {"margin", h.margin}, {"learning_rate", h.learning_rate},
          {"momentum", h.momentum},     {"epochs", h.epochs}, {"batch_size", h.batch_size},
          {"seed", h.seed}};
}

inline ProbeHyper hyper_from_json(const nlohmann::json& j, ProbeHyper h = {}) {
  h.hidden = j.value("hidden", h.hidden);
  h.margin = j.value("margin", h.margin);
  h.learning_rate = j.value("learning_rate", h.learning_rate);
  h.momentum = j.value("momentum", h.momentum);
  h.epochs = j.value("epochs", h.epochs);
  h.batch_size = j.value("batch_size", h.batch_size);
  h.seed = j.value("seed", h.seed);
  if (h.margin <= 0) throw InvalidArgument("margin must be > 0");
  if (h.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (h.batch_size == 0) throw InvalidArgument("batch_size must be >= 1");
  return h;
}

struct ProbeModel {
  std::size_t dim = 0;
  Eigen::MatrixXd W1;  // h x 7d
  Eigen::VectorXd b1;  // h
  Eigen::MatrixXd W2;  // d x h
  Eigen::VectorXd b2;  // d
  ProbeHyper hyper;

  std::size_t hidden() const { return static_cast<std::size_t>(W1.rows()); }

  friend bool operator==(const ProbeModel& a, const ProbeModel& b) {
    return a.dim == b.dim && a.hyper == b.hyper && a.W1 == b.W1 && a.b1 == b.b1 && a.W2 == b.W2 && a.b2 == b.b2;
  }
};

// Seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
inline ProbeModel init_probe(std::size_t dim, const ProbeHyper& hyper) {
  if (dim == 0) throw InvalidArgument("probe dimension must be positive");
  ProbeModel m;
  m.dim = dim;
  m.hyper = hyper;
  const std::size_t h = hyper.hidden == 0 ? 2 * dim : hyper.hidden;
  m.hyper.hidden = h;
  Rng rng(derive_seed(hyper.seed, 0));
  auto fill = [&](auto& x, std::size_t fan_in) {
    const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = uniform_real(rng, -a, a);
  };
  m.W1.resize(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(7 * dim));
  m.b1.resize(static_cast<Eigen::Index>(h));
  m.W2.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(h));
  m.b2.resize(static_cast<Eigen::Index>(dim));
  fill(m.W1, 7 * dim);
  fill(m.b1, 7 * dim);
  fill(m.W2, h);
  fill(m.b2, h);
  return m;
}

// Embeddings of one instance: the 7 context vectors concatenated, and the
// five answers with their labels.
struct EmbeddedInstance {
  Eigen::VectorXd context;
  std::array<Eigen::VectorXd, 5> answers;
  std::array<AnswerLabel, 5> labels{};
  int correct_index = 0;
};

inline Eigen::VectorXd to_eigen(const EmbeddingVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

inline Eigen::VectorXd concat_context(std::span<const Eigen::VectorXd> context) {
  if (context.size() != 7) throw InvalidArgument("context must have 7 vectors");
  const auto d = context[0].size();
  Eigen::VectorXd out(7 * d);
  for (std::size_t i = 0; i < 7; ++i) {
    if (context[i].size() != d) throw InvalidArgument("context vectors differ in dimension");
    out.segment(static_cast<Eigen::Index>(i) * d, d) = context[i];
  }
  return out;
}

// Embeds every instance, each distinct sentence once.
inline std::vector<EmbeddedInstance> embed_instances(std::span<const BLMInstance> instances,
                                                     const EmbeddingProvider& provider) {
  std::unordered_map<std::string, Eigen::VectorXd> cache;
  auto get = [&](const SentenceRecord& r) -> const Eigen::VectorXd& {
    auto it = cache.find(r.text);
    if (it == cache.end()) {
      auto v = provider.embed_record(r);
      if (v.size() != provider.dim()) throw InvalidArgument("provider returned a vector of the wrong dimension");
      it = cache.emplace(r.text, to_eigen(v)).first;
    }
    return it->second;
  };
  std::vector<EmbeddedInstance> out;
  out.reserve(instances.size());
  const auto d = static_cast<Eigen::Index>(provider.dim());
  for (const auto& inst : instances) {
    EmbeddedInstance e;
    e.context.resize(7 * d);
    for (std::size_t i = 0; i < 7; ++i) e.context.segment(static_cast<Eigen::Index>(i) * d, d) = get(inst.context[i]);
    for (std::size_t i = 0; i < 5; ++i) {
      e.answers[i] = get(inst.answers[i].record);
      e.labels[i] = inst.answers[i].label;
    }
    e.correct_index = inst.correct_index;
    out.push_back(std::move(e));
  }
  return out;
}

inline Eigen::VectorXd forward(const ProbeModel& m, const Eigen::VectorXd& context) {
  if (context.size() != m.W1.cols()) {
    throw InvalidArgument("dimension mismatch: probe expects " + std::to_string(m.W1.cols()) + " inputs, got " +
                          std::to_string(context.size()));
  }
  return m.W2 * (m.W1 * context + m.b1).array().tanh().matrix() + m.b2;
}

inline Eigen::VectorXd forward(const ProbeModel& m, std::span<const Eigen::VectorXd> context) {
  return forward(m, concat_context(context));
}

// Zero-norm inputs seen by cosine_grad; such cosines are taken as 0.
inline std::atomic<std::uint64_t>& degenerate_cosine_count() {
  static std::atomic<std::uint64_t> n{0};
  return n;
}

// cos(p, c) and its gradient with respect to p.
inline double cosine_grad(const Eigen::VectorXd& p, const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
  const double np = p.norm(), nc = c.norm();
  if (np == 0.0 || nc == 0.0) {
    degenerate_cosine_count().fetch_add(1, std::memory_order_relaxed);
    if (grad) grad->setZero(p.size());
    return 0.0;
  }
  const double cs = p.dot(c) / (np * nc);
  if (grad) *grad = c / (np * nc) - (cs / (np * np)) * p;
  return cs;
}

// Sum over distractors of max(0, m - cos(p, correct) + cos(p, w)), and its
// gradient in p. At a kink the hinge contributes nothing.
inline double margin_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& correct,
                          std::span<const Eigen::VectorXd> distractors, double margin,
                          Eigen::VectorXd* grad = nullptr) {
  Eigen::VectorXd gc, gw;
  const double cc = cosine_grad(pred, correct, grad ? &gc : nullptr);
  if (grad) grad->setZero(pred.size());
  double loss = 0.0;
  for (const auto& w : distractors) {
    const double cw = cosine_grad(pred, w, grad ? &gw : nullptr);
    const double term = margin - cc + cw;
    if (!(term <= 0.0)) {  // NaN falls through so training can catch it
      loss += term;
      if (grad) *grad += gw - gc;
    }
  }
  return loss;
}

inline double margin_loss(const Eigen::VectorXd& pred, const EmbeddedInstance& e, double margin,
                          Eigen::VectorXd* grad = nullptr) {
  std::array<Eigen::VectorXd, 4> distractors;
  std::size_t k = 0;
  for (int i = 0; i < 5; ++i) {
    if (i != e.correct_index) distractors[k++] = e.answers[static_cast<std::size_t>(i)];
  }
  return margin_loss(pred, e.answers[static_cast<std::size_t>(e.correct_index)], distractors, margin, grad);
}

// Index of the answer with the highest cosine to pred; lowest index on ties.
inline int select_answer(const Eigen::VectorXd& pred, std::span<const Eigen::VectorXd> answers) {
  int best = 0;
  double best_cos = -2.0;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const double c = cosine(pred, answers[i]);
    if (c > best_cos) {
      best_cos = c;
      best = static_cast<int>(i);
    }
  }
  return best;
}

inline int predict(const ProbeModel& m, std::span<const Eigen::VectorXd> context,
                   std::span<const Eigen::VectorXd> answers) {
  return select_answer(forward(m, context), answers);
}

inline int predict(const ProbeModel& m, const EmbeddedInstance& e) {
  return select_answer(forward(m, e.context), e.answers);
}

struct TrainingLog {
  std::vector<double> mean_loss;       // per epoch
  std::vector<double> train_accuracy;  // per epoch, measured before each batch update
};

inline ProbeModel train_probe(std::span<const EmbeddedInstance> data, std::size_t dim, const ProbeHyper& hyper,
                              TrainingLog* log = nullptr) {
  ProbeModel m = init_probe(dim, hyper);
  if (log) *log = {};
  if (hyper.epochs == 0) return m;
  if (data.empty()) throw InvalidArgument("cannot train on an empty dataset");
  for (const auto& e : data) {
    if (static_cast<std::size_t>(e.context.size()) != 7 * dim) throw InvalidArgument("training data dimension mismatch");
  }

  const double lr = hyper.learning_rate, mu = hyper.momentum;
  Eigen::MatrixXd vW1 = Eigen::MatrixXd::Zero(m.W1.rows(), m.W1.cols());
  Eigen::VectorXd vb1 = Eigen::VectorXd::Zero(m.b1.size());
  Eigen::MatrixXd vW2 = Eigen::MatrixXd::Zero(m.W2.rows(), m.W2.cols());
  Eigen::VectorXd vb2 = Eigen::VectorXd::Zero(m.b2.size());

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(hyper.seed, 1));

  const auto in_dim = m.W1.cols();
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd X, A, Y, G;
  Eigen::VectorXd g;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0, batch = 0; start < order.size(); start += hyper.batch_size, ++batch) {
      const auto n = static_cast<Eigen::Index>(std::min(hyper.batch_size, order.size() - start));
      X.resize(in_dim, n);
      for (Eigen::Index j = 0; j < n; ++j) X.col(j) = data[order[start + static_cast<std::size_t>(j)]].context;
      A = ((m.W1 * X).colwise() + m.b1).array().tanh().matrix();
      Y = (m.W2 * A).colwise() + m.b2;
      G.resize(d, n);
      double batch_loss = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& e = data[order[start + static_cast<std::size_t>(j)]];
        const Eigen::VectorXd y = Y.col(j);
        batch_loss += margin_loss(y, e, hyper.margin, &g);
        G.col(j) = g / static_cast<double>(n);
        if (select_answer(y, e.answers) == e.correct_index) ++correct;
      }
      if (!std::isfinite(batch_loss)) {
        throw Error("non-finite", "non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                                      std::to_string(batch + 1));
      }
      loss_sum += batch_loss;
      const Eigen::MatrixXd dZ = (m.W2.transpose() * G).cwiseProduct((1.0 - A.array().square()).matrix());
      vW2 = mu * vW2 - lr * (G * A.transpose());
      vb2 = mu * vb2 - lr * G.rowwise().sum();
      vW1 = mu * vW1 - lr * (dZ * X.transpose());
      vb1 = mu * vb1 - lr * dZ.rowwise().sum();
      m.W2 += vW2;
      m.b2 += vb2;
      m.W1 += vW1;
      m.b1 += vb1;
    }
    if (log) {
      log->mean_loss.push_back(loss_sum / static_cast<double>(data.size()));
      log->train_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(data.size()));
    }
  }
  if (!m.W1.allFinite() || !m.W2.allFinite() || !m.b1.allFinite() || !m.b2.allFinite()) {
    throw Error("non-finite", "training produced non-finite weights");
  }
  return m;
}

inline std::vector<int> predict_all(const ProbeModel& m, std::span<const EmbeddedInstance> data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& e : data) out.push_back(predict(m, e));
  return out;
}

// Checkpoint: one line of JSON header, then W1, b1, W2, b2 as row-major
// little-endian f32.
inline constexpr std::string_view kCheckpointFormat = "blm-probe-v1";

inline void save_checkpoint(const ProbeModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  const std::size_t n_params = static_cast<std::size_t>(m.W1.size() + m.b1.size() + m.W2.size() + m.b2.size());
  nlohmann::ordered_json header{{"format", kCheckpointFormat},
                                {"dim", m.dim},
                                {"hidden", m.hidden()},
                                {"seed", m.hyper.seed},
                                {"hyper", hyper_to_json(m.hyper)},
                                {"layout", "W1,b1,W2,b2 row-major f32le"},
                                {"n_params", n_params}};
  out << header.dump() << '\n';
  auto put = [&](double x) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
    const char b[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                       static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
    out.write(b, 4);
  };
  auto put_matrix = [&](const Eigen::MatrixXd& x) {
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) put(x(r, c));
  };
  put_matrix(m.W1);
  for (Eigen::Index i = 0; i < m.b1.size(); ++i) put(m.b1[i]);
  put_matrix(m.W2);
  for (Eigen::Index i = 0; i < m.b2.size(); ++i) put(m.b2[i]);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline ProbeModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw FormatError("'" + path.string() + "' has no checkpoint header");
  }
  if (header.value("format", "") != kCheckpointFormat) throw FormatError("unsupported checkpoint format");
  ProbeModel m;
  m.dim = header.at("dim").get<std::size_t>();
  m.hyper = hyper_from_json(header.at("hyper"));
  const auto d = static_cast<Eigen::Index>(m.dim);
  const auto h = static_cast<Eigen::Index>(header.at("hidden").get<std::size_t>());
  m.W1.resize(h, 7 * d);
  m.b1.resize(h);
  m.W2.resize(d, h);
  m.b2.resize(d);
  auto get = [&]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw FormatError("truncated checkpoint '" + path.string() + "'");
    const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return static_cast<double>(std::bit_cast<float>(bits));
  };
  auto get_matrix = [&](Eigen::MatrixXd& x) {
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = get();
  };
  get_matrix(m.W1);
  for (Eigen::Index i = 0; i < m.b1.size(); ++i) m.b1[i] = get();
  get_matrix(m.W2);
  for (Eigen::Index i = 0; i < m.b2.size(); ++i) m.b2[i] = get();
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in checkpoint");
  return m;
}

}  // namespace blm
