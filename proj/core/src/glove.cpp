#include <atomic>
#include <cmath>
#include <mutex>

#include "lexbias/embedding.hpp"
#include "lexbias/parallel.hpp"

namespace lexbias::embedding {

void TrainConfig::validate() const {
  if (dim < 1) throw InvalidInput("dimension must be at least 1");
  if (iterations < 1) throw InvalidInput("iterations must be at least 1");
  if (min_count < 1) throw InvalidInput("min_count must be at least 1");
  if (window < 1) throw InvalidInput("window must be at least 1");
  if (!(x_max > 0.0)) throw InvalidInput("x_max must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("weighting exponent must lie in (0, 1]");
  if (!(learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
  if (threads < 1) throw InvalidInput("threads must be at least 1");
}

GloveParams::GloveParams(std::size_t v, std::size_t d)
    : vocab(v), dim(d), main(v * d, 0.0), context(v * d, 0.0), main_bias(v, 0.0),
      context_bias(v, 0.0) {}

GloveParams GloveParams::random(std::size_t v, std::size_t d, std::uint64_t seed) {
  GloveParams p(v, d);
  Rng rng(derive_seed(seed, 0x676c6f7665ULL));
  const double scale = 1.0 / static_cast<double>(d);
  auto draw = [&] { return (uniform01(rng) - 0.5) * scale; };
  for (auto& x : p.main) x = draw();
  for (auto& x : p.context) x = draw();
  for (auto& x : p.main_bias) x = draw();
  for (auto& x : p.context_bias) x = draw();
  return p;
}

double glove_weight(double x, double x_max, double alpha) noexcept {
  return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

namespace {

double residual(const GloveParams& p, const CooccurrenceEntry& e) {
  const double* w = &p.main[e.row * p.dim];
  const double* c = &p.context[e.col * p.dim];
  double dot = 0.0;
  for (std::size_t k = 0; k < p.dim; ++k) dot += w[k] * c[k];
  return dot + p.main_bias[e.row] + p.context_bias[e.col] - std::log(e.weight);
}

void check_shape(const CooccurrenceTable& table, const GloveParams& p) {
  if (p.vocab != table.vocabulary().size()) {
    throw InvalidInput("parameter rows do not match the vocabulary size");
  }
}

}  // namespace

double glove_objective(const CooccurrenceTable& table, const GloveParams& p, double x_max,
                       double alpha) {
  check_shape(table, p);
  double j = 0.0;
  for (const auto& e : table.entries()) {
    const double r = residual(p, e);
    j += glove_weight(e.weight, x_max, alpha) * r * r;
  }
  return j;
}

GloveParams glove_gradient(const CooccurrenceTable& table, const GloveParams& p, double x_max,
                           double alpha) {
  check_shape(table, p);
  GloveParams g(p.vocab, p.dim);
  for (const auto& e : table.entries()) {
    const double s = 2.0 * glove_weight(e.weight, x_max, alpha) * residual(p, e);
    for (std::size_t k = 0; k < p.dim; ++k) {
      g.main[e.row * p.dim + k] += s * p.context[e.col * p.dim + k];
      g.context[e.col * p.dim + k] += s * p.main[e.row * p.dim + k];
    }
    g.main_bias[e.row] += s;
    g.context_bias[e.col] += s;
  }
  return g;
}

namespace {

// Plain accesses for the single-threaded path; relaxed atomics when several
// workers update shared rows without locks.
template <bool Shared>
struct Cell {
  static double load(double& x) {
    if constexpr (Shared) {
      return std::atomic_ref<double>(x).load(std::memory_order_relaxed);
    } else {
      return x;
    }
  }
  static void store(double& x, double v) {
    if constexpr (Shared) {
      std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
    } else {
      x = v;
    }
  }
};

struct AdaState {
  std::vector<double> main;
  std::vector<double> context;
  std::vector<double> main_bias;
  std::vector<double> context_bias;
};

// One AdaGrad step on entry e; returns f(X) * residual^2 (before the step).
template <bool Shared>
double update(GloveParams& p, AdaState& g, const CooccurrenceEntry& e, const TrainConfig& cfg,
              const Vocabulary& vocab) {
  using C = Cell<Shared>;
  const std::size_t d = p.dim;
  double* w = &p.main[e.row * d];
  double* c = &p.context[e.col * d];
  double* gw = &g.main[e.row * d];
  double* gc = &g.context[e.col * d];
  double dot = 0.0;
  for (std::size_t k = 0; k < d; ++k) dot += C::load(w[k]) * C::load(c[k]);
  const double diff =
      dot + C::load(p.main_bias[e.row]) + C::load(p.context_bias[e.col]) - std::log(e.weight);
  const double fx = glove_weight(e.weight, cfg.x_max, cfg.alpha);
  const double loss = fx * diff * diff;
  if (!std::isfinite(loss)) {
    throw TrainingDiverged("non-finite loss at entry (" + vocab.term(e.row) + ", " +
                           vocab.term(e.col) + ") with X = " + format_number(e.weight));
  }
  const double step = cfg.learning_rate * fx * diff;
  for (std::size_t k = 0; k < d; ++k) {
    const double wk = C::load(w[k]);
    const double ck = C::load(c[k]);
    const double t1 = step * ck;
    const double t2 = step * wk;
    const double g1 = C::load(gw[k]);
    const double g2 = C::load(gc[k]);
    C::store(w[k], wk - t1 / std::sqrt(g1));
    C::store(c[k], ck - t2 / std::sqrt(g2));
    C::store(gw[k], g1 + t1 * t1);
    C::store(gc[k], g2 + t2 * t2);
  }
  const double gb1 = C::load(g.main_bias[e.row]);
  const double gb2 = C::load(g.context_bias[e.col]);
  C::store(p.main_bias[e.row], C::load(p.main_bias[e.row]) - step / std::sqrt(gb1));
  C::store(p.context_bias[e.col], C::load(p.context_bias[e.col]) - step / std::sqrt(gb2));
  C::store(g.main_bias[e.row], gb1 + step * step);
  C::store(g.context_bias[e.col], gb2 + step * step);
  return loss;
}

}  // namespace

EmbeddingSet train_from(const CooccurrenceTable& table, const TrainConfig& cfg, GloveParams& params) {
  cfg.validate();
  if (table.empty()) throw InvalidInput("train: co-occurrence table is empty");
  check_shape(table, params);
  if (params.dim != cfg.dim) throw InvalidInput("parameter dimension does not match the config");

  const auto& vocab = table.vocabulary();
  const auto entries = table.entries();
  AdaState ada{std::vector<double>(params.main.size(), 1.0),
               std::vector<double>(params.context.size(), 1.0),
               std::vector<double>(params.vocab, 1.0), std::vector<double>(params.vocab, 1.0)};

  std::vector<std::uint32_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);

  TrainingMetadata meta;
  meta.seed = cfg.seed;
  for (std::uint32_t it = 0; it < cfg.iterations; ++it) {
    Rng rng = make_stream(cfg.seed, 1000 + it);
    shuffle(order, rng);
    double total = 0.0;
    if (cfg.threads <= 1) {
      for (auto idx : order) total += update<false>(params, ada, entries[idx], cfg, vocab);
    } else {
      std::mutex mu;
      parallel_ranges(order.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += update<true>(params, ada, entries[order[i]], cfg, vocab);
        std::lock_guard lock(mu);
        total += s;
      });
    }
    meta.loss_history.push_back(total / static_cast<double>(entries.size()));
    ++meta.iterations;
  }
  meta.final_loss = meta.loss_history.back();

  const std::size_t n = params.vocab * params.dim;
  std::vector<float> main(n), context(n);
  for (std::size_t i = 0; i < n; ++i) {
    main[i] = static_cast<float>(params.main[i]);
    context[i] = static_cast<float>(params.context[i]);
  }
  std::vector<std::string> terms;
  terms.reserve(vocab.size());
  for (const auto& e : vocab.entries()) terms.push_back(e.term);
  EmbeddingSet set(std::move(terms), params.dim, std::move(main), std::move(context));
  set.metadata() = std::move(meta);
  return set;
}

EmbeddingSet train(const CooccurrenceTable& table, const TrainConfig& cfg) {
  cfg.validate();
  auto params = GloveParams::random(table.vocabulary().size(), cfg.dim, cfg.seed);
  return train_from(table, cfg, params);
}

}  // namespace lexbias::embedding
