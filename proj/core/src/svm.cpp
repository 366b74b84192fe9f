#include "mrk/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "mrk/error.hpp"
#include "mrk/random_measures.hpp"
#include "mrk/text.hpp"

namespace mrk {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_up(int y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0.0); }
bool in_low(int y, double a, double C) { return (y > 0 && a > 0.0) || (y < 0 && a < C); }

void check_labels(const SymMatrix& k, std::span<const int> y) {
  if (y.size() != k.size()) {
    throw Error(ErrorCode::LengthMismatch, "label count " + std::to_string(y.size()) + " != kernel size " +
                                               std::to_string(k.size()));
  }
  if (y.size() < 2) throw Error(ErrorCode::InvalidArgument, "SVM needs at least 2 training points");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw Error(ErrorCode::InvalidArgument, "binary labels must be +1 or -1");
  }
  if (!pos || !neg) throw Error(ErrorCode::SingleClassInput, "binary SVM needs both labels present");
}

// Gradient of f(alpha) = 1/2 alpha'Q alpha - e'alpha.
std::vector<double> gradient(const SymMatrix& k, std::span<const int> y, std::span<const double> alpha) {
  const std::size_t n = y.size();
  std::vector<double> g(n, -1.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha[j] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) g[i] += y[i] * y[j] * k(i, j) * alpha[j];
  }
  return g;
}

}  // namespace

BinarySvmModel smo_train(const SymMatrix& k, std::span<const int> y, const SmoOptions& opt) {
  check_labels(k, y);
  if (!(opt.C > 0.0) || !std::isfinite(opt.C)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");

  const std::size_t n = y.size();
  const double C = opt.C;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);

  BinarySvmModel model;
  model.C = C;
  double objective = 0.0;

  for (;;) {
    // Maximal violating pair: i maximizes -y G over I_up, j minimizes it over I_low.
    std::size_t i = n, j = n;
    double gmax = -kInf, gmin = kInf;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (in_up(y[t], alpha[t], C) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(y[t], alpha[t], C) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < opt.tol) break;
    if (model.iterations >= opt.maxIterations) {
      throw Error(ErrorCode::NoConvergence, "SMO hit the iteration cap of " + std::to_string(opt.maxIterations));
    }
    ++model.iterations;

    const double oldI = alpha[i], oldJ = alpha[j];
    const double Qij = y[i] * y[j] * k(i, j);
    if (y[i] != y[j]) {
      double quad = k(i, i) + k(j, j) + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }

    const double dI = alpha[i] - oldI, dJ = alpha[j] - oldJ;
    if (opt.recordObjective) {
      // Exact change of sum(alpha) - 1/2 alpha'Q alpha for a two-coordinate step.
      const double Qii = k(i, i), Qjj = k(j, j);
      objective += -(G[i] * dI + G[j] * dJ) -
                   0.5 * (Qii * dI * dI + Qjj * dJ * dJ + 2.0 * Qij * dI * dJ);
      model.objectiveTrace.push_back(objective);
    }
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += y[t] * (y[i] * k(i, t) * dI + y[j] * k(j, t) * dJ);
    }
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sumFree = 0.0;
  std::size_t nFree = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yG = y[t] * G[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++nFree;
      sumFree += yG;
    }
  }
  const double rho = nFree > 0 ? sumFree / static_cast<double>(nFree) : (ub + lb) / 2.0;
  model.bias = -rho;

  model.dualCoeffs.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    model.dualCoeffs[t] = alpha[t] * y[t];
    if (alpha[t] != 0.0) model.supportIndices.push_back(t);
  }
  return model;
}

double decision(const BinarySvmModel& model, std::span<const double> gramRow) {
  if (gramRow.size() != model.dualCoeffs.size()) {
    throw Error(ErrorCode::LengthMismatch, "kernel row has " + std::to_string(gramRow.size()) +
                                               " entries, model expects " +
                                               std::to_string(model.dualCoeffs.size()));
  }
  double f = model.bias;
  for (std::size_t i = 0; i < gramRow.size(); ++i) f += model.dualCoeffs[i] * gramRow[i];
  return f;
}

double dual_objective(const SymMatrix& k, std::span<const int> y, std::span<const double> alpha) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
  }
  return linear - 0.5 * quad;
}

double kkt_violation(const SymMatrix& k, std::span<const int> y, std::span<const double> alpha, double C) {
  const auto G = gradient(k, y, alpha);
  double gmax = -kInf, gmin = kInf;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double v = -y[t] * G[t];
    if (in_up(y[t], alpha[t], C)) gmax = std::max(gmax, v);
    if (in_low(y[t], alpha[t], C)) gmin = std::min(gmin, v);
  }
  if (gmax == -kInf || gmin == kInf) return 0.0;
  return std::max(0.0, gmax - gmin);
}

OvaModel ova_train(const SymMatrix& kernel, std::span<const std::uint32_t> labels, const SmoOptions& options,
                   unsigned threads) {
  if (labels.size() != kernel.size()) throw Error(ErrorCode::LengthMismatch, "labels and kernel differ in size");
  OvaModel model;
  model.C = options.C;
  model.tol = options.tol;
  model.classIds.assign(labels.begin(), labels.end());
  std::sort(model.classIds.begin(), model.classIds.end());
  model.classIds.erase(std::unique(model.classIds.begin(), model.classIds.end()), model.classIds.end());
  if (model.classIds.size() < 2) throw Error(ErrorCode::SingleClassInput, "one-vs-all needs at least 2 classes");

  const std::size_t nc = model.classIds.size();
  model.models.resize(nc);
  std::vector<std::exception_ptr> errors(nc);
  auto train_class = [&](std::size_t c) {
    try {
      std::vector<int> y(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == model.classIds[c] ? 1 : -1;
      model.models[c] = smo_train(kernel, y, options);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1) {
    for (std::size_t c = 0; c < nc; ++c) train_class(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, nc); ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < nc; c = next.fetch_add(1)) train_class(c);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return model;
}

std::vector<double> ova_scores(const OvaModel& model, std::span<const double> gramRow) {
  std::vector<double> scores;
  scores.reserve(model.models.size());
  for (const auto& m : model.models) scores.push_back(decision(m, gramRow));
  return scores;
}

std::uint32_t ova_predict(const OvaModel& model, std::span<const double> gramRow) {
  const auto scores = ova_scores(model, gramRow);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return model.classIds[best];
}

std::string format_ova_model(const OvaModel& model, std::string_view runConfig) {
  std::string out = "# mrk one-vs-all SVM model\n";
  if (!runConfig.empty()) out += "# run: " + std::string(runConfig) + "\n";
  out += "C=" + format_real(model.C) + "\n";
  out += "tol=" + format_real(model.tol) + "\n";
  out += "classes=";
  for (std::size_t c = 0; c < model.classIds.size(); ++c) {
    out += (c ? " " : "") + std::to_string(model.classIds[c]);
  }
  out += "\n";
  for (std::size_t c = 0; c < model.classIds.size(); ++c) {
    const auto& m = model.models[c];
    out += "class=" + std::to_string(model.classIds[c]) + " bias=" + format_real(m.bias) + "\n";
    out += "duals=";
    for (std::size_t i = 0; i < m.dualCoeffs.size(); ++i) out += (i ? "," : "") + format_real(m.dualCoeffs[i]);
    out += "\n";
  }
  return out;
}

OvaModel parse_ova_model(std::string_view text) {
  auto corrupt = [](const std::string& why) { return Error(ErrorCode::CorruptFile, "model file: " + why); };
  OvaModel model;
  std::istringstream in{std::string(text)};
  std::string line;
  auto value_of = [&](std::string_view key) {
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      if (line.rfind(std::string(key) + "=", 0) != 0) throw corrupt("expected " + std::string(key));
      return line.substr(key.size() + 1);
    }
    throw corrupt("missing " + std::string(key));
  };
  try {
    model.C = parse_real(value_of("C"));
    model.tol = parse_real(value_of("tol"));
    std::istringstream classes(value_of("classes"));
    std::string tok;
    while (classes >> tok) model.classIds.push_back(static_cast<std::uint32_t>(parse_unsigned(tok)));
    for (std::uint32_t id : model.classIds) {
      const std::string header = value_of("class");
      const auto sp = header.find(" bias=");
      if (sp == std::string::npos || parse_unsigned(header.substr(0, sp)) != id) throw corrupt("class header");
      BinarySvmModel m;
      m.C = model.C;
      m.bias = parse_real(header.substr(sp + 6));
      std::istringstream duals(value_of("duals"));
      while (std::getline(duals, tok, ',')) m.dualCoeffs.push_back(parse_real(tok));
      for (std::size_t i = 0; i < m.dualCoeffs.size(); ++i) {
        if (m.dualCoeffs[i] != 0.0) m.supportIndices.push_back(i);
      }
      model.models.push_back(std::move(m));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    throw corrupt(e.what());
  }
  if (model.classIds.size() < 2) throw corrupt("fewer than 2 classes");
  return model;
}

CrossValidationReport cross_validate(const GramMatrix& gram, const SplitOptions& o) {
  if (o.splits == 0) throw Error(ErrorCode::InvalidArgument, "need at least one split");
  if (!(o.trainFraction > 0.0 && o.trainFraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::map<std::uint32_t, std::vector<std::size_t>> byClass;
  for (std::size_t i = 0; i < gram.labels.size(); ++i) byClass[gram.labels[i]].push_back(i);
  if (byClass.size() < 2) throw Error(ErrorCode::TooFewRecords, "cross-validation needs at least 2 classes");
  for (const auto& [label, idx] : byClass) {
    if (idx.size() < 2) {
      throw Error(ErrorCode::TooFewRecords, "class " + std::to_string(label) + " has fewer than 2 records");
    }
  }

  std::mt19937_64 rng(o.seed);
  CrossValidationReport report;
  for (std::uint32_t s = 0; s < o.splits; ++s) {
    std::vector<std::size_t> train, test;
    for (auto& [label, idx] : byClass) {
      std::vector<std::size_t> perm = idx;
      for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[uniform_below(rng, k)]);
      auto nTrain = static_cast<std::size_t>(std::llround(o.trainFraction * static_cast<double>(perm.size())));
      nTrain = std::clamp<std::size_t>(nTrain, 1, perm.size() - 1);
      train.insert(train.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nTrain));
      test.insert(test.end(), perm.begin() + static_cast<std::ptrdiff_t>(nTrain), perm.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());

    std::vector<std::uint32_t> trainLabels;
    for (auto i : train) trainLabels.push_back(gram.labels[i]);
    const OvaModel model = ova_train(gram.values.submatrix(train), trainLabels, o.smo, o.threads);

    std::size_t wrong = 0;
    std::vector<double> row(train.size());
    for (auto t : test) {
      for (std::size_t k = 0; k < train.size(); ++k) row[k] = gram.values(t, train[k]);
      if (ova_predict(model, row) != gram.labels[t]) ++wrong;
    }
    report.errorRates.push_back(static_cast<double>(wrong) / static_cast<double>(test.size()));
  }
  double sum = 0.0;
  for (double e : report.errorRates) sum += e;
  report.mean = sum / static_cast<double>(report.errorRates.size());
  return report;
}

CrossValidationReport cross_validate(std::span<const DatasetRecord> records, const MultiresSpec& spec,
                                     const SplitOptions& options) {
  return cross_validate(compute_gram(records, spec, options.threads), options);
}

std::string format_report(const CrossValidationReport& report, std::string_view runConfig) {
  std::string out;
  if (!runConfig.empty()) out += "# run: " + std::string(runConfig) + "\n";
  out += "split,error_rate\n";
  for (std::size_t s = 0; s < report.errorRates.size(); ++s) {
    out += std::to_string(s) + "," + format_real(report.errorRates[s]) + "\n";
  }
  out += "mean," + format_real(report.mean) + "\n";
  return out;
}

}  // namespace mrk
