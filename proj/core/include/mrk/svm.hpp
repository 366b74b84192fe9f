#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrk/gram.hpp"

namespace mrk {

struct SmoOptions {
  double C = 10.0;
  double tol = 1e-3;  // stop once the maximal KKT violation drops below
  std::uint64_t maxIterations = 1'000'000;
  bool recordObjective = false;  // fill BinarySvmModel::objectiveTrace
};

/// Soft-margin binary SVM in dual form over a precomputed kernel.
struct BinarySvmModel {
  std::vector<double> dualCoeffs;  // alpha_i * y_i, one per training point
  double bias = 0.0;
  double C = 0.0;
  std::vector<std::size_t> supportIndices;  // |dualCoeffs| > 0
  std::uint64_t iterations = 0;
  std::vector<double> objectiveTrace;  // dual objective after each update
};

/// SMO with maximal-violating-pair working set selection. `y` holds +1/-1.
/// Throws InvalidArgument (bad C/tol/labels, n < 2), LengthMismatch,
/// SingleClassInput, NoConvergence.
BinarySvmModel smo_train(const SymMatrix& kernel, std::span<const int> y, const SmoOptions& options = {});

/// sum_i dual_i * gramRow[i] + bias. Throws LengthMismatch.
double decision(const BinarySvmModel& model, std::span<const double> gramRow);

/// Dual objective sum(alpha) - 1/2 alpha' Q alpha with Q_ij = y_i y_j K_ij.
double dual_objective(const SymMatrix& kernel, std::span<const int> y, std::span<const double> alpha);

/// Gap between the most violating up/low pair; <= tol at an approximate
/// optimum (0 exactly at the optimum).
double kkt_violation(const SymMatrix& kernel, std::span<const int> y, std::span<const double> alpha, double C);

struct OvaModel {
  std::vector<std::uint32_t> classIds;  // ascending
  std::vector<BinarySvmModel> models;   // models[k] separates classIds[k] from the rest
  double C = 0.0;
  double tol = 0.0;
};

/// One binary problem per distinct label, trained concurrently.
/// Throws SingleClassInput with fewer than two classes.
OvaModel ova_train(const SymMatrix& kernel, std::span<const std::uint32_t> labels,
                   const SmoOptions& options = {}, unsigned threads = 0);

std::vector<double> ova_scores(const OvaModel& model, std::span<const double> gramRow);
/// Winner-takes-all; ties go to the smallest class id.
std::uint32_t ova_predict(const OvaModel& model, std::span<const double> gramRow);

std::string format_ova_model(const OvaModel& model, std::string_view runConfig = {});
OvaModel parse_ova_model(std::string_view text);  // throws CorruptFile

struct SplitOptions {
  std::uint32_t splits = 4;
  double trainFraction = 0.75;
  std::uint64_t seed = 0;
  SmoOptions smo;
  unsigned threads = 0;
};

struct CrossValidationReport {
  std::vector<double> errorRates;  // one per split
  double mean = 0.0;
};

/// Repeated stratified random splits: within each class, a seeded shuffle
/// sends round(trainFraction * n_c) points to training and the rest to test.
/// Trains one-vs-all on the training block and scores test rows by
/// winner-takes-all. Throws TooFewRecords (a class with < 2 points, or
/// fewer than 2 classes), InvalidArgument.
CrossValidationReport cross_validate(const GramMatrix& gram, const SplitOptions& options = {});
CrossValidationReport cross_validate(std::span<const DatasetRecord> records, const MultiresSpec& spec,
                                     const SplitOptions& options = {});

/// `split,error_rate` rows then `mean,<value>`, preceded by '#' config lines.
std::string format_report(const CrossValidationReport& report, std::string_view runConfig = {});

}  // namespace mrk
