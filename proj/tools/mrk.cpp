// mrk: command-line front end for multiresolution histogram kernels.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "mrk/base_kernels.hpp"
#include "mrk/dataset_io.hpp"
#include "mrk/error.hpp"
#include "mrk/gram.hpp"
#include "mrk/hierarchy.hpp"
#include "mrk/imaging.hpp"
#include "mrk/multires.hpp"
#include "mrk/random_measures.hpp"
#include "mrk/svm.hpp"
#include "mrk/text.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mrk;

constexpr double kOracleTolerance = 1e-10;

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

// Text output goes to the file when given, otherwise to stdout.
void emit(const std::string& outPath, const std::string& text) {
  if (outPath.empty() || outPath == "-") {
    std::cout << text;
  } else {
    write_text_file(outPath, text);
  }
}

struct SynthArgs {
  std::uint32_t perClass = 10;
  std::uint32_t splits = 2;
  std::uint32_t depth = 1;
  std::uint64_t seed = 0;
  double noise = 0.05;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  SynthOptions o;
  o.perClass = a.perClass;
  o.splitsPerLevel = a.splits;
  o.depth = a.depth;
  o.seed = a.seed;
  o.noiseRate = a.noise;
  o.width = a.width;
  o.height = a.height;
  Dataset d;
  d.branching = a.splits * a.splits;
  d.depth = a.depth;
  d.runConfig = "synth per-class=" + std::to_string(a.perClass) + " splits=" + std::to_string(a.splits) +
                " depth=" + std::to_string(a.depth) + " seed=" + std::to_string(a.seed) +
                " noise=" + format_real(a.noise) + " size=" + std::to_string(a.width) + "x" +
                std::to_string(a.height);
  d.records = synth_dataset(o);
  save_dataset(d, a.out);
  std::cout << d.runConfig << "\nrecords=" << d.records.size() << " dataset=" << hex64(dataset_hash(d)) << "\n";
  return 0;
}

struct IngestArgs {
  std::string manifest;
  std::uint32_t splits = 2;
  std::uint32_t depth = 1;
  std::string out;
};

int run_ingest(const IngestArgs& a) {
  Dataset d = ingest_manifest(a.manifest, a.splits, a.depth);
  d.runConfig = "ingest manifest=" + fs::path(a.manifest).filename().string() +
                " splits=" + std::to_string(a.splits) + " depth=" + std::to_string(a.depth);
  save_dataset(d, a.out);
  std::cout << d.runConfig << "\nrecords=" << d.records.size() << " leaves=" << d.tree().leaf_count()
            << " dataset=" << hex64(dataset_hash(d)) << "\n";
  return 0;
}

struct GramArgs {
  std::string data;
  std::string kernel = "rbf";
  std::string epsilon = "1/alpha";
  std::string out;
  bool csv = false;
  bool dense = false;
  unsigned threads = 0;
};

int run_gram(const GramArgs& a) {
  const Dataset d = load_dataset(a.data);
  const TreeConfig tc = parse_tree_config("branching=" + std::to_string(d.branching) +
                                          " depth=" + std::to_string(d.depth) + " epsilon=" + a.epsilon);
  const MultiresSpec spec{build_tree(tc), parse_kernel_spec(a.kernel)};
  GramMatrix g = compute_gram(d, spec, a.threads);
  g.provenance.runConfig = "gram kernel=" + format_kernel_spec(spec.base) + " epsilon=" + a.epsilon + " [" +
                           format_tree_config(tc) + "]";
  if (a.csv) {
    write_text_file(a.out, gram_to_csv(g, a.dense));
  } else {
    save_gram(g, a.out);
  }
  std::cout << g.provenance.runConfig << "\nn=" << g.size() << " dataset=" << hex64(g.provenance.datasetHash)
            << "\n";
  return 0;
}

struct OracleArgs {
  std::uint32_t alpha = 2;
  std::uint32_t depth = 1;
  std::uint32_t trials = 100;
  std::uint64_t seed = 0;
};

BaseKernelSpec random_base_kernel(std::mt19937_64& rng, std::uint32_t trial) {
  if (trial % 2 == 1) return BaseKernelSpec::jensen_divergence();
  constexpr double as[] = {0.25, 0.5, 1.0};
  return BaseKernelSpec::rbf(as[uniform_below(rng, 3)], 1.0 + uniform01(rng), 0.2 + 2.0 * uniform01(rng));
}

int run_check_oracle(const OracleArgs& a) {
  std::mt19937_64 rng(a.seed);
  const IndexTree shape = build_uniform_tree(a.alpha, a.depth, 0.0);
  double maxDiff = 0.0;
  for (std::uint32_t t = 0; t < a.trials; ++t) {
    const MultiresSpec spec{with_random_epsilons(shape, rng), random_base_kernel(rng, t)};
    const auto mu = random_nested_measure(spec.tree, rng);
    const auto nu = random_nested_measure(spec.tree, rng);
    const double diff = std::fabs(k_multires_factorized(spec, mu, nu) - k_multires_bruteforce(spec, mu, nu));
    maxDiff = std::max(maxDiff, diff);
  }
  const bool pass = maxDiff <= kOracleTolerance;
  std::cout << "check-oracle alpha=" << a.alpha << " depth=" << a.depth << " trials=" << a.trials
            << " seed=" << a.seed << "\nmax_abs_diff=" << format_real(maxDiff) << "\n"
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

struct TrainArgs {
  std::string gram;
  double C = 10.0;
  double tol = 1e-3;
  std::string out;
  unsigned threads = 0;
};

int run_train(const TrainArgs& a) {
  const GramMatrix g = load_gram(a.gram);
  const OvaModel model = ova_train(g.values, g.labels, {.C = a.C, .tol = a.tol}, a.threads);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < g.size(); ++i) wrong += ova_predict(model, g.values.row(i)) != g.labels[i];
  const std::string run = "train C=" + format_real(a.C) + " tol=" + format_real(a.tol) +
                          " dataset=" + hex64(g.provenance.datasetHash) + " [" + g.provenance.treeConfig +
                          " kernel=" + g.provenance.kernelSpec + "]";
  emit(a.out, format_ova_model(model, run));
  if (!a.out.empty() && a.out != "-") {
    std::cout << run << "\ntraining_error=" << format_real(static_cast<double>(wrong) / static_cast<double>(g.size()))
              << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string gram;
  double C = 10.0;
  double tol = 1e-3;
  std::uint32_t splits = 4;
  double trainFrac = 0.75;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
};

int run_eval(const EvalArgs& a) {
  const GramMatrix g = load_gram(a.gram);
  SplitOptions o;
  o.splits = a.splits;
  o.trainFraction = a.trainFrac;
  o.seed = a.seed;
  o.smo = {.C = a.C, .tol = a.tol};
  o.threads = a.threads;
  const auto report = cross_validate(g, o);
  const std::string run = "eval C=" + format_real(a.C) + " tol=" + format_real(a.tol) +
                          " splits=" + std::to_string(a.splits) + " train-frac=" + format_real(a.trainFrac) +
                          " seed=" + std::to_string(a.seed) + " dataset=" + hex64(g.provenance.datasetHash) +
                          " [" + g.provenance.treeConfig + " kernel=" + g.provenance.kernelSpec + "]";
  emit(a.out, format_report(report, run));
  return 0;
}

int run_psd(const std::string& path) {
  const GramMatrix g = load_gram(path);
  std::cout << "n=" << g.size() << "\nmin_eigenvalue=" << format_real(min_eigenvalue(g)) << "\n";
  return 0;
}

std::string single_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiresolution histogram kernels: datasets, Gram matrices, SVM evaluation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  SynthArgs synth;
  auto* cSynth = app.add_subcommand("synth", "Generate the synthetic two-class image dataset");
  cSynth->add_option("--per-class", synth.perClass, "Images per class")->required()->check(CLI::Range(1u, 1000000u));
  cSynth->add_option("--splits", synth.splits, "Grid splits per level (tree branching is splits^2)")
      ->check(CLI::Range(1u, 64u))->capture_default_str();
  cSynth->add_option("--depth", synth.depth, "Tree depth")->check(CLI::Range(0u, 8u))->capture_default_str();
  cSynth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  cSynth->add_option("--noise", synth.noise, "Per-pixel replacement probability")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cSynth->add_option("--width", synth.width, "Image width")->check(CLI::Range(2u, 65536u))->capture_default_str();
  cSynth->add_option("--height", synth.height, "Image height")->check(CLI::Range(2u, 65536u))->capture_default_str();
  cSynth->add_option("--out", synth.out, "Output dataset (MRKD1)")->required();

  IngestArgs ingest;
  auto* cIngest = app.add_subcommand("ingest", "Histogram PPM images listed in a manifest");
  cIngest->add_option("--manifest", ingest.manifest, "Lines of <path>,<label>")->required();
  cIngest->add_option("--splits", ingest.splits, "Grid splits per level")->check(CLI::Range(1u, 64u))->capture_default_str();
  cIngest->add_option("--depth", ingest.depth, "Tree depth")->check(CLI::Range(0u, 8u))->capture_default_str();
  cIngest->add_option("--out", ingest.out, "Output dataset (MRKD1)")->required();

  GramArgs gram;
  auto* cGram = app.add_subcommand("gram", "Compute the multiresolution Gram matrix of a dataset");
  cGram->add_option("--data", gram.data, "Input dataset (MRKD1)")->required();
  cGram->add_option("--kernel", gram.kernel, "jd | rbf[:a=..,b=..,rho=..]")->capture_default_str();
  cGram->add_option("--epsilon", gram.epsilon, "Refinement probability: a real in [0,1] or 1/alpha")
      ->capture_default_str();
  cGram->add_option("--out", gram.out, "Output Gram (MRKG1, or CSV with --csv)")->required();
  cGram->add_flag("--csv", gram.csv, "Write CSV instead of the binary format");
  cGram->add_flag("--dense", gram.dense, "Dense CSV matrix instead of i,j,value triples");
  cGram->add_option("--threads", gram.threads, "Worker threads (0 = all cores)")->capture_default_str();

  OracleArgs oracle;
  auto* cOracle = app.add_subcommand("check-oracle", "Compare factorized and brute-force kernels on random inputs");
  cOracle->add_option("--alpha", oracle.alpha, "Tree branching")->check(CLI::Range(2u, 16u))->capture_default_str();
  cOracle->add_option("--depth", oracle.depth, "Tree depth")->check(CLI::Range(0u, 8u))->capture_default_str();
  cOracle->add_option("--trials", oracle.trials, "Random trials")->check(CLI::Range(1u, 100000000u))->capture_default_str();
  cOracle->add_option("--seed", oracle.seed, "Random seed")->capture_default_str();

  TrainArgs train;
  auto* cTrain = app.add_subcommand("train", "Train a one-vs-all SVM on a whole Gram file");
  cTrain->add_option("--gram", train.gram, "Input Gram (MRKG1)")->required();
  cTrain->add_option("--C", train.C, "Soft-margin constant")->check(CLI::PositiveNumber)->capture_default_str();
  cTrain->add_option("--tol", train.tol, "KKT stopping tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cTrain->add_option("--out", train.out, "Model text file (stdout if omitted)");
  cTrain->add_option("--threads", train.threads, "Worker threads (0 = all cores)")->capture_default_str();

  EvalArgs eval;
  auto* cEval = app.add_subcommand("eval", "Error rates over repeated stratified random splits");
  cEval->add_option("--gram", eval.gram, "Input Gram (MRKG1)")->required();
  cEval->add_option("--C", eval.C, "Soft-margin constant")->check(CLI::PositiveNumber)->capture_default_str();
  cEval->add_option("--tol", eval.tol, "KKT stopping tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cEval->add_option("--splits", eval.splits, "Number of random splits")->check(CLI::Range(1u, 100000u))->capture_default_str();
  cEval->add_option("--train-frac", eval.trainFrac, "Training fraction per class")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cEval->add_option("--seed", eval.seed, "Split seed")->capture_default_str();
  cEval->add_option("--out", eval.out, "CSV report (stdout if omitted)");
  cEval->add_option("--threads", eval.threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::string psdPath;
  auto* cPsd = app.add_subcommand("psd", "Print the smallest eigenvalue of a Gram file");
  cPsd->add_option("--gram", psdPath, "Input Gram (MRKG1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: UsageError: " << single_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*cSynth) return run_synth(synth);
    if (*cIngest) return run_ingest(ingest);
    if (*cGram) return run_gram(gram);
    if (*cOracle) return run_check_oracle(oracle);
    if (*cTrain) return run_train(train);
    if (*cEval) return run_eval(eval);
    if (*cPsd) return run_psd(psdPath);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << single_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << single_line(e.what()) << "\n";
    return 1;
  }
  return 2;
}
