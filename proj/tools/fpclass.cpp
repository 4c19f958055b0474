// fingerprint-classification pipeline CLI: synthetic data generation,
// training, classification, evaluation and reconstruction export.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpc/dataset.hpp"
#include "fpc/eval.hpp"
#include "fpc/fuzzy.hpp"
#include "fpc/infogain.hpp"
#include "fpc/model_io.hpp"
#include "fpc/orientation.hpp"
#include "fpc/pgm.hpp"
#include "fpc/sae.hpp"
#include "fpc/softmax.hpp"
#include "fpc/synthgen.hpp"

using namespace fpc;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string tok = s.substr(pos, comma - pos);
    if (!tok.empty()) {
      try {
        out.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ParseError("bad integer '" + tok + "' in list");
      }
    }
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string tok = s.substr(pos, comma - pos);
    if (!tok.empty()) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + tok + "' in list");
      }
    }
    pos = comma + 1;
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

OrientationField load_input_field(const std::string& path, int block) {
  if (ends_with(path, ".pgm")) return block_orientation(load_pgm_file(path), block);
  return load_field(path);
}

std::string fmt(const char* format, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Shared numeric knobs; flags override config-file values override these.
struct PipelineCfg {
  std::string layers = "400,100,50";
  double scale = 1.0;
  double sae_lambda = 0.003;
  double sae_beta = 0.05;
  double sae_rho = 0.2;
  int sae_iters = 600;
  double sae_grad_tol = 1e-5;
  double softmax_lambda = 1e-4;
  int softmax_iters = 2000;
  double softmax_grad_tol = 1e-5;
  double threshold = 0.6;
  double sum_threshold = 0.8;
  double reject = 0.0;
  int block = 20;
  std::uint64_t seed = 1;
};

SaeHyper sae_hyper_of(const PipelineCfg& cfg) {
  SaeHyper h;
  h.lambda = cfg.sae_lambda;
  h.beta = cfg.sae_beta;
  h.rho = cfg.sae_rho;
  h.max_iters = cfg.sae_iters;
  h.grad_tol = cfg.sae_grad_tol;
  return h;
}

std::vector<int> scaled_layers(const PipelineCfg& cfg) {
  std::vector<int> sizes = parse_int_list(cfg.layers);
  for (int& s : sizes) {
    s = static_cast<int>(s * cfg.scale);
    if (s < 1) s = 1;
  }
  return sizes;
}

void add_sae_options(CLI::App* cmd, PipelineCfg& cfg) {
  cmd->add_option("--layers", cfg.layers, "Hidden layer sizes, comma separated (empty for none)")
      ->capture_default_str();
  cmd->add_option("--scale", cfg.scale, "Multiplier applied to every hidden size")
      ->capture_default_str();
  cmd->add_option("--sae-lambda", cfg.sae_lambda, "Autoencoder weight decay")->capture_default_str();
  cmd->add_option("--sae-beta", cfg.sae_beta, "Sparsity penalty weight")->capture_default_str();
  cmd->add_option("--sae-rho", cfg.sae_rho, "Target mean hidden activation")->capture_default_str();
  cmd->add_option("--sae-iters", cfg.sae_iters, "Max autoencoder iterations per layer")
      ->capture_default_str();
  cmd->add_option("--sae-grad-tol", cfg.sae_grad_tol, "Autoencoder gradient tolerance")
      ->capture_default_str();
  cmd->add_option("--softmax-lambda", cfg.softmax_lambda, "Softmax regularization weight")
      ->capture_default_str();
  cmd->add_option("--softmax-iters", cfg.softmax_iters, "Max softmax iterations")
      ->capture_default_str();
  cmd->add_option("--softmax-grad-tol", cfg.softmax_grad_tol, "Softmax gradient tolerance")
      ->capture_default_str();
}

// Feature matrix (double-angle encoding) for a labeled dataset. All fields
// must share one grid shape.
Matrix features_of(const std::vector<LabeledField>& samples, int& rows, int& cols) {
  rows = samples.front().field.rows;
  cols = samples.front().field.cols;
  Matrix f(static_cast<int>(samples.size()), 2 * rows * cols);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const OrientationField& field = samples[i].field;
    if (field.rows != rows || field.cols != cols)
      throw DimError("dataset mixes grid sizes: " + samples[i].name + " is " +
                     std::to_string(field.rows) + "x" + std::to_string(field.cols) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
    FeatureVector fv = encode_features(field);
    std::copy(fv.values.begin(), fv.values.end(), f.row(static_cast<int>(i)));
  }
  return f;
}

int expected_feature_dim(const Model& model) {
  if (!model.encoder.layers.empty()) return model.encoder.layers.front().visible();
  if (model.softmax) return model.softmax->n();
  throw Error("model is empty (no encoder layers, no classifier)");
}

FuzzyDecision decide(const Model& model, const FeatureVector& fv, double threshold) {
  if (!model.softmax) throw Error("model has no trained classifier section");
  if (static_cast<int>(fv.values.size()) != expected_feature_dim(model))
    throw DimError("field " + std::to_string(fv.rows) + "x" + std::to_string(fv.cols) +
                   " gives feature length " + std::to_string(fv.values.size()) +
                   ", model expects " + std::to_string(expected_feature_dim(model)));
  std::vector<double> code = stack_encode(model.encoder, fv.values);
  return fuzzy_classify(classify(*model.softmax, code), threshold);
}

// ---------------------------------------------------------------- commands

int cmd_gen(const std::string& out_dir, int per_class, int rows, int cols, double noise,
            std::uint64_t seed) {
  SynthSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.per_class = {per_class, per_class, per_class, per_class};
  spec.noise_sigma = noise;
  spec.rng_seed = seed;
  auto samples = generate_dataset(spec);
  save_dataset(out_dir, samples);
  if (samples.empty()) std::cerr << "warning: generated an empty dataset\n";
  std::cout << "wrote " << samples.size() << " samples to " << out_dir << "\n";
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& model_path, const PipelineCfg& cfg) {
  auto samples = load_dataset(data_dir, cfg.block);
  if (samples.empty()) throw Error("dataset " + data_dir + " is empty");

  SplitIndices split = split_by_name_hash(samples, cfg.seed);
  int rows = 0, cols = 0;
  Matrix all = features_of(samples, rows, cols);

  Matrix train_data(static_cast<int>(split.train.size()), all.cols());
  std::vector<int> train_labels(split.train.size());
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    std::copy_n(all.row(split.train[i]), all.cols(), train_data.row(static_cast<int>(i)));
    train_labels[i] = static_cast<int>(samples[split.train[i]].label);
  }
  std::cout << "loaded " << samples.size() << " samples (" << split.train.size() << " train, "
            << split.test.size() << " held out), feature dim " << all.cols() << "\n";

  const std::vector<int> sizes = scaled_layers(cfg);
  const std::vector<SaeHyper> hyper(sizes.size(), sae_hyper_of(cfg));
  TrainedStack stack = train_stack_full(train_data, sizes, hyper, cfg.seed);
  for (std::size_t k = 0; k < stack.encoder.layers.size(); ++k) {
    const LayerParams& p = stack.encoder.layers[k];
    const auto& hist = stack.cost_histories[k];
    std::cout << "layer " << k + 1 << ": " << p.visible() << " -> " << p.hidden() << ", "
              << hist.size() - 1 << " iterations, cost " << fmt("%.6f", hist.front()) << " -> "
              << fmt("%.6f", hist.back()) << "\n";
  }

  Matrix codes = stack_encode_batch(stack.encoder, train_data);
  SoftmaxTrainOptions sopt;
  sopt.lambda = cfg.softmax_lambda;
  sopt.max_iters = cfg.softmax_iters;
  sopt.grad_tol = cfg.softmax_grad_tol;
  SoftmaxModel sm = train_softmax(codes, train_labels, kNumClasses, sopt, cfg.seed ^ 0xC1A55F1EULL);
  std::cout << "softmax: trained on " << codes.rows() << " codes of dim " << codes.cols() << "\n";

  Model model;
  model.encoder = std::move(stack.encoder);
  model.softmax = std::move(sm);
  save_model(model_path, model);
  std::cout << "wrote model to " << model_path << "\n";

  if (!split.test.empty()) {
    std::vector<ClassLabel> preds, labels;
    for (int idx : split.test) {
      std::vector<double> code =
          stack_encode(model.encoder, std::span<const double>(all.row(idx), all.cols()));
      preds.push_back(classify(*model.softmax, code)[0].first);
      labels.push_back(samples[idx].label);
    }
    ConfusionMatrix cm = confusion(preds, labels);
    std::cout << "held-out confusion (" << split.test.size() << " samples):\n"
              << confusion_to_tsv(cm) << "held-out top-1 accuracy: " << fmt("%.6f", accuracy(cm))
              << "\n";
  }
  return 0;
}

int cmd_classify(const std::string& model_path, const std::string& input, const PipelineCfg& cfg) {
  Model model = load_model(model_path);
  OrientationField field = load_input_field(input, cfg.block);
  FuzzyDecision d = decide(model, encode_features(field), cfg.threshold);
  d.rescued = rescue_condition(d, cfg.sum_threshold);

  std::string ranked;
  for (const auto& [label, p] : d.ranked) {
    if (!ranked.empty()) ranked += ',';
    ranked += to_string(label);
    ranked += ':';
    ranked += fmt("%.6f", p);
  }
  std::cout << input << "\tprimary=" << to_string(d.primary) << "\tfp=" << fmt("%.6f", d.fp())
            << "\tsecondary=" << (d.secondary ? to_string(*d.secondary) : "-")
            << "\trescued=" << (d.rescued ? 1 : 0) << "\tranked=" << ranked << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_dir,
             const std::string& thresholds_csv, const std::string& sum_thresholds_csv,
             const std::string& split_mode, const PipelineCfg& cfg) {
  Model model = load_model(model_path);
  if (!model.softmax) throw Error("model has no trained classifier section");
  auto samples = load_dataset(data_dir, cfg.block);
  if (samples.empty()) throw Error("dataset " + data_dir + " is empty");

  std::vector<int> keep;
  if (split_mode == "all") {
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) keep.push_back(i);
  } else {
    SplitIndices split = split_by_name_hash(samples, cfg.seed);
    keep = split_mode == "train" ? split.train : split.test;
  }
  if (keep.empty()) throw Error("selected split is empty");

  std::vector<FuzzyDecision> decisions;
  std::vector<ClassLabel> labels;
  for (int idx : keep) {
    decisions.push_back(decide(model, encode_features(samples[idx].field), cfg.threshold));
    labels.push_back(samples[idx].label);
  }

  reject_lowest(decisions, cfg.reject);
  std::vector<ClassLabel> preds;
  std::vector<std::uint8_t> rejects;
  for (const FuzzyDecision& d : decisions) {
    preds.push_back(d.primary);
    rejects.push_back(d.rejected ? 1 : 0);
  }
  ConfusionMatrix cm = confusion(preds, labels, rejects);
  std::cout << "confusion (" << keep.size() << " samples, " << cm.n_rejected << " rejected):\n"
            << confusion_to_tsv(cm) << "accuracy: " << fmt("%.6f", accuracy(cm)) << "\n";

  const std::vector<double> thresholds = parse_double_list(thresholds_csv);
  if (thresholds.empty()) return 0;  // matrix only

  std::cout << "sweep:\n" << sweep_to_tsv(sweep(decisions, labels, thresholds));

  std::vector<FuzzyDecision> missed;
  std::vector<ClassLabel> missed_labels;
  for (std::size_t i = 0; i < decisions.size(); ++i)
    if (decisions[i].primary != labels[i]) {
      missed.push_back(decisions[i]);
      missed_labels.push_back(labels[i]);
    }
  std::cout << "recall (over " << missed.size() << " top-1-misclassified):\n"
            << "sum_threshold\tnum_below\trecall\n";
  for (double st : parse_double_list(sum_thresholds_csv)) {
    auto [num, recall] = recall_rate(missed, missed_labels, st);
    std::cout << fmt("%.6g", st) << "\t" << num << "\t" << fmt("%.6f", recall) << "\n";
  }
  return 0;
}

int cmd_reconstruct(const std::string& model_path, const std::string& input,
                    const std::string& out_path, const PipelineCfg& cfg) {
  Model model = load_model(model_path);
  OrientationField field = load_input_field(input, cfg.block);
  FeatureVector fv = encode_features(field);
  if (!model.encoder.layers.empty() &&
      static_cast<int>(fv.values.size()) != model.encoder.layers.front().visible())
    throw DimError("field " + std::to_string(fv.rows) + "x" + std::to_string(fv.cols) +
                   " gives feature length " + std::to_string(fv.values.size()) +
                   ", model expects " + std::to_string(model.encoder.layers.front().visible()));

  Reconstruction rec = reconstruct(model.encoder, fv);
  save_field(out_path, rec.field);

  double err = 0.0;
  long cells = 0;
  for (std::size_t i = 0; i < field.cell_count(); ++i) {
    if (!field.valid[i]) continue;
    err += angle_distance(rec.field.angles[i], field.angles[i]);
    ++cells;
  }
  const double mean_deg = cells ? err / cells * 180.0 / kPi : 0.0;
  std::cout << "wrote " << out_path << "\tmean angular error: " << fmt("%.4f", mean_deg)
            << " deg over " << cells << " valid cells\n";
  return 0;
}

int cmd_infogain(const std::string& data_dir, const std::string& schemes_csv, int bins,
                 const PipelineCfg& cfg) {
  auto samples = load_dataset(data_dir, cfg.block);
  if (samples.empty()) throw Error("dataset " + data_dir + " is empty");
  std::vector<std::pair<OrientationField, ClassLabel>> dataset;
  for (LabeledField& s : samples) dataset.emplace_back(std::move(s.field), s.label);

  std::vector<EncodingScheme> schemes;
  std::size_t pos = 0;
  while (pos < schemes_csv.size()) {
    std::size_t comma = schemes_csv.find(',', pos);
    if (comma == std::string::npos) comma = schemes_csv.size();
    const std::string tok = schemes_csv.substr(pos, comma - pos);
    if (!tok.empty()) schemes.push_back(scheme_from_string(tok));
    pos = comma + 1;
  }
  if (schemes.empty()) throw Error("no encoding schemes selected");

  std::cout << gains_to_tsv(compare_encodings(dataset, schemes, bins));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fingerprint classification pipeline (orientation fields, stacked sparse "
               "autoencoder, softmax, fuzzy decisions)"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "Read options from a key=value file");
  app.set_version_flag("--version", "fpclass 1.0");

  bool show_config = false;
  app.add_flag("--show-config", show_config, "Print every option with its default and exit");

  PipelineCfg cfg;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic labeled orientation-field dataset");
  std::string gen_out = "dataset";
  int per_class = 250;
  int rows = 25, cols = 25;
  double noise = 0.15;
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();
  gen->add_option("--per-class", per_class, "Samples per class (A, L, R, W)")->capture_default_str();
  gen->add_option("--rows", rows, "Field rows")->capture_default_str();
  gen->add_option("--cols", cols, "Field cols")->capture_default_str();
  gen->add_option("--noise", noise, "Angular noise sigma in radians")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train the stacked autoencoder and softmax classifier");
  std::string data_dir = "dataset";
  std::string model_path = "fpclass.model";
  train->add_option("--data", data_dir, "Dataset directory (labels.tsv plus .of/.pgm files)")
      ->capture_default_str();
  train->add_option("--model", model_path, "Output model file")->capture_default_str();
  train->add_option("--block", cfg.block, "Block size for .pgm inputs")->capture_default_str();
  train->add_option("--seed", cfg.seed, "RNG seed (also keys the train/test split)")
      ->capture_default_str();
  add_sae_options(train, cfg);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Classify one orientation field or image");
  std::string input;
  classify_cmd->add_option("--model", model_path, "Model file")->capture_default_str();
  classify_cmd->add_option("--input", input, "Input .of or .pgm file")->required();
  classify_cmd->add_option("--threshold", cfg.threshold, "Secondary-class threshold on fp")
      ->capture_default_str();
  classify_cmd->add_option("--sum-threshold", cfg.sum_threshold, "Rescue threshold on fp+sp")
      ->capture_default_str();
  classify_cmd->add_option("--block", cfg.block, "Block size for .pgm inputs")->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model over a dataset");
  std::string thresholds_csv = "0.6,0.7,0.75,0.8,0.85,0.9,0.95,1.0";
  std::string sum_thresholds_csv = "0.8,0.82,0.85";
  std::string split_mode = "all";
  eval_cmd->add_option("--model", model_path, "Model file")->capture_default_str();
  eval_cmd->add_option("--data", data_dir, "Dataset directory")->capture_default_str();
  eval_cmd->add_option("--thresholds", thresholds_csv, "Sweep thresholds (empty: matrix only)")
      ->capture_default_str();
  eval_cmd->add_option("--sum-thresholds", sum_thresholds_csv, "Rescue sum thresholds")
      ->capture_default_str();
  eval_cmd->add_option("--reject", cfg.reject, "Fraction of lowest-confidence samples to reject")
      ->capture_default_str();
  eval_cmd
      ->add_option("--split", split_mode, "Evaluate 'all', 'train' or 'test' (hash split by --seed)")
      ->check(CLI::IsMember({"all", "train", "test"}))
      ->capture_default_str();
  eval_cmd->add_option("--threshold", cfg.threshold, "Secondary-class threshold on fp")
      ->capture_default_str();
  eval_cmd->add_option("--seed", cfg.seed, "Split seed (must match training)")->capture_default_str();
  eval_cmd->add_option("--block", cfg.block, "Block size for .pgm inputs")->capture_default_str();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Run a field through the autoencoder and export it");
  std::string rec_out = "reconstructed.of";
  rec->add_option("--model", model_path, "Model file")->capture_default_str();
  rec->add_option("--input", input, "Input .of or .pgm file")->required();
  rec->add_option("--out", rec_out, "Output .of file")->capture_default_str();
  rec->add_option("--block", cfg.block, "Block size for .pgm inputs")->capture_default_str();

  // infogain
  auto* ig = app.add_subcommand("infogain", "Rank feature encodings by mean information gain");
  std::string schemes_csv = "f1,f2,f3,f4,f5,f6";
  int bins = 8;
  ig->add_option("--data", data_dir, "Dataset directory")->capture_default_str();
  ig->add_option("--schemes", schemes_csv, "Encodings to compare")->capture_default_str();
  ig->add_option("--bins", bins, "Discretization bins")->capture_default_str();
  ig->add_option("--block", cfg.block, "Block size for .pgm inputs")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (show_config) {
      std::cout << app.config_to_str(true, true);
      return 0;
    }
    if (gen->parsed()) return cmd_gen(gen_out, per_class, rows, cols, noise, cfg.seed);
    if (train->parsed()) return cmd_train(data_dir, model_path, cfg);
    if (classify_cmd->parsed()) return cmd_classify(model_path, input, cfg);
    if (eval_cmd->parsed())
      return cmd_eval(model_path, data_dir, thresholds_csv, sum_thresholds_csv, split_mode, cfg);
    if (rec->parsed()) return cmd_reconstruct(model_path, input, rec_out, cfg);
    if (ig->parsed()) return cmd_infogain(data_dir, schemes_csv, bins, cfg);
    std::cout << app.help();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
