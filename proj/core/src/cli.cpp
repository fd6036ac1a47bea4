#include "mvmr/cli.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "mvmr/dataset.hpp"
#include "mvmr/metrics.hpp"
#include "mvmr/model_io.hpp"
#include "mvmr/synthetic.hpp"
#include "mvmr/text_io.hpp"

namespace mvmr {

namespace {

std::vector<Index> resolve_split(const Dataset& data, const std::string& split) {
  if (split == "labeled") return data.labeled;
  if (split == "unlabeled") return data.unlabeled;
  if (split == "test") return data.test;
  if (split == "train") {
    std::vector<Index> rows = data.labeled;
    rows.insert(rows.end(), data.unlabeled.begin(), data.unlabeled.end());
    return rows;
  }
  throw DataError("unknown split '" + split + "' (use labeled, unlabeled, train or test)");
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

/// Scores for arbitrary dataset rows: training rows reproduce the model's
/// transductive scores exactly, other rows go through the kernel expansion.
Matrix score_rows(const ModelState& model, const Dataset& data, const std::vector<Index>& rows) {
  if (data.view_count() != static_cast<Index>(model.views.size()) ||
      data.label_count() != model.n) {
    throw DataError("dataset shape does not match the model (views or labels differ)");
  }
  for (Index r : model.train_rows) {
    if (r < 0 || r >= data.total_samples()) {
      throw DataError("model references training row " + std::to_string(r) +
                      " outside the dataset");
    }
  }

  std::map<Index, Index> train_position;
  for (size_t p = 0; p < model.train_rows.size(); ++p) {
    train_position[model.train_rows[p]] = static_cast<Index>(p);
  }

  std::vector<Index> inductive_rows;
  for (Index r : rows) {
    if (!train_position.count(r)) inductive_rows.push_back(r);
  }

  Matrix transductive;
  if (inductive_rows.size() < rows.size()) transductive = model.transductive_scores();

  Matrix inductive;
  if (!inductive_rows.empty()) {
    std::vector<Matrix> inputs;
    for (size_t v = 0; v < data.views.size(); ++v) {
      const ViewData& view = data.views[v];
      if (view.kind == ViewKind::Features) {
        inputs.push_back(select_rows(view.data, inductive_rows));
      } else {
        Matrix block(static_cast<Index>(inductive_rows.size()),
                     static_cast<Index>(model.train_rows.size()));
        for (size_t i = 0; i < inductive_rows.size(); ++i) {
          for (size_t j = 0; j < model.train_rows.size(); ++j) {
            block(static_cast<Index>(i), static_cast<Index>(j)) =
                view.data(inductive_rows[i], model.train_rows[j]);
          }
        }
        inputs.push_back(std::move(block));
      }
    }
    inductive = predict(model, inputs).scores;
  }

  Matrix scores(static_cast<Index>(rows.size()), model.n);
  Index next_inductive = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto it = train_position.find(rows[r]);
    if (it != train_position.end()) {
      scores.row(static_cast<Index>(r)) = transductive.row(it->second);
    } else {
      scores.row(static_cast<Index>(r)) = inductive.row(next_inductive++);
    }
  }
  return scores;
}

std::string report_to_text(const EvaluationReport& report, const Matrix& scores,
                           const Matrix& truth) {
  const Index rows = scores.rows();
  const Index labels = scores.cols();
  std::ostringstream out;
  auto value_or = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("undefined");
  };
  out << "samples " << rows << '\n';
  out << "labels " << labels << '\n';
  out << "map " << value_or(report.mean_ap.value) << '\n';
  out << "mauc " << value_or(report.mean_auc.value) << '\n';
  out << "rl " << value_or(report.rl.value) << '\n';
  out << "ap_valid " << report.mean_ap.valid << '\n';
  out << "ap_invalid " << report.mean_ap.invalid << '\n';
  out << "auc_valid " << report.mean_auc.valid << '\n';
  out << "auc_invalid " << report.mean_auc.invalid << '\n';
  out << "rl_evaluated " << report.rl.evaluated << '\n';
  out << "rl_excluded " << report.rl.excluded << '\n';
  for (size_t j = 0; j < report.ap.size(); ++j) {
    out << "ap " << j << ' ' << value_or(report.ap[j]) << '\n';
  }
  for (size_t j = 0; j < report.auc.size(); ++j) {
    out << "auc " << j << ' ' << value_or(report.auc[j]) << '\n';
  }
  // Raw per-label precision-recall points, one per ranking cut.
  for (Index j = 0; j < labels; ++j) {
    for (const PrPoint& point : pr_curve(scores.col(j), truth.col(j))) {
      out << "pr " << j << ' ' << format_double(point.recall) << ' '
          << format_double(point.precision) << '\n';
    }
  }
  return out.str();
}

std::vector<Index> draw_subset(std::mt19937_64& rng, std::vector<Index> pool, size_t count) {
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

int command_train(const std::string& manifest, const std::string& config,
                  const std::string& out_model, const std::string& out_trace) {
  const Dataset data = load_dataset(manifest);
  const TrainConfig cfg = load_train_config(config);
  const ModelState model = fit(data, cfg);
  for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';

  save_model(model, out_model);
  std::ostringstream trace;
  for (double o : model.objective_trace) trace << format_double(o) << '\n';
  atomic_write_file(out_trace, trace.str());

  std::cout << "trained on " << model.train_count << " samples (" << model.l << " labeled), "
            << model.objective_trace.size() - 1 << " outer iterations, final objective "
            << format_double(model.objective_trace.back()) << '\n';
  return 0;
}

int command_predict(const std::string& model_path, const std::string& manifest,
                    const std::string& split, const std::string& out_scores) {
  const ModelState model = load_model(model_path);
  const Dataset data = load_dataset(manifest);
  const std::vector<Index> rows = resolve_split(data, split);
  if (rows.empty()) throw DataError("split '" + split + "' selects no rows");
  write_matrix_file(out_scores, score_rows(model, data, rows));
  std::cout << "scored " << rows.size() << " rows from split '" << split << "'\n";
  return 0;
}

int command_evaluate(const std::string& scores_path, const std::string& manifest,
                     const std::string& split, const std::string& out_report) {
  const Matrix scores = read_matrix_file(scores_path);
  const Dataset data = load_dataset(manifest);
  const std::vector<Index> rows = resolve_split(data, split);
  if (static_cast<size_t>(scores.rows()) != rows.size() || scores.cols() != data.label_count()) {
    throw DataError("score matrix shape does not match the split");
  }
  const Matrix truth = select_rows(data.labels, rows);
  if (truth.cwiseAbs().minCoeff() == 0.0) {
    throw DataError("split '" + split + "' contains rows without ground-truth labels");
  }
  const EvaluationReport report = evaluate_predictions(scores, truth);
  atomic_write_file(out_report, report_to_text(report, scores, truth));
  std::cout << "evaluated " << scores.rows() << " rows\n";
  return 0;
}

int command_compare(const std::string& manifest, const std::string& config, int labeled_count,
                    int repeats, std::uint64_t seed, const std::string& out_table) {
  const Dataset base = load_dataset(manifest);
  const TrainConfig cfg = load_train_config(config);
  if (labeled_count < 1 || static_cast<size_t>(labeled_count) >= base.labeled.size()) {
    throw DataError("labeled-count must leave at least one labeled row for evaluation");
  }
  if (repeats < 1) throw DataError("repeats must be positive");

  std::mt19937_64 rng(seed);
  std::ostringstream table;
  table << "# transductive metrics on the rows demoted to unlabeled, learned vs uniform weights\n";
  table << "# repeat labeled map_learned map_uniform mauc_learned mauc_uniform"
        << " rl_learned rl_uniform\n";

  auto metric = [](const std::optional<double>& v) {
    return v ? *v : std::numeric_limits<double>::quiet_NaN();
  };
  Vector sums = Vector::Zero(6);
  for (int r = 0; r < repeats; ++r) {
    const std::vector<Index> keep =
        draw_subset(rng, base.labeled, static_cast<size_t>(labeled_count));
    const Dataset subset = with_labeled_subset(base, keep);

    std::vector<Index> held_out;
    for (Index i : base.labeled) {
      if (std::find(keep.begin(), keep.end(), i) == keep.end()) held_out.push_back(i);
    }
    const Matrix truth = select_rows(base.labels, held_out);

    const ModelState learned = fit(subset, cfg);
    const ModelState uniform = fit_uniform_baseline(subset, cfg);
    const EvaluationReport rep_l =
        evaluate_predictions(score_rows(learned, subset, held_out), truth);
    const EvaluationReport rep_u =
        evaluate_predictions(score_rows(uniform, subset, held_out), truth);

    const double row[6] = {metric(rep_l.mean_ap.value),  metric(rep_u.mean_ap.value),
                           metric(rep_l.mean_auc.value), metric(rep_u.mean_auc.value),
                           metric(rep_l.rl.value),       metric(rep_u.rl.value)};
    table << r << ' ' << labeled_count;
    for (double v : row) table << ' ' << format_double(v);
    table << '\n';
    for (int c = 0; c < 6; ++c) sums[c] += row[c];
  }
  table << "mean " << labeled_count;
  for (int c = 0; c < 6; ++c) table << ' ' << format_double(sums[c] / repeats);
  table << '\n';

  atomic_write_file(out_table, table.str());
  std::cout << "compared learned vs uniform weights over " << repeats << " repeats\n";
  return 0;
}

int command_synth(const std::string& spec_path, const std::string& out_dir) {
  const SyntheticSpec spec = load_synthetic_spec(spec_path);
  const Dataset data = generate_synthetic(spec);
  save_dataset(data, out_dir);
  std::cout << "wrote synthetic dataset with " << data.total_samples() << " samples to "
            << out_dir << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"multi-view vector-valued manifold regularization"};
  app.require_subcommand(1);

  std::string manifest, config, model_path, split, scores_path;
  std::string out_model, out_trace, out_scores, out_report, out_table, out_dir, spec_path;
  int labeled_count = 0, repeats = 10;
  std::uint64_t seed = 0;

  CLI::App* train_cmd = app.add_subcommand("train", "fit a model on a dataset");
  train_cmd->add_option("--manifest", manifest, "dataset manifest path")->required();
  train_cmd->add_option("--config", config, "training config path")->required();
  train_cmd->add_option("--out-model", out_model, "output model path")->required();
  train_cmd->add_option("--out-trace", out_trace, "output objective-trace path")->required();

  CLI::App* predict_cmd = app.add_subcommand("predict", "score a dataset split");
  predict_cmd->add_option("--model", model_path, "model path")->required();
  predict_cmd->add_option("--manifest", manifest, "dataset manifest path")->required();
  predict_cmd->add_option("--split", split, "labeled|unlabeled|train|test")->required();
  predict_cmd->add_option("--out-scores", out_scores, "output score-matrix path")->required();

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "compute ranking metrics for scores");
  evaluate_cmd->add_option("--scores", scores_path, "score-matrix path")->required();
  evaluate_cmd->add_option("--manifest", manifest, "dataset manifest path")->required();
  evaluate_cmd->add_option("--split", split, "split the scores refer to")->required();
  evaluate_cmd->add_option("--out-report", out_report, "output report path")->required();

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "learned vs uniform weights over random label subsets");
  compare_cmd->add_option("--manifest", manifest, "dataset manifest path")->required();
  compare_cmd->add_option("--config", config, "training config path")->required();
  compare_cmd->add_option("--labeled-count", labeled_count, "labeled samples per repeat")
      ->required();
  compare_cmd->add_option("--repeats", repeats, "number of random subsets");
  compare_cmd->add_option("--seed", seed, "subset RNG seed");
  compare_cmd->add_option("--out-table", out_table, "output table path")->required();

  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  synth_cmd->add_option("--spec", spec_path, "synthetic spec path")->required();
  synth_cmd->add_option("--out-dir", out_dir, "output dataset directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(train_cmd)) return command_train(manifest, config, out_model, out_trace);
    if (app.got_subcommand(predict_cmd)) {
      return command_predict(model_path, manifest, split, out_scores);
    }
    if (app.got_subcommand(evaluate_cmd)) {
      return command_evaluate(scores_path, manifest, split, out_report);
    }
    if (app.got_subcommand(compare_cmd)) {
      return command_compare(manifest, config, labeled_count, repeats, seed, out_table);
    }
    if (app.got_subcommand(synth_cmd)) return command_synth(spec_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "error: no subcommand given\n";
  return 1;
}

}  // namespace mvmr
