#include "mvmr/model_io.hpp"

#include <fstream>
#include <sstream>

#include "mvmr/text_io.hpp"

namespace mvmr {

namespace {

void write_vector_line(std::ostream& out, const std::string& key, const Vector& v) {
  out << key;
  for (Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

void write_double_list(std::ostream& out, const std::string& key,
                       const std::vector<double>& values) {
  out << key;
  if (values.empty()) {
    out << " -";
  } else {
    for (double v : values) out << ' ' << format_double(v);
  }
  out << '\n';
}

Vector parse_vector(const std::vector<std::string>& tokens, const std::string& ctx) {
  Vector v(static_cast<Index>(tokens.size() - 1));
  for (size_t t = 1; t < tokens.size(); ++t) {
    v[static_cast<Index>(t - 1)] = parse_double(tokens[t], ctx);
  }
  return v;
}

std::string expect_line(std::istream& in, const std::string& ctx) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(ctx + ": unexpected end of model file");
  return line;
}

// Rebuilds the normalized + ridged training Gram block from stored features.
void rebuild_gram(TrainedView& view) {
  GramMatrix gram;
  if (view.metric == DistanceMetric::PrecomputedLinear) {
    gram.k = linear_kernel(view.train_features, view.train_features);
  } else {
    gram = exp_kernel(pairwise_distance(view.train_features, view.train_features, view.metric));
  }
  gram = unit_trace_normalize(std::move(gram));
  gram.k.diagonal().array() += view.ridge;
  view.lambda = gram.lambda;
  view.trace_scale = gram.trace_scale;
  view.degenerate = gram.degenerate;
  view.gram = std::move(gram.k);
}

}  // namespace

void save_model(const ModelState& model, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "mvmr-model 1\n";
  out << "loss " << to_string(model.loss) << '\n';
  out << "labels " << model.n << '\n';
  out << "labeled " << model.l << '\n';
  out << "train_count " << model.train_count << '\n';
  out << "view_count " << model.views.size() << '\n';

  const TrainConfig& cfg = model.config;
  out << "gamma_a " << format_double(cfg.gamma_a) << '\n';
  out << "gamma_i " << format_double(cfg.gamma_i) << '\n';
  out << "gamma_b " << format_double(cfg.gamma_b) << '\n';
  out << "gamma_c " << format_double(cfg.gamma_c) << '\n';
  out << "gamma_o " << format_double(cfg.gamma_o) << '\n';
  out << "k_in " << cfg.k_in << '\n';
  out << "k_out " << cfg.k_out << '\n';
  out << "normalized_laplacian " << (cfg.normalized_laplacian ? 1 : 0) << '\n';
  out << "stop_threshold " << format_double(cfg.stop_threshold) << '\n';
  out << "max_outer_iter " << cfg.max_outer_iter << '\n';
  out << "ridge_scale " << format_double(cfg.ridge_scale) << '\n';
  out << "seed " << cfg.seed << '\n';
  write_double_list(out, "beta_init", cfg.beta_init);
  write_double_list(out, "theta_init", cfg.theta_init);

  write_vector_line(out, "beta", model.beta);
  write_vector_line(out, "theta", model.theta);
  write_vector_line(out, "bias", model.bias);
  out << "train_rows";
  for (Index i : model.train_rows) out << ' ' << i;
  out << '\n';

  out << "warnings " << model.warnings.size() << '\n';
  for (const auto& w : model.warnings) out << "warning " << w << '\n';

  out << "trace";
  for (double o : model.objective_trace) out << ' ' << format_double(o);
  out << '\n';

  out << "q\n";
  write_matrix(out, model.q);
  out << "coeff\n";
  write_matrix(out, model.coeff);

  for (size_t v = 0; v < model.views.size(); ++v) {
    const TrainedView& view = model.views[v];
    out << "view " << v << ' ' << view.name << ' '
        << (view.kind == ViewKind::Features ? "features" : "gram") << ' '
        << (view.kind == ViewKind::Features ? to_string(view.metric) : std::string("none"))
        << '\n';
    out << "lambda " << format_double(view.lambda) << '\n';
    out << "trace_scale " << format_double(view.trace_scale) << '\n';
    out << "ridge " << format_double(view.ridge) << '\n';
    out << "degenerate " << (view.degenerate ? 1 : 0) << '\n';
    if (view.kind == ViewKind::Features) {
      out << "features\n";
      write_matrix(out, view.train_features);
    } else {
      out << "gram\n";
      write_matrix(out, view.gram);
    }
  }
  out << "end\n";

  atomic_write_file(path, out.str());
}

ModelState load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  const std::string ctx = path.string();

  if (expect_line(in, ctx) != "mvmr-model 1") {
    throw DataError(ctx + ": not a version-1 model file");
  }

  ModelState model;
  TrainConfig& cfg = model.config;
  long view_count = 0;

  auto next_tokens = [&]() { return split_tokens(expect_line(in, ctx)); };

  bool reading_header = true;
  std::vector<std::string> tokens;
  while (reading_header) {
    tokens = next_tokens();
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "loss") model.loss = loss_from_string(tokens.at(1));
    else if (key == "labels") model.n = parse_long(tokens.at(1), ctx);
    else if (key == "labeled") model.l = parse_long(tokens.at(1), ctx);
    else if (key == "train_count") model.train_count = parse_long(tokens.at(1), ctx);
    else if (key == "view_count") view_count = parse_long(tokens.at(1), ctx);
    else if (key == "gamma_a") cfg.gamma_a = parse_double(tokens.at(1), ctx);
    else if (key == "gamma_i") cfg.gamma_i = parse_double(tokens.at(1), ctx);
    else if (key == "gamma_b") cfg.gamma_b = parse_double(tokens.at(1), ctx);
    else if (key == "gamma_c") cfg.gamma_c = parse_double(tokens.at(1), ctx);
    else if (key == "gamma_o") cfg.gamma_o = parse_double(tokens.at(1), ctx);
    else if (key == "k_in") cfg.k_in = static_cast<int>(parse_long(tokens.at(1), ctx));
    else if (key == "k_out") cfg.k_out = static_cast<int>(parse_long(tokens.at(1), ctx));
    else if (key == "normalized_laplacian") cfg.normalized_laplacian = tokens.at(1) == "1";
    else if (key == "stop_threshold") cfg.stop_threshold = parse_double(tokens.at(1), ctx);
    else if (key == "max_outer_iter") cfg.max_outer_iter = static_cast<int>(parse_long(tokens.at(1), ctx));
    else if (key == "ridge_scale") cfg.ridge_scale = parse_double(tokens.at(1), ctx);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(tokens.at(1), ctx));
    else if (key == "beta_init" || key == "theta_init") {
      std::vector<double> values;
      if (!(tokens.size() == 2 && tokens[1] == "-")) {
        for (size_t t = 1; t < tokens.size(); ++t) values.push_back(parse_double(tokens[t], ctx));
      }
      (key == "beta_init" ? cfg.beta_init : cfg.theta_init) = std::move(values);
    } else if (key == "beta") model.beta = parse_vector(tokens, ctx);
    else if (key == "theta") model.theta = parse_vector(tokens, ctx);
    else if (key == "bias") model.bias = parse_vector(tokens, ctx);
    else if (key == "train_rows") {
      for (size_t t = 1; t < tokens.size(); ++t) {
        model.train_rows.push_back(parse_long(tokens[t], ctx));
      }
    } else if (key == "warnings") {
      const long count = parse_long(tokens.at(1), ctx);
      for (long w = 0; w < count; ++w) {
        std::string line = expect_line(in, ctx);
        if (line.rfind("warning ", 0) != 0) throw DataError(ctx + ": malformed warning line");
        model.warnings.push_back(line.substr(8));
      }
    } else if (key == "trace") {
      for (size_t t = 1; t < tokens.size(); ++t) {
        model.objective_trace.push_back(parse_double(tokens[t], ctx));
      }
    } else if (key == "q") {
      model.q = read_matrix(in, ctx + " (q)");
    } else if (key == "coeff") {
      model.coeff = read_matrix(in, ctx + " (coeff)");
    } else if (key == "view" || key == "end") {
      reading_header = false;
    } else {
      throw DataError(ctx + ": unknown model line '" + key + "'");
    }
  }

  while (!tokens.empty() && tokens[0] == "view") {
    if (tokens.size() != 5) throw DataError(ctx + ": malformed view line");
    TrainedView view;
    view.name = tokens[2];
    view.kind = tokens[3] == "features" ? ViewKind::Features : ViewKind::PrecomputedGram;
    if (view.kind == ViewKind::Features) {
      view.metric = distance_metric_from_string(tokens[4]);
    }
    double stored_lambda = 0.0, stored_scale = 1.0;
    for (int field = 0; field < 4; ++field) {
      const auto ft = next_tokens();
      if (ft.size() != 2) throw DataError(ctx + ": malformed view field");
      if (ft[0] == "lambda") stored_lambda = parse_double(ft[1], ctx);
      else if (ft[0] == "trace_scale") stored_scale = parse_double(ft[1], ctx);
      else if (ft[0] == "ridge") view.ridge = parse_double(ft[1], ctx);
      else if (ft[0] == "degenerate") view.degenerate = ft[1] == "1";
      else throw DataError(ctx + ": unexpected view field '" + ft[0] + "'");
    }
    const std::string payload = expect_line(in, ctx);
    if (payload == "features") {
      view.train_features = read_matrix(in, ctx + " (features)");
      rebuild_gram(view);
    } else if (payload == "gram") {
      view.gram = read_matrix(in, ctx + " (gram)");
      view.lambda = stored_lambda;
      view.trace_scale = stored_scale;
    } else {
      throw DataError(ctx + ": expected a features or gram block");
    }
    model.views.push_back(std::move(view));
    tokens = next_tokens();
  }

  if (tokens.empty() || tokens[0] != "end") throw DataError(ctx + ": missing end marker");
  if (static_cast<long>(model.views.size()) != view_count) {
    throw DataError(ctx + ": declared view count does not match stored views");
  }

  if (model.n < 1 || model.l < 1 || model.train_count < model.l) {
    throw DataError(ctx + ": inconsistent sample or label counts");
  }
  if (model.coeff.rows() != model.train_count || model.coeff.cols() != model.n ||
      model.q.rows() != model.n || model.q.cols() != model.n || model.bias.size() != model.n) {
    throw DataError(ctx + ": stored matrices do not match the declared shape");
  }
  if (static_cast<Index>(model.train_rows.size()) != model.train_count) {
    throw DataError(ctx + ": train_rows length does not match the training count");
  }
  if (model.beta.size() != view_count || model.theta.size() != view_count) {
    throw DataError(ctx + ": weight vectors do not match the view count");
  }
  for (const auto& view : model.views) {
    if (view.gram.rows() != model.train_count || view.gram.cols() != model.train_count) {
      throw DataError(ctx + ": view '" + view.name + "' Gram block has the wrong shape");
    }
  }
  return model;
}

}  // namespace mvmr
