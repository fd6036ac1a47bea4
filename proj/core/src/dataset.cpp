#include "mvmr/dataset.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "mvmr/text_io.hpp"

namespace mvmr {

namespace {

std::string line_context(const std::filesystem::path& path, int line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<Index> parse_index_list(const std::vector<std::string>& tokens, size_t start,
                                    const std::string& context) {
  std::vector<Index> out;
  for (size_t t = start; t < tokens.size(); ++t) {
    out.push_back(parse_long(tokens[t], context));
  }
  return out;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest '" + manifest_path.string() + "'");
  const std::filesystem::path base = manifest_path.parent_path();

  long samples = -1, labels = -1, views = -1;
  int version = -1;
  std::filesystem::path labels_path, split_path;
  struct ViewEntry {
    std::string name;
    ViewKind kind;
    DistanceMetric metric;
    std::filesystem::path path;
  };
  std::vector<ViewEntry> view_entries;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const std::string ctx = line_context(manifest_path, line_no);
    const std::string& key = tokens[0];
    if (key == "version" && tokens.size() == 2) {
      version = static_cast<int>(parse_long(tokens[1], ctx));
    } else if (key == "samples" && tokens.size() == 2) {
      samples = parse_long(tokens[1], ctx);
    } else if (key == "labels" && tokens.size() == 2) {
      labels = parse_long(tokens[1], ctx);
    } else if (key == "views" && tokens.size() == 2) {
      views = parse_long(tokens[1], ctx);
    } else if (key == "view" && tokens.size() == 5) {
      ViewEntry entry;
      entry.name = tokens[1];
      if (tokens[2] == "features") {
        entry.kind = ViewKind::Features;
        entry.metric = distance_metric_from_string(tokens[3]);
      } else if (tokens[2] == "gram") {
        entry.kind = ViewKind::PrecomputedGram;
        if (tokens[3] != "none") {
          throw DataError(ctx + ": precomputed-gram views take metric 'none'");
        }
        entry.metric = DistanceMetric::L2;
      } else {
        throw DataError(ctx + ": view kind must be 'features' or 'gram'");
      }
      entry.path = base / tokens[4];
      view_entries.push_back(std::move(entry));
    } else if (key == "labels_file" && tokens.size() == 2) {
      labels_path = base / tokens[1];
    } else if (key == "split_file" && tokens.size() == 2) {
      split_path = base / tokens[1];
    } else {
      throw DataError(ctx + ": unrecognized manifest line '" + line + "'");
    }
  }

  if (version != 1) throw DataError(manifest_path.string() + ": unsupported or missing version");
  if (samples < 1 || labels < 1) {
    throw DataError(manifest_path.string() + ": samples and labels must be declared positive");
  }
  if (views != static_cast<long>(view_entries.size())) {
    throw DataError(manifest_path.string() + ": declared view count does not match view lines");
  }
  if (labels_path.empty() || split_path.empty()) {
    throw DataError(manifest_path.string() + ": labels_file and split_file are required");
  }

  Dataset data;
  for (const auto& entry : view_entries) {
    ViewData view;
    view.name = entry.name;
    view.kind = entry.kind;
    view.metric = entry.metric;
    view.data = read_matrix_file(entry.path);
    if (view.data.rows() != samples) {
      throw DataError(entry.path.string() + ": expected " + std::to_string(samples) + " rows");
    }
    data.views.push_back(std::move(view));
  }

  data.labels = read_matrix_file(labels_path);
  if (data.labels.rows() != samples || data.labels.cols() != labels) {
    throw DataError(labels_path.string() + ": label matrix shape mismatch");
  }

  std::ifstream split_in(split_path);
  if (!split_in) throw DataError("cannot open split file '" + split_path.string() + "'");
  int split_line = 0;
  while (std::getline(split_in, line)) {
    ++split_line;
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const std::string ctx = line_context(split_path, split_line);
    if (tokens[0] == "labeled") {
      data.labeled = parse_index_list(tokens, 1, ctx);
    } else if (tokens[0] == "unlabeled") {
      data.unlabeled = parse_index_list(tokens, 1, ctx);
    } else if (tokens[0] == "test") {
      data.test = parse_index_list(tokens, 1, ctx);
    } else {
      throw DataError(ctx + ": split lines start with labeled/unlabeled/test");
    }
  }

  data.validate();
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ostringstream manifest;
  manifest << "version 1\n";
  manifest << "samples " << data.total_samples() << '\n';
  manifest << "labels " << data.label_count() << '\n';
  manifest << "views " << data.view_count() << '\n';
  for (size_t v = 0; v < data.views.size(); ++v) {
    const ViewData& view = data.views[v];
    const std::string file = "view_" + std::to_string(v) + "_" + view.name + ".txt";
    if (view.kind == ViewKind::Features) {
      manifest << "view " << view.name << " features " << to_string(view.metric) << ' ' << file
               << '\n';
    } else {
      manifest << "view " << view.name << " gram none " << file << '\n';
    }
    write_matrix_file(dir / file, view.data);
  }
  manifest << "labels_file labels.txt\n";
  manifest << "split_file split.txt\n";
  write_matrix_file(dir / "labels.txt", data.labels);

  std::ostringstream split;
  auto write_split = [&](const char* name, const std::vector<Index>& idx) {
    split << name;
    for (Index i : idx) split << ' ' << i;
    split << '\n';
  };
  write_split("labeled", data.labeled);
  write_split("unlabeled", data.unlabeled);
  write_split("test", data.test);
  atomic_write_file(dir / "split.txt", split.str());

  atomic_write_file(dir / "manifest.txt", manifest.str());
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");

  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    }
    if (trimmed.empty()) continue;
    const std::string ctx = line_context(path, line_no);
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw DataError(ctx + ": expected key=value");
    const std::string key = trimmed.substr(0, eq);
    const std::string value = trimmed.substr(eq + 1);

    auto parse_weights = [&](const std::string& v) {
      std::vector<double> out;
      std::string token;
      std::istringstream stream(v);
      while (std::getline(stream, token, ',')) out.push_back(parse_double(token, ctx));
      return out;
    };

    if (key == "gamma_a") cfg.gamma_a = parse_double(value, ctx);
    else if (key == "gamma_i") cfg.gamma_i = parse_double(value, ctx);
    else if (key == "gamma_b") cfg.gamma_b = parse_double(value, ctx);
    else if (key == "gamma_c") cfg.gamma_c = parse_double(value, ctx);
    else if (key == "gamma_o") cfg.gamma_o = parse_double(value, ctx);
    else if (key == "k_in") cfg.k_in = static_cast<int>(parse_long(value, ctx));
    else if (key == "k_out") cfg.k_out = static_cast<int>(parse_long(value, ctx));
    else if (key == "loss") cfg.loss = loss_from_string(value);
    else if (key == "normalized_laplacian") {
      if (value == "true" || value == "1") cfg.normalized_laplacian = true;
      else if (value == "false" || value == "0") cfg.normalized_laplacian = false;
      else throw DataError(ctx + ": normalized_laplacian must be true/false");
    } else if (key == "stop_threshold") cfg.stop_threshold = parse_double(value, ctx);
    else if (key == "max_outer_iter") cfg.max_outer_iter = static_cast<int>(parse_long(value, ctx));
    else if (key == "ridge_scale") cfg.ridge_scale = parse_double(value, ctx);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, ctx));
    else if (key == "beta_init") cfg.beta_init = parse_weights(value);
    else if (key == "theta_init") cfg.theta_init = parse_weights(value);
    else throw DataError(ctx + ": unknown config key '" + key + "'");
  }

  cfg.validate();
  return cfg;
}

}  // namespace mvmr
