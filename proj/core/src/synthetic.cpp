#include "mvmr/synthetic.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mvmr/text_io.hpp"

namespace mvmr {

namespace {

// Explicit uniform/normal draws on top of the fixed mt19937_64 stream keep
// the generator byte-stable across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

void SyntheticSpec::validate() const {
  if (labeled < 1) throw std::invalid_argument("synthetic spec needs at least one labeled sample");
  if (unlabeled < 0 || test < 0) throw std::invalid_argument("split counts must be nonnegative");
  if (labels < 1) throw std::invalid_argument("label count must be positive");
  if (views < 1) throw std::invalid_argument("view count must be positive");
  if (static_cast<int>(informativeness.size()) != views) {
    throw std::invalid_argument("one informativeness value per view is required");
  }
  for (double a : informativeness) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("informativeness must lie in [0, 1]");
  }
  if (label_correlation < 0.0 || label_correlation > 1.0) {
    throw std::invalid_argument("label correlation must lie in [0, 1]");
  }
  if (noise_level < 0.0) throw std::invalid_argument("noise level must be nonnegative");
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const Index total = spec.labeled + spec.unlabeled + spec.test;
  const Index n = spec.labels;
  const Index dim = 2 * n + 4;
  const double rho = spec.label_correlation;

  // Latent per-label scores mix a shared per-sample factor with
  // independent ones; the labels are their signs.
  Matrix latent(total, n);
  Matrix labels(total, n);
  for (Index i = 0; i < total; ++i) {
    const double shared = rng.normal();
    for (Index j = 0; j < n; ++j) {
      latent(i, j) = rho * shared + (1.0 - rho) * rng.normal();
      labels(i, j) = latent(i, j) >= 0.0 ? 1.0 : -1.0;
    }
  }

  Dataset data;
  for (int v = 0; v < spec.views; ++v) {
    Matrix map(dim, n);
    for (Index r = 0; r < dim; ++r) {
      for (Index c = 0; c < n; ++c) map(r, c) = rng.normal() / std::sqrt(static_cast<double>(n));
    }
    const double alpha = spec.informativeness[static_cast<size_t>(v)];
    Matrix features(total, dim);
    for (Index i = 0; i < total; ++i) {
      const Vector signal = map * latent.row(i).transpose();
      for (Index d = 0; d < dim; ++d) {
        features(i, d) = alpha * signal[d] + (1.0 - alpha) * rng.normal() +
                         spec.noise_level * rng.normal();
      }
    }
    ViewData view;
    view.name = "view" + std::to_string(v);
    view.kind = ViewKind::Features;
    view.metric = DistanceMetric::L2;
    view.data = std::move(features);
    data.views.push_back(std::move(view));
  }

  data.labels = labels;
  for (Index i = 0; i < spec.labeled; ++i) data.labeled.push_back(i);
  for (Index i = 0; i < spec.unlabeled; ++i) {
    const Index row = spec.labeled + i;
    data.unlabeled.push_back(row);
    data.labels.row(row).setZero();
  }
  for (Index i = 0; i < spec.test; ++i) data.test.push_back(spec.labeled + spec.unlabeled + i);

  data.validate();
  return data;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synthetic spec '" + path.string() + "'");

  SyntheticSpec spec;
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
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw DataError(ctx + ": expected key=value");
    const std::string key = trimmed.substr(0, eq);
    const std::string value = trimmed.substr(eq + 1);

    if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_long(value, ctx));
    else if (key == "labeled") spec.labeled = static_cast<int>(parse_long(value, ctx));
    else if (key == "unlabeled") spec.unlabeled = static_cast<int>(parse_long(value, ctx));
    else if (key == "test") spec.test = static_cast<int>(parse_long(value, ctx));
    else if (key == "labels") spec.labels = static_cast<int>(parse_long(value, ctx));
    else if (key == "views") spec.views = static_cast<int>(parse_long(value, ctx));
    else if (key == "informativeness") {
      spec.informativeness.clear();
      std::string token;
      std::istringstream stream(value);
      while (std::getline(stream, token, ',')) {
        spec.informativeness.push_back(parse_double(token, ctx));
      }
    } else if (key == "correlation") spec.label_correlation = parse_double(value, ctx);
    else if (key == "noise") spec.noise_level = parse_double(value, ctx);
    else throw DataError(ctx + ": unknown spec key '" + key + "'");
  }

  spec.validate();
  return spec;
}

}  // namespace mvmr
