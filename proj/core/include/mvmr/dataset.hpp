#pragma once

#include <filesystem>

#include "mvmr/trainer.hpp"

namespace mvmr {

/// Loads a dataset manifest and every file it references, validating shapes,
/// label values and split indices. Manifest format (key-value lines):
///
///   version 1
///   samples <N>
///   labels <n>
///   views <V>
///   view <name> <features|gram> <l1|l2|chi2|linear|none> <relative path>
///   labels_file <relative path>
///   split_file <relative path>
///
/// The split file holds three lines "labeled ...", "unlabeled ..." and
/// "test ..." with 0-based row indices.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes the dataset (manifest + matrix files) into a directory; the
/// manifest lands at <dir>/manifest.txt.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);

/// Parses a key=value config file into a TrainConfig and validates ranges.
TrainConfig load_train_config(const std::filesystem::path& path);

}  // namespace mvmr
