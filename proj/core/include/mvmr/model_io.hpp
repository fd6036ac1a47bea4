#pragma once

#include <filesystem>

#include "mvmr/trainer.hpp"

namespace mvmr {

/// Plain-text model file with 17-significant-digit numbers; written
/// atomically (write-then-rename). Feature-view Gram blocks are rebuilt
/// deterministically on load from the stored features and ridge.
void save_model(const ModelState& model, const std::filesystem::path& path);
ModelState load_model(const std::filesystem::path& path);

}  // namespace mvmr
