#pragma once

#include <string>
#include <vector>

namespace mvmr {

/// Entry point behind the command line tool. Subcommands:
///   train    --manifest --config --out-model --out-trace
///   predict  --model --manifest --split --out-scores
///   evaluate --scores --manifest --split --out-report
///   compare  --manifest --config --labeled-count --repeats --seed --out-table
///   synth    --spec --out-dir
/// Returns the process exit status; errors are reported on stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace mvmr
