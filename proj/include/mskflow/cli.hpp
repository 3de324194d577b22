#pragma once

#include <string>
#include <vector>

namespace msk {

/// Entry point behind the `mskflow` binary. Exit codes: 0 clean finish,
/// 1 configuration error, 2 numerical failure (failure snapshot written).
int run_cli(const std::vector<std::string>& args);

}  // namespace msk
