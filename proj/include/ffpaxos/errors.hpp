#pragma once

#include <stdexcept>
#include <string>

namespace ffpaxos {

/// Invalid or unusable configuration: malformed files, unknown keys,
/// quorum systems rejected before a run. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ffpaxos
