#pragma once

#include <stdexcept>
#include <string>

namespace qd {

// Invalid or inconsistent configuration (bad key, bad value, mismatched
// dimensions, misaligned target region). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unrecoverable runtime failure of a pipeline run. CLI maps EmptyStage2 to
// exit code 3.
struct PipelineError : std::runtime_error {
    enum class Code { EmptyStage2, NoValidLevels };
    PipelineError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

}  // namespace qd
