#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace papar {

enum class ErrorCode {
  // spec-model
  SyntaxError,
  UnknownField,
  TypeMismatch,
  ModeConflict,
  InvalidSpec,
  // dataflow-engine
  HeterogeneousRows,
  MissingField,
  CyclicHierarchy,
  DuplicateNodeId,
  UnknownParent,
  ExprSyntax,
  // encode-render
  EmptyDomain,
  NonNumericDomain,
  ChannelScaleMismatch,
  MissingScale,
  MissingDataset,
  // augment
  ModeShapeConflict,
  AppendSchemaMismatch,
  NoArBlock,
  // validator
  PipelineShapeMismatch,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every module; `code` is the stable identifier,
// `path` locates the offending spec element when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string path = {})
      : std::runtime_error(std::move(message)), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

  // Set by run_pipeline when a transform fails.
  std::optional<std::size_t> stage;
  std::optional<std::string> dataset;
  // Set for SyntaxError (1-based).
  std::size_t line = 0;
  std::size_t column = 0;

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace papar
