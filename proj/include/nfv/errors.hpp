#pragma once

#include <stdexcept>
#include <string>

namespace nfv {

// Malformed input file (scenario, deployment, GraphML).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally well-formed input that violates a type invariant.
// `path` is the offending field, e.g. "params.theta".
struct ValidationError : std::runtime_error {
  std::string path;
  ValidationError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), path(std::move(field)) {}
};

// A mapping references an unknown node, type, or instance.
struct ReferenceError : std::runtime_error {
  explicit ReferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// M/M/1 queue with arrival rate >= service rate has no finite mean delay.
struct InstabilityError : std::runtime_error {
  double mu, lambda;
  InstabilityError(double mu_, double lambda_)
      : std::runtime_error("unstable queue: lambda " + std::to_string(lambda_) +
                           " >= mu " + std::to_string(mu_)),
        mu(mu_), lambda(lambda_) {}
};

// Planned instances cannot all be placed on the substrate.
struct SubstrateExhausted : std::runtime_error {
  explicit SubstrateExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

// Instance size exceeds the enumeration solver's hard caps.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Convex/LP solve did not converge; never silently wrong.
struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nfv
