#pragma once

#include <stdexcept>
#include <string>

namespace spp {

/// Base class for all domain failures raised by the library. Precondition
/// violations on arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query point lies outside a non-periodic grid dimension.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// The start state never enters the backward reachable set over the solved span.
class InfeasibleError : public Error {
 public:
  InfeasibleError(int vehicle_id, const std::string& cause)
      : Error("vehicle " + std::to_string(vehicle_id) + " infeasible: " + cause),
        vehicle_id_(vehicle_id) {}
  int vehicle_id() const { return vehicle_id_; }

 private:
  int vehicle_id_;
};

/// The infinite-horizon tracking kernel came out empty.
class EmptyKernelError : public Error {
 public:
  using Error::Error;
};

/// Eroding a target by the tracking kernel left nothing.
class EmptyTargetError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time integration.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid scenario input. `path` names the offending field.
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace spp
