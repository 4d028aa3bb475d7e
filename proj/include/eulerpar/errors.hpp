#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace eulerpar {

//! Root of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! A caller broke a documented precondition (bad grid, gamma <= 1, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// --- numerics --------------------------------------------------------------

//! Density or pressure left the admissible set; the scheme broke down.
class NonPhysicalState : public Error {
  public:
    using Error::Error;
};

//! The two Riemann states would open a vacuum between them.
class VacuumGenerated : public Error {
  public:
    using Error::Error;
};

class NoConvergence : public Error {
  public:
    using Error::Error;
};

class CflViolation : public Error {
  public:
    using Error::Error;
};

// --- runtime ---------------------------------------------------------------

class IncompatibleDistribution : public Error {
  public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
  public:
    using Error::Error;
};

class NotOwner : public Error {
  public:
    using Error::Error;
};

class SpansOwners : public Error {
  public:
    using Error::Error;
};

class OrphanMessage : public Error {
  public:
    using Error::Error;
};

class MessageSizeMismatch : public Error {
  public:
    using Error::Error;
};

//! Raised inside a worker whose group was cancelled by another worker's
//! failure. Never surfaces from spawn_spmd itself.
class GroupCancelled : public Error {
  public:
    GroupCancelled() : Error("worker group cancelled") {}
};

//! A worker kernel threw. Carries the worker id and the original exception.
class WorkerPanic : public Error {
  public:
    WorkerPanic(std::size_t worker, std::exception_ptr original, const std::string& what)
        : Error("worker " + std::to_string(worker) + " failed: " + what),
          worker_(worker),
          original_(std::move(original)) {}

    std::size_t worker() const noexcept { return worker_; }
    const std::exception_ptr& original() const noexcept { return original_; }

  private:
    std::size_t worker_;
    std::exception_ptr original_;
};

// --- drivers ---------------------------------------------------------------

class TooManyWorkers : public Error {
  public:
    using Error::Error;
};

class NonSquareScaling : public Error {
  public:
    using Error::Error;
};

class MixedPlans : public Error {
  public:
    using Error::Error;
};

class IoFailure : public Error {
  public:
    using Error::Error;
};

}  // namespace eulerpar
