#pragma once

#include <stdexcept>
#include <string>

namespace ssa {

/// Input outside an operation's mathematical domain (bad item index, violated
/// precondition, malformed instance).
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but exceeds what an exhaustive routine can handle
/// (m too large, unsupported query for a family, sparse support exceeded).
class CapabilityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A randomized construction ran out of retries.
class ConstructionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssa
