#pragma once

#include <stdexcept>

namespace rebac_miner {

/// Malformed input: bad arguments, ill-typed paths, schema violations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document failed to parse or to cross-validate against its models.
class SchemaError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// The mined policy does not grant exactly the input authorizations.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rebac_miner
