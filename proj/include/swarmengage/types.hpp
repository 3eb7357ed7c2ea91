#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmengage {

/// Linear bin index, row-major over the grid dimensions (last axis fastest).
using Bin = std::size_t;

/// Sorted, duplicate-free list of bins.
using BinSet = std::vector<Bin>;

/// Sorts and deduplicates `bins` in place and returns it.
BinSet normalize(BinSet bins);

/// Membership mask of length m for `bins`.
std::vector<char> mask_of(const BinSet& bins, std::size_t m);

bool contains(const BinSet& bins, Bin b);

class SwarmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario or argument.
class ConfigError : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

/// The scenario is well formed but a planning or synthesis step cannot be
/// carried out on it.
class InfeasibleError : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

class DisconnectedRecurrentStates : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class HorizonExceeded : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class PreconditionViolated : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class DimensionMismatch : public SwarmError {
 public:
  using SwarmError::SwarmError;
};

}  // namespace swarmengage
