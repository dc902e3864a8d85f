#pragma once

#include <stdexcept>
#include <string>

namespace dlse {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- topology ----------------------------------------------------------------

struct NotSymmetric : Error {
  int i, j;
  NotSymmetric(int i_, int j_)
      : Error("adjacency matrix not symmetric at (" + std::to_string(i_) +
              "," + std::to_string(j_) + ")"),
        i(i_), j(j_) {}
};

struct NotStochastic : Error {
  int row;
  double sum;
  NotStochastic(int row_, double sum_)
      : Error("row " + std::to_string(row_) + " sums to " +
              std::to_string(sum_) + ", expected 1"),
        row(row_), sum(sum_) {}
};

struct NegativeEntry : Error {
  int i, j;
  NegativeEntry(int i_, int j_)
      : Error("negative adjacency entry at (" + std::to_string(i_) + "," +
              std::to_string(j_) + ")"),
        i(i_), j(j_) {}
};

struct Disconnected : Error {
  int node;
  explicit Disconnected(int node_)
      : Error("node " + std::to_string(node_) +
              " unreachable in the support graph"),
        node(node_) {}
};

// Bipartite-style support with no self-loops: A^{D_G} has zero entries, so
// a_min would be 0 and the diffusion analysis does not apply.
struct PeriodicSupport : Error {
  int i, j;
  PeriodicSupport(int i_, int j_)
      : Error("entry (" + std::to_string(i_) + "," + std::to_string(j_) +
              ") of A^diameter is zero (periodic support graph)"),
        i(i_), j(j_) {}
};

struct IndexOutOfRange : Error {
  int index;
  explicit IndexOutOfRange(int index_)
      : Error("node index " + std::to_string(index_) + " out of range"),
        index(index_) {}
};

// -- numerics ----------------------------------------------------------------

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NonFiniteInput : Error {
  using Error::Error;
};

struct WeightSumInvalid : Error {
  double sum;
  explicit WeightSumInvalid(double sum_)
      : Error("combine weights sum to " + std::to_string(sum_) +
              ", expected 1"),
        sum(sum_) {}
};

struct SingularCombinedInformation : Error {
  using Error::Error;
};

struct SingularNormalEquations : Error {
  using Error::Error;
};

struct NotSymmetricMatrix : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct SingularInput : Error {
  using Error::Error;
};

// -- analysis ----------------------------------------------------------------

struct EmptyRecords : Error {
  using Error::Error;
};

struct IncompleteHistory : Error {
  using Error::Error;
};

struct MissingVarianceBound : Error {
  using Error::Error;
};

// -- harness -----------------------------------------------------------------

struct ConfigInvalid : Error {
  using Error::Error;
};

struct ParseError : ConfigInvalid {
  using ConfigInvalid::ConfigInvalid;
};

struct CrossFieldMismatch : ConfigInvalid {
  using ConfigInvalid::ConfigInvalid;
};

struct IoFailure : Error {
  using Error::Error;
};

struct MissingMetrics : Error {
  using Error::Error;
};

}  // namespace dlse
