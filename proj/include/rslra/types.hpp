#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rslra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when an iterative solver produces a non-finite cost or gradient.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a retraction cannot produce a valid manifold point.
class RetractionError : public std::runtime_error {
public:
  explicit RetractionError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed or unusable input data (files, series, masks).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rslra
