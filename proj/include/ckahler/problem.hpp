#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckahler/expression.hpp"
#include "ckahler/matrix.hpp"
#include "ckahler/scalar.hpp"
#include "ckahler/tensor.hpp"

namespace ckahler {

/// A validated metric problem. Square arrays are stored row-major with
/// n*n entries and are already symmetric (metric) or antisymmetric
/// (omega, bivector).
struct ProblemSpec {
  int dimension = 0;
  Identifiers ids;
  std::vector<Expression> metric;
  std::vector<Rational> point;
  int jet_order = 4;
  std::optional<std::vector<Expression>> omega;
  std::optional<std::vector<Rational>> bivector;
  std::optional<Expression> conformal_factor;
  ScalarBackend backend;
  /// Values substituted for the parameters by the float backend.
  std::vector<double> parameter_values;

  const Expression& g(int a, int b) const { return metric[static_cast<std::size_t>(a * dimension + b)]; }
};

/// Parses and validates a problem file. Errors: SchemaError, OddDimension,
/// DimensionTooSmall, SyntaxError, UndeclaredIdentifier, AsymmetricInput,
/// DegenerateMetricAtPoint, NonPositiveConformalFactor, DivisionByNonUnit.
ProblemSpec load_problem(std::string_view bytes);
ProblemSpec load_problem_file(const std::string& path);

/// The values bound to parameters: ParamPoly variables in exact mode,
/// `parameter_values` in float mode.
template <class S>
std::vector<S> parameter_bindings(const ProblemSpec& p);

JetSpacePtr make_space(const ProblemSpec& p, int order);

template <class S>
MetricJet<S> build_metric(const ProblemSpec& p, const JetSpacePtr& space, int order);
/// Throws SchemaError if the problem carries no omega.
template <class S>
Tensor<S> build_omega(const ProblemSpec& p, const JetSpacePtr& space, int order);
template <class S>
Jet<S> build_conformal_factor(const ProblemSpec& p, const JetSpacePtr& space, int order);
template <class S>
Matrix<S> build_bivector(const ProblemSpec& p);

}  // namespace ckahler
