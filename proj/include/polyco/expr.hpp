#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyco/smooth_field.hpp"

namespace polyco {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Grammar: + - * / ^ (or **), unary minus, parentheses, numbers, the
// variables listed, constants pi and e, and sin cos tan exp log sqrt.
ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& vars);

// Scalar field of the listed variables.
SmoothField compile_expression(const std::string& text, const std::vector<std::string>& vars);

// Sparse polynomial: coefficient and exponent vector per term.
struct Polynomial {
  std::vector<std::pair<double, std::vector<int>>> terms;
};

// Least-squares fit with all monomials of total degree <= degree on `points`;
// returns the fit and its max deviation on `check` points.
std::pair<Polynomial, double> fit_polynomial(const SmoothField& f, int output, int degree,
                                             const std::vector<Coords>& points, const std::vector<Coords>& check);

// Parseable text; coefficients snapped to 1e-9 when within 1e-11.
std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars);

}  // namespace polyco
