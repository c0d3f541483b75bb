#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qf2/involutions.hpp"

namespace qf2 {

/// Malformed input. position is a byte offset into the parsed text.
class DslError : public FormError {
 public:
  DslError(std::string message, std::size_t position);
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }
  /// Message, the input line and a caret under the offending byte.
  std::string render(std::string_view input) const;

 private:
  std::string message_;
  std::size_t position_;
};

Field parse_field(std::string_view text);
/// Hex bit-vector for GF(2^m), polynomial fraction for F2(...).
Elem parse_elem(Field f, std::string_view text);
/// "H + [1,1] + <0,1>". Pairs keep their order, as do diagonal entries;
/// coordinates list all pairs before the diagonal.
QuadraticForm parse_form(Field f, std::string_view text);
Vector parse_vector(Field f, std::string_view text);
/// [[a,b],[c,d]]; "[]" is the empty matrix.
Matrix parse_matrix(Field f, std::string_view text);

std::string format_form(const QuadraticForm& f);
std::string format_matrix(const Matrix& m);

namespace inv {
struct Tau {
  Vector u;
  Elem a;
};
struct Null {
  NullBlock block;
};
/// Swaps g and h, fixes the standard vectors completing them to a basis.
struct RadSwap {
  Vector g, h;
};
struct Block {
  Matrix tau, Y, rho;
};
struct Raw {
  Matrix m;
};
using Factor = std::variant<Tau, Null, RadSwap, Block, Raw>;
}  // namespace inv

/// Product of factors; the rightmost acts first. An empty product is "id".
struct InvolutionExpr {
  std::vector<inv::Factor> factors;
};

InvolutionExpr parse_involution(Field f, std::string_view text);
std::string format_involution(const InvolutionExpr& e);
/// Matrix on the full space of f. Vectors in radswap may be given in radical
/// coordinates (length s) or full coordinates vanishing on V_B.
Matrix evaluate(const QuadraticForm& f, const InvolutionExpr& e);

bool operator==(const InvolutionExpr& a, const InvolutionExpr& b);

}  // namespace qf2
