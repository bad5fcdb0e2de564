#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "srnsens/model/expr.hpp"

namespace srn {

/// Postfix compilation of an Expr for repeated evaluation on simulation paths.
///
/// Evaluates to exactly the same value as Expr::evaluate (same operations in
/// the same order) without pointer chasing.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& expr);

  double operator()(std::span<const Count> x, std::span<const double> params) const;

  /// True when the source expression was the literal constant 0.
  bool is_zero() const noexcept { return zero_; }

 private:
  struct Instr {
    Op op;
    std::uint32_t index = 0;
    int count = 0;
    double value = 0.0;
  };

  void emit(const Expr& e);

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  bool zero_ = true;
};

}  // namespace srn
