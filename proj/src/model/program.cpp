#include "srnsens/model/program.hpp"

#include <array>
#include <cmath>

#include "srnsens/error.hpp"

namespace srn {

namespace {

constexpr std::size_t kStackSize = 64;

// Pseudo-op used only inside compiled code: multiply top of stack by the
// falling-factorial ratio of one reactant.
constexpr auto kFalling = static_cast<Op>(100);

double finite_or_throw(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite intermediate value");
  return v;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& expr) : zero_(expr.is_zero()) {
  emit(expr);
  // Depth simulation.
  std::size_t depth = 0;
  for (const auto& ins : code_) {
    if (ins.op == Op::Constant || ins.op == Op::Param || ins.op == Op::Species)
      ++depth;
    else if (ins.op != Op::Neg && ins.op != kFalling)
      --depth;
    max_depth_ = std::max(max_depth_, depth);
  }
  if (max_depth_ > kStackSize) throw ValidationError("expression nesting too deep to compile");
}

void CompiledExpr::emit(const Expr& e) {
  switch (e.op()) {
    case Op::Constant:
      code_.push_back({Op::Constant, 0, 0, e.value()});
      return;
    case Op::Param:
    case Op::Species:
      code_.push_back({e.op(), static_cast<std::uint32_t>(e.index()), 0, 0.0});
      return;
    case Op::Neg:
      emit(e.lhs());
      code_.push_back({Op::Neg});
      return;
    case Op::MassAction:
      emit(e.rate());
      for (const auto& c : e.reactants())
        code_.push_back({kFalling, static_cast<std::uint32_t>(c.species), c.count, 0.0});
      return;
    case Op::PowLog:
      emit(e.lhs());
      emit(e.rhs());
      code_.push_back({Op::PowLog, 0, static_cast<int>(e.index()), 0.0});
      return;
    default:
      emit(e.lhs());
      emit(e.rhs());
      code_.push_back({e.op()});
      return;
  }
}

double CompiledExpr::operator()(std::span<const Count> x, std::span<const double> params) const {
  std::array<double, kStackSize> stack;
  std::size_t top = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::Constant:
        stack[top++] = ins.value;
        break;
      case Op::Param:
        stack[top++] = params[ins.index];
        break;
      case Op::Species:
        stack[top++] = static_cast<double>(x[ins.index]);
        break;
      case Op::Neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::Add:
        --top;
        stack[top - 1] = finite_or_throw(stack[top - 1] + stack[top]);
        break;
      case Op::Sub:
        --top;
        stack[top - 1] = finite_or_throw(stack[top - 1] - stack[top]);
        break;
      case Op::Mul:
        --top;
        stack[top - 1] = finite_or_throw(stack[top - 1] * stack[top]);
        break;
      case Op::Div:
        --top;
        if (stack[top] == 0.0) throw DomainError("division by zero");
        stack[top - 1] = finite_or_throw(stack[top - 1] / stack[top]);
        break;
      case Op::Pow:
        --top;
        stack[top - 1] = finite_or_throw(std::pow(stack[top - 1], stack[top]));
        break;
      case Op::PowLog:
        --top;
        stack[top - 1] = pow_log_value(stack[top - 1], stack[top], ins.count);
        break;
      default:  // kFalling
        stack[top - 1] = finite_or_throw(stack[top - 1] * falling_factorial_ratio(x[ins.index], ins.count));
        break;
    }
  }
  return top == 0 ? 0.0 : stack[0];
}

}  // namespace srn
