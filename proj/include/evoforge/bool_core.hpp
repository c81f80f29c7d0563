#pragma once

// Points of the Boolean cube, monotone conjunctions / DNFs / parities, exact
// evaluation, and exact correlation by full enumeration.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evoforge {

inline constexpr int kMaxDimension = 64;
// 2^24 assignments per exact expectation.
inline constexpr int kMaxExactDimension = 24;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputConvention { kSigned, kBinary };

std::string_view to_string(OutputConvention conv);
OutputConvention parse_convention(std::string_view text);

// Maps a Boolean value onto the convention's output alphabet.
constexpr int output_value(bool value, OutputConvention conv) noexcept {
  if (conv == OutputConvention::kSigned) return value ? 1 : -1;
  return value ? 1 : 0;
}

// A point of {0,1}^n. Bit i holds the value of variable x_{i+1}.
class Assignment {
 public:
  Assignment(int n, std::uint64_t bits);

  // "10011000" -> x1=1, x2=0, ...; the string length is the dimension.
  static Assignment from_string(std::string_view text);

  int dimension() const noexcept { return n_; }
  std::uint64_t bits() const noexcept { return bits_; }
  // 1-based variable access.
  bool operator[](int var) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::uint64_t bits_;
  int n_;
};

// Bit-sliced evaluation input: words[v-1] holds the values of variable x_v in
// 64 independent assignments, one per bit lane.
using SlicedWords = std::span<const std::uint64_t>;

// Set of variable indices in [1..64]; the empty set is constant true.
class MonotoneConjunction {
 public:
  MonotoneConjunction() = default;
  MonotoneConjunction(std::initializer_list<int> vars);
  explicit MonotoneConjunction(const std::vector<int>& vars);

  static MonotoneConjunction from_mask(std::uint64_t mask) noexcept {
    MonotoneConjunction c;
    c.mask_ = mask;
    return c;
  }

  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(int var) const;
  // Largest variable index, 0 if empty.
  int max_index() const noexcept;
  std::vector<int> vars() const;

  MonotoneConjunction with(int var) const;
  MonotoneConjunction without(int var) const;

  bool eval(std::uint64_t bits) const noexcept { return (bits & mask_) == mask_; }
  std::uint64_t eval_sliced(SlicedWords words) const noexcept;

  // "x1&x4&x5", variables ascending; "true" for the empty clause.
  std::string to_string() const;

  friend auto operator<=>(const MonotoneConjunction&, const MonotoneConjunction&) = default;

 private:
  std::uint64_t mask_ = 0;
};

// Ordered disjunction of k >= 1 clauses. Duplicate clauses are legal.
class MonotoneDnf {
 public:
  explicit MonotoneDnf(std::vector<MonotoneConjunction> clauses);
  MonotoneDnf(std::initializer_list<MonotoneConjunction> clauses);

  std::size_t k() const noexcept { return clauses_.size(); }
  const std::vector<MonotoneConjunction>& clauses() const noexcept { return clauses_; }
  const MonotoneConjunction& operator[](std::size_t i) const { return clauses_.at(i); }
  int max_index() const noexcept;

  bool eval(std::uint64_t bits) const noexcept;
  std::uint64_t eval_sliced(SlicedWords words) const noexcept;

  // Clauses joined by " | " in stored order.
  std::string to_string() const;

  friend bool operator==(const MonotoneDnf&, const MonotoneDnf&) = default;

 private:
  std::vector<MonotoneConjunction> clauses_;
};

// (-1)^(sum of x over vars). The Boolean value is "even count", so that the
// SIGNED output coincides with the usual +-1 parity character.
class ParityFunction {
 public:
  ParityFunction(std::initializer_list<int> vars);
  explicit ParityFunction(const std::vector<int>& vars);

  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  int max_index() const noexcept;
  std::vector<int> vars() const;

  bool eval(std::uint64_t bits) const noexcept;
  std::uint64_t eval_sliced(SlicedWords words) const noexcept;

  std::string to_string() const;

  friend bool operator==(const ParityFunction&, const ParityFunction&) = default;

 private:
  std::uint64_t mask_ = 0;
};

// Any of the supported function families, as a value.
class BooleanFunction {
 public:
  using Variant = std::variant<MonotoneConjunction, MonotoneDnf, ParityFunction>;

  BooleanFunction(MonotoneConjunction c) : fn_(std::move(c)) {}
  BooleanFunction(MonotoneDnf d) : fn_(std::move(d)) {}
  BooleanFunction(ParityFunction p) : fn_(std::move(p)) {}

  const Variant& variant() const noexcept { return fn_; }
  bool is_parity() const noexcept { return std::holds_alternative<ParityFunction>(fn_); }
  int max_index() const noexcept;

  bool eval(std::uint64_t bits) const noexcept;
  std::uint64_t eval_sliced(SlicedWords words) const noexcept;
  std::string to_string() const;

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  Variant fn_;
};

int eval_conjunction(const MonotoneConjunction& c, const Assignment& x, OutputConvention conv);
int eval_dnf(const MonotoneDnf& d, const Assignment& x, OutputConvention conv);
int eval_parity(const ParityFunction& p, const Assignment& x);

// Throws DimensionError if f mentions a variable beyond n.
void check_dimension(const BooleanFunction& f, int n);
// Throws std::invalid_argument for a parity evaluated under BINARY.
void check_convention(const BooleanFunction& f, OutputConvention conv);

// Exact expectation stored as numerator / 2^log2_denominator.
struct ExactPerf {
  std::int64_t numerator = 0;
  int log2_denominator = 0;

  double value() const noexcept;
  friend bool operator==(const ExactPerf& a, const ExactPerf& b) noexcept;
};

// (1/2^n) * sum over all x of r(x)*f(x), by enumeration of the whole cube.
ExactPerf exact_perf(const BooleanFunction& r, const BooleanFunction& f, int n,
                     OutputConvention conv = OutputConvention::kSigned);

// E[r*f] under SIGNED for two conjunctions, without enumeration:
//   1 - 2^(1-|A|) - 2^(1-|B|) + 2^(2-|A u B|)
double conj_perf_closed_form(const MonotoneConjunction& a, const MonotoneConjunction& b) noexcept;

// Syntax: "x1&x4&x5", "x1&x2 | x3", "parity(x1,x2,x3)", "true".
MonotoneConjunction parse_conjunction(std::string_view text);
MonotoneDnf parse_dnf(std::string_view text);
BooleanFunction parse_function(std::string_view text);

}  // namespace evoforge
