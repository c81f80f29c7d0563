#include "evoforge/bool_core.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>

namespace evoforge {

namespace {

std::uint64_t var_bit(int var) {
  if (var < 1 || var > kMaxDimension) {
    throw DimensionError("variable index x" + std::to_string(var) + " outside [1.." +
                         std::to_string(kMaxDimension) + "]");
  }
  return std::uint64_t{1} << (var - 1);
}

std::uint64_t mask_from_vars(const std::vector<int>& vars) {
  std::uint64_t mask = 0;
  for (int v : vars) {
    const std::uint64_t bit = var_bit(v);
    if (mask & bit) throw std::invalid_argument("duplicate variable x" + std::to_string(v));
    mask |= bit;
  }
  return mask;
}

std::vector<int> vars_from_mask(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return out;
}

int max_index_of(std::uint64_t mask) noexcept { return 64 - std::countl_zero(mask); }

std::string join_vars(std::uint64_t mask, std::string_view sep) {
  std::string out;
  for (int v : vars_from_mask(mask)) {
    if (!out.empty()) out += sep;
    out += 'x';
    out += std::to_string(v);
  }
  return out;
}

// Lane j of a truth-table word is assignment (word_index << 6) | j.
constexpr std::array<std::uint64_t, 6> kLowPatterns = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

int parse_literal(std::string_view lit) {
  if (lit.size() < 2 || lit.front() != 'x') {
    throw ParseError("expected a variable like x3, got '" + std::string(lit) + "'");
  }
  int var = 0;
  const auto* first = lit.data() + 1;
  const auto* last = lit.data() + lit.size();
  auto [ptr, ec] = std::from_chars(first, last, var);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("bad variable index in '" + std::string(lit) + "'");
  }
  if (var < 1 || var > kMaxDimension) {
    throw DimensionError("variable index x" + std::to_string(var) + " outside [1.." +
                         std::to_string(kMaxDimension) + "]");
  }
  return var;
}

}  // namespace

std::string_view to_string(OutputConvention conv) {
  return conv == OutputConvention::kSigned ? "signed" : "binary";
}

OutputConvention parse_convention(std::string_view text) {
  if (text == "signed") return OutputConvention::kSigned;
  if (text == "binary") return OutputConvention::kBinary;
  throw ParseError("unknown output convention '" + std::string(text) + "'");
}

// ---- Assignment

Assignment::Assignment(int n, std::uint64_t bits) : bits_(bits), n_(n) {
  if (n < 1 || n > kMaxDimension) {
    throw DimensionError("dimension " + std::to_string(n) + " outside [1.." +
                         std::to_string(kMaxDimension) + "]");
  }
  if (n < 64 && (bits >> n) != 0) {
    throw DimensionError("assignment has bits set beyond dimension " + std::to_string(n));
  }
}

Assignment Assignment::from_string(std::string_view text) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw ParseError("assignment strings use only 0 and 1");
    }
  }
  return Assignment(static_cast<int>(text.size()), bits);
}

bool Assignment::operator[](int var) const {
  if (var < 1 || var > n_) throw DimensionError("variable x" + std::to_string(var) + " beyond dimension");
  return (bits_ >> (var - 1)) & 1U;
}

// ---- MonotoneConjunction

MonotoneConjunction::MonotoneConjunction(std::initializer_list<int> vars)
    : MonotoneConjunction(std::vector<int>(vars)) {}

MonotoneConjunction::MonotoneConjunction(const std::vector<int>& vars)
    : mask_(mask_from_vars(vars)) {}

int MonotoneConjunction::size() const noexcept { return std::popcount(mask_); }

bool MonotoneConjunction::contains(int var) const { return (mask_ & var_bit(var)) != 0; }

int MonotoneConjunction::max_index() const noexcept { return max_index_of(mask_); }

std::vector<int> MonotoneConjunction::vars() const { return vars_from_mask(mask_); }

MonotoneConjunction MonotoneConjunction::with(int var) const {
  return from_mask(mask_ | var_bit(var));
}

MonotoneConjunction MonotoneConjunction::without(int var) const {
  return from_mask(mask_ & ~var_bit(var));
}

std::uint64_t MonotoneConjunction::eval_sliced(SlicedWords words) const noexcept {
  std::uint64_t acc = ~std::uint64_t{0};
  for (std::uint64_t m = mask_; m; m &= m - 1) acc &= words[std::countr_zero(m)];
  return acc;
}

std::string MonotoneConjunction::to_string() const {
  return mask_ == 0 ? std::string("true") : join_vars(mask_, "&");
}

// ---- MonotoneDnf

MonotoneDnf::MonotoneDnf(std::vector<MonotoneConjunction> clauses) : clauses_(std::move(clauses)) {
  if (clauses_.empty()) throw std::invalid_argument("a DNF needs at least one clause");
}

MonotoneDnf::MonotoneDnf(std::initializer_list<MonotoneConjunction> clauses)
    : MonotoneDnf(std::vector<MonotoneConjunction>(clauses)) {}

int MonotoneDnf::max_index() const noexcept {
  int m = 0;
  for (const auto& c : clauses_) m = std::max(m, c.max_index());
  return m;
}

bool MonotoneDnf::eval(std::uint64_t bits) const noexcept {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [bits](const MonotoneConjunction& c) { return c.eval(bits); });
}

std::uint64_t MonotoneDnf::eval_sliced(SlicedWords words) const noexcept {
  std::uint64_t acc = 0;
  for (const auto& c : clauses_) acc |= c.eval_sliced(words);
  return acc;
}

std::string MonotoneDnf::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i) out += " | ";
    out += clauses_[i].to_string();
  }
  return out;
}

// ---- ParityFunction

ParityFunction::ParityFunction(std::initializer_list<int> vars)
    : ParityFunction(std::vector<int>(vars)) {}

ParityFunction::ParityFunction(const std::vector<int>& vars) : mask_(mask_from_vars(vars)) {
  if (mask_ == 0) throw std::invalid_argument("a parity needs at least one variable");
}

int ParityFunction::size() const noexcept { return std::popcount(mask_); }
int ParityFunction::max_index() const noexcept { return max_index_of(mask_); }
std::vector<int> ParityFunction::vars() const { return vars_from_mask(mask_); }

bool ParityFunction::eval(std::uint64_t bits) const noexcept {
  return (std::popcount(bits & mask_) & 1) == 0;
}

std::uint64_t ParityFunction::eval_sliced(SlicedWords words) const noexcept {
  std::uint64_t acc = 0;
  for (std::uint64_t m = mask_; m; m &= m - 1) acc ^= words[std::countr_zero(m)];
  return ~acc;
}

std::string ParityFunction::to_string() const { return "parity(" + join_vars(mask_, ",") + ")"; }

// ---- BooleanFunction

int BooleanFunction::max_index() const noexcept {
  return std::visit([](const auto& f) { return f.max_index(); }, fn_);
}

bool BooleanFunction::eval(std::uint64_t bits) const noexcept {
  return std::visit([bits](const auto& f) { return f.eval(bits); }, fn_);
}

std::uint64_t BooleanFunction::eval_sliced(SlicedWords words) const noexcept {
  return std::visit([words](const auto& f) { return f.eval_sliced(words); }, fn_);
}

std::string BooleanFunction::to_string() const {
  return std::visit([](const auto& f) { return f.to_string(); }, fn_);
}

// ---- evaluation

void check_dimension(const BooleanFunction& f, int n) {
  if (f.max_index() > n) {
    throw DimensionError("function " + f.to_string() + " mentions x" +
                         std::to_string(f.max_index()) + " but the dimension is " +
                         std::to_string(n));
  }
}

void check_convention(const BooleanFunction& f, OutputConvention conv) {
  if (f.is_parity() && conv != OutputConvention::kSigned) {
    throw std::invalid_argument("parity functions are only defined under the signed convention");
  }
}

int eval_conjunction(const MonotoneConjunction& c, const Assignment& x, OutputConvention conv) {
  check_dimension(c, x.dimension());
  return output_value(c.eval(x.bits()), conv);
}

int eval_dnf(const MonotoneDnf& d, const Assignment& x, OutputConvention conv) {
  check_dimension(d, x.dimension());
  return output_value(d.eval(x.bits()), conv);
}

int eval_parity(const ParityFunction& p, const Assignment& x) {
  check_dimension(p, x.dimension());
  return output_value(p.eval(x.bits()), OutputConvention::kSigned);
}

double ExactPerf::value() const noexcept {
  return std::ldexp(static_cast<double>(numerator), -log2_denominator);
}

bool operator==(const ExactPerf& a, const ExactPerf& b) noexcept {
  const int d = std::max(a.log2_denominator, b.log2_denominator);
  // Numerators are bounded by 2^24, so the shifted values fit comfortably.
  return (a.numerator << (d - a.log2_denominator)) == (b.numerator << (d - b.log2_denominator));
}

ExactPerf exact_perf(const BooleanFunction& r, const BooleanFunction& f, int n,
                     OutputConvention conv) {
  if (n > kMaxExactDimension) {
    throw BudgetError("exact enumeration is limited to n <= " + std::to_string(kMaxExactDimension) +
                      " (requested " + std::to_string(n) + "); use empirical_perf instead");
  }
  if (n < 1) throw DimensionError("dimension must be at least 1");
  check_dimension(r, n);
  check_dimension(f, n);
  check_convention(r, conv);
  check_convention(f, conv);

  std::array<std::uint64_t, kMaxExactDimension> words{};
  for (int v = 0; v < std::min(n, 6); ++v) words[v] = kLowPatterns[v];

  const std::uint64_t lane_mask = n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1 << n)) - 1;
  const std::uint64_t word_count = n >= 6 ? (std::uint64_t{1} << (n - 6)) : 1;

  std::int64_t count = 0;
  for (std::uint64_t w = 0; w < word_count; ++w) {
    for (int v = 6; v < n; ++v) words[v] = std::uint64_t{0} - ((w >> (v - 6)) & 1U);
    const std::uint64_t rv = r.eval_sliced(words);
    const std::uint64_t fv = f.eval_sliced(words);
    if (conv == OutputConvention::kSigned) {
      count += std::popcount((rv ^ fv) & lane_mask);
    } else {
      count += std::popcount(rv & fv & lane_mask);
    }
  }

  const std::int64_t total = std::int64_t{1} << n;
  ExactPerf out;
  out.log2_denominator = n;
  // SIGNED: agreements minus disagreements.
  out.numerator = conv == OutputConvention::kSigned ? total - 2 * count : count;
  return out;
}

double conj_perf_closed_form(const MonotoneConjunction& a, const MonotoneConjunction& b) noexcept {
  const int size_a = a.size();
  const int size_b = b.size();
  const int size_union = std::popcount(a.mask() | b.mask());
  return 1.0 - std::ldexp(1.0, 1 - size_a) - std::ldexp(1.0, 1 - size_b) +
         std::ldexp(1.0, 2 - size_union);
}

// ---- parsing

MonotoneConjunction parse_conjunction(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty clause; write 'true' for the constant-true clause");
  if (text == "true") return {};
  std::vector<int> vars;
  for (auto lit : split(text, '&')) vars.push_back(parse_literal(lit));
  try {
    return MonotoneConjunction(vars);
  } catch (const DimensionError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(e.what()) + " in clause '" + std::string(text) + "'");
  }
}

MonotoneDnf parse_dnf(std::string_view text) {
  std::vector<MonotoneConjunction> clauses;
  for (auto part : split(trim(text), '|')) clauses.push_back(parse_conjunction(part));
  return MonotoneDnf(std::move(clauses));
}

BooleanFunction parse_function(std::string_view text) {
  text = trim(text);
  constexpr std::string_view kParity = "parity(";
  if (text.starts_with(kParity)) {
    if (!text.ends_with(')')) throw ParseError("unterminated parity(...)");
    auto inner = text.substr(kParity.size(), text.size() - kParity.size() - 1);
    std::vector<int> vars;
    for (auto lit : split(inner, ',')) vars.push_back(parse_literal(lit));
    try {
      return ParityFunction(vars);
    } catch (const DimensionError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  MonotoneDnf dnf = parse_dnf(text);
  if (dnf.k() == 1) return dnf[0];
  return dnf;
}

}  // namespace evoforge
