#include "hypereig/combinatorics.hpp"

#include <limits>
#include <string>

#include "hypereig/error.hpp"

namespace hypereig {

namespace {

[[noreturn]] void overflow(const char* what) {
  throw CapacityError(std::string("64-bit overflow in ") + what);
}

}  // namespace

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) overflow("addition");
  return out;
}

std::uint64_t checked_sub(std::uint64_t a, std::uint64_t b) {
  if (b > a) throw ParameterError("negative result in unsigned subtraction");
  return a - b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) overflow("multiplication");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exponent; ++i) out = checked_mul(out, base);
  return out;
}

std::uint64_t factorial(unsigned m) {
  std::uint64_t out = 1;
  for (unsigned i = 2; i <= m; ++i) out = checked_mul(out, i);
  return out;
}

std::uint64_t falling_factorial(std::uint64_t m, unsigned r) {
  if (r > m) return 0;
  std::uint64_t out = 1;
  for (unsigned i = 0; i < r; ++i) out = checked_mul(out, m - i);
  return out;
}

std::uint64_t binomial(std::uint64_t m, std::uint64_t r) {
  if (r > m) return 0;
  if (r > m - r) r = m - r;
  // out * (m - i) is always divisible by (i + 1); reduce by gcd to delay overflow.
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    unsigned __int128 wide = static_cast<unsigned __int128>(out) * (m - i);
    wide /= (i + 1);
    if (wide > std::numeric_limits<std::uint64_t>::max()) overflow("binomial");
    out = static_cast<std::uint64_t>(wide);
  }
  return out;
}

std::uint64_t multinomial(std::span<const int> multiplicities) {
  std::uint64_t out = 1;
  std::uint64_t total = 0;
  // (m1 + ... + mr)! / prod mi! = prod_i C(m1 + ... + mi, mi)
  for (int m : multiplicities) {
    total += static_cast<std::uint64_t>(m);
    out = checked_mul(out, binomial(total, static_cast<std::uint64_t>(m)));
  }
  return out;
}

std::uint64_t dense_entry_count(int dim, int order) {
  if (dim < 1 || order < 0) throw ParameterError("invalid dimension or order");
  std::uint64_t count = 1;
  for (int i = 0; i < order; ++i) {
    count = checked_mul(count, static_cast<std::uint64_t>(dim));
    if (count > kDenseCapacity) {
      throw CapacityError("dense enumeration of n^k = " + std::to_string(dim) + "^" +
                          std::to_string(order) + " entries exceeds the 1e8 limit");
    }
  }
  return count;
}

BinomialTable::BinomialTable(int rows, int cols) : cols_(cols) {
  table_.assign(static_cast<std::size_t>(rows) * cols, 0);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols && b <= a; ++b) {
      std::uint64_t value = 1;
      if (b > 0 && b < a) {
        value = checked_add(table_[static_cast<std::size_t>(a - 1) * cols + b - 1],
                            table_[static_cast<std::size_t>(a - 1) * cols + b]);
      }
      table_[static_cast<std::size_t>(a) * cols + b] = value;
    }
  }
}

std::uint64_t colex_rank(std::span<const int> combination, const BinomialTable& binom) {
  std::uint64_t rank = 0;
  for (std::size_t j = 0; j < combination.size(); ++j) {
    rank += binom(combination[j], static_cast<int>(j) + 1);
  }
  return rank;
}

bool next_colex_combination(std::span<int> c, int n) {
  const std::size_t k = c.size();
  for (std::size_t j = 0; j < k; ++j) {
    const int limit = (j + 1 < k) ? c[j + 1] : n;
    if (c[j] + 1 < limit) {
      ++c[j];
      for (std::size_t i = 0; i < j; ++i) c[i] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

bool next_colex_multiset(std::span<int> s, int n) {
  const std::size_t k = s.size();
  for (std::size_t j = 0; j < k; ++j) {
    const int limit = (j + 1 < k) ? s[j + 1] + 1 : n;
    if (s[j] + 1 < limit) {
      ++s[j];
      for (std::size_t i = 0; i < j; ++i) s[i] = 0;
      return true;
    }
  }
  return false;
}

void run_lengths(std::span<const int> sorted, std::vector<int>& values, std::vector<int>& counts) {
  values.clear();
  counts.clear();
  for (int x : sorted) {
    if (!values.empty() && values.back() == x) {
      ++counts.back();
    } else {
      values.push_back(x);
      counts.push_back(1);
    }
  }
}

bool is_permutation_of_range(std::span<const int> sigma) {
  std::vector<bool> seen(sigma.size(), false);
  for (int s : sigma) {
    if (s < 0 || static_cast<std::size_t>(s) >= sigma.size() || seen[s]) return false;
    seen[s] = true;
  }
  return true;
}

}  // namespace hypereig
