#pragma once

#include <optional>
#include <string>

#include "augtree/classify.hpp"

namespace augtree {

using UBlocks = std::vector<std::vector<BigInt>>;

// Witness for one row of A: column sums of C reproduce the row, and the
// u-weighted row combinations c_s reproduce the rows of B with the
// multiplicities prescribed by u.  slot_class records which vertex class
// each slot targets (used by the near-isometry construction; the validator
// ignores it).
struct RearrangingMatrix {
  int row = 0;  // 0-based row of A
  Mat C;        // p x m
  std::vector<int> slot_class;
};

// A·u^t = u^t·B, exactly
bool necessary_check(const Mat& A, const Mat& B, const UBlocks& u);

// Independent validator for a certificate; reason receives a short
// explanation on rejection.
bool validate_certificate(const Mat& A, const Mat& B, const UBlocks& u, int row, const Mat& C,
                          std::string* reason = nullptr);

std::optional<RearrangingMatrix> solve_row(const Mat& A, const Mat& B, const UBlocks& u, int row);

struct RearrangeVerdict {
  enum class Answer { Yes, No };
  Answer answer = Answer::No;
  int power = 0;  // certificates refer to A^power, B^power
  std::vector<RearrangingMatrix> certificates;
  int failed_row = -1;
  int k_max = 0;

  bool yes() const { return answer == Answer::Yes; }
};

// Tries k = 1 first, then escalates to (A^k, B^k, u) up to k_max.
RearrangeVerdict is_rearrangeable(const Mat& A, const Mat& B, const UBlocks& u, int k_max = 6);

// Least k with max_i #T_i <= min row sum of B^k.
int wlog_power(const ClassTable& table, int k_max = 32);

void check_abu_dimensions(const Mat& A, const Mat& B, const UBlocks& u);

}  // namespace augtree
