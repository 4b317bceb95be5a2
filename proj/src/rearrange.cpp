#include "augtree/rearrange.hpp"

#include <algorithm>
#include <map>

#include "augtree/errors.hpp"

namespace augtree {

void check_abu_dimensions(const Mat& A, const Mat& B, const UBlocks& u) {
  if (A.empty() || B.empty()) throw UsageError("A and B must be non-empty");
  if (!mat_is_square(A) || !mat_is_square(B)) throw UsageError("A and B must be square");
  if (u.size() != A.size()) throw UsageError("u needs one block per row of A");
  for (const auto& blk : u)
    if (blk.size() != B.size()) throw UsageError("each u block needs one entry per class of B");
  for (const auto& row : A)
    for (const auto& e : row)
      if (e < 0) throw UsageError("A must be nonnegative");
  for (const auto& row : B)
    for (const auto& e : row)
      if (e < 0) throw UsageError("B must be nonnegative");
  for (const auto& blk : u)
    for (const auto& e : blk)
      if (e < 0) throw UsageError("u must be nonnegative");
}

bool necessary_check(const Mat& A, const Mat& B, const UBlocks& u) {
  check_abu_dimensions(A, B, u);
  // A·u^t and u^t·B are both m x n
  const std::size_t m = A.size(), n = B.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      BigInt lhs = 0, rhs = 0;
      for (std::size_t j = 0; j < m; ++j) lhs += A[i][j] * u[j][k];
      for (std::size_t j = 0; j < n; ++j) rhs += u[i][j] * B[j][k];
      if (lhs != rhs) return false;
    }
  return true;
}

namespace {

std::vector<BigInt> weighted_rows(const Mat& C, const UBlocks& u, std::size_t s, std::size_t n) {
  std::vector<BigInt> out(n, 0);
  for (std::size_t j = 0; j < C[s].size(); ++j) {
    if (C[s][j] == 0) continue;
    for (std::size_t k = 0; k < n; ++k) out[k] += C[s][j] * u[j][k];
  }
  return out;
}

}  // namespace

bool validate_certificate(const Mat& A, const Mat& B, const UBlocks& u, int row, const Mat& C,
                          std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  check_abu_dimensions(A, B, u);
  const std::size_t m = A.size(), n = B.size();
  if (row < 0 || static_cast<std::size_t>(row) >= m) return fail("row index out of range");
  BigInt p = 0;
  for (const auto& e : u[row]) p += e;
  if (p == 0) return fail("empty representation block");
  if (C.size() != static_cast<std::size_t>(p)) return fail("C must have p = sum(u_i) rows");
  for (const auto& r : C) {
    if (r.size() != m) return fail("C must have one column per class of A");
    for (const auto& e : r)
      if (e < 0) return fail("C must be nonnegative");
  }
  for (std::size_t j = 0; j < m; ++j) {
    BigInt col = 0;
    for (const auto& r : C) col += r[j];
    if (col != A[row][j]) return fail("column sums of C do not reproduce the row of A");
  }
  // multiset of weighted rows == rows of B with multiplicity u
  std::vector<std::vector<BigInt>> have, want;
  for (std::size_t s = 0; s < C.size(); ++s) have.push_back(weighted_rows(C, u, s, n));
  for (std::size_t j = 0; j < n; ++j)
    for (BigInt t = 0; t < u[row][j]; ++t) want.push_back(B[j]);
  std::sort(have.begin(), have.end());
  std::sort(want.begin(), want.end());
  if (have != want) return fail("weighted rows of C do not match the rows of B with multiplicity u");
  return true;
}

std::optional<RearrangingMatrix> solve_row(const Mat& A, const Mat& B, const UBlocks& u, int row) {
  check_abu_dimensions(A, B, u);
  const std::size_t m = A.size(), n = B.size();
  if (row < 0 || static_cast<std::size_t>(row) >= m)
    throw UsageError("solve_row: row index out of range");

  // slot targets: u[row][j] slots aiming at row j of B, processed in
  // decreasing target-row order
  std::vector<int> slots;
  for (std::size_t j = 0; j < n; ++j) {
    if (u[row][j] < 0) throw UsageError("u must be nonnegative");
    BigInt cnt = u[row][j];
    if (cnt > 4096) throw CapExceeded("representation block too large for the row solver");
    for (BigInt t = 0; t < cnt; ++t) slots.push_back(static_cast<int>(j));
  }
  if (slots.empty()) return std::nullopt;
  std::stable_sort(slots.begin(), slots.end(), [&](int a, int b) {
    if (B[a] != B[b]) return B[b] < B[a];  // decreasing lexicographic target
    return a < b;
  });

  // all candidate slot rows per target class, bounded by the row budget,
  // enumerated in lexicographic order
  const std::vector<BigInt>& budget0 = A[row];
  std::map<int, std::vector<std::vector<BigInt>>> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if (candidates.count(static_cast<int>(j))) continue;
    std::vector<std::vector<BigInt>> sols;
    std::vector<BigInt> cur(m, 0);
    std::vector<BigInt> target = B[j];
    // DFS over classes
    auto rec = [&](auto&& self, std::size_t cls, std::vector<BigInt>& rem) -> void {
      if (cls == m) {
        for (const auto& e : rem)
          if (e != 0) return;
        sols.push_back(cur);
        return;
      }
      // bound for cur[cls]
      BigInt bound = budget0[cls];
      for (std::size_t k = 0; k < n; ++k) {
        if (u[cls][k] == 0) continue;
        BigInt q = rem[k] / u[cls][k];
        if (q < bound) bound = q;
      }
      bool u_all_zero = true;
      for (std::size_t k = 0; k < n; ++k)
        if (u[cls][k] != 0) u_all_zero = false;
      if (u_all_zero) bound = 0;  // zero block contributes nothing; pin to 0
      for (BigInt v = 0; v <= bound; ++v) {
        cur[cls] = v;
        if (v > 0)
          for (std::size_t k = 0; k < n; ++k) rem[k] -= u[cls][k];
        self(self, cls + 1, rem);
        if (sols.size() > 200000) break;  // runaway guard
      }
      // undo
      for (std::size_t k = 0; k < n; ++k) rem[k] += u[cls][k] * cur[cls];
      cur[cls] = 0;
    };
    rec(rec, 0, target);
    candidates[static_cast<int>(j)] = std::move(sols);
  }

  const std::size_t p = slots.size();
  Mat C(p, std::vector<BigInt>(m, 0));
  std::vector<BigInt> budget = budget0;
  std::vector<std::size_t> chosen(p, 0);

  // depth-first over slots; equal-target slots take nondecreasing solution
  // indices, which removes their permutation symmetry
  auto dfs = [&](auto&& self, std::size_t s) -> bool {
    if (s == p) {
      for (const auto& e : budget)
        if (e != 0) return false;
      return true;
    }
    const int cls = slots[s];
    const auto& sols = candidates[cls];
    std::size_t start = 0;
    if (s > 0 && slots[s - 1] == cls) start = chosen[s - 1];
    for (std::size_t si = start; si < sols.size(); ++si) {
      const auto& sol = sols[si];
      bool fits = true;
      for (std::size_t j = 0; j < m; ++j)
        if (sol[j] > budget[j]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (std::size_t j = 0; j < m; ++j) budget[j] -= sol[j];
      C[s] = sol;
      chosen[s] = si;
      if (self(self, s + 1)) return true;
      for (std::size_t j = 0; j < m; ++j) budget[j] += sol[j];
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;

  RearrangingMatrix out;
  out.row = row;
  out.C = std::move(C);
  for (int cls : slots) out.slot_class.push_back(cls);
  return out;
}

RearrangeVerdict is_rearrangeable(const Mat& A, const Mat& B, const UBlocks& u, int k_max) {
  check_abu_dimensions(A, B, u);
  if (k_max < 1) throw UsageError("k_max must be >= 1");
  RearrangeVerdict verdict;
  verdict.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    const Mat Ak = mat_pow(A, static_cast<unsigned>(k));
    const Mat Bk = mat_pow(B, static_cast<unsigned>(k));
    if (!necessary_check(Ak, Bk, u)) {
      verdict.failed_row = -1;
      continue;
    }
    bool all = true;
    std::vector<RearrangingMatrix> certs;
    for (std::size_t i = 0; i < A.size(); ++i) {
      auto c = solve_row(Ak, Bk, u, static_cast<int>(i));
      if (!c) {
        all = false;
        verdict.failed_row = static_cast<int>(i);
        break;
      }
      std::string why;
      if (!validate_certificate(Ak, Bk, u, static_cast<int>(i), c->C, &why))
        throw InternalError("solver produced an invalid certificate: " + why);
      certs.push_back(std::move(*c));
    }
    if (all) {
      verdict.answer = RearrangeVerdict::Answer::Yes;
      verdict.power = k;
      verdict.certificates = std::move(certs);
      return verdict;
    }
  }
  verdict.answer = RearrangeVerdict::Answer::No;
  return verdict;
}

int wlog_power(const ClassTable& table, int k_max) {
  if (!table.simple()) throw UsageError("wlog_power needs a simple class table");
  const BigInt max_size = static_cast<long long>(table.max_component_size());
  Mat pw = table.B;
  for (int k = 1; k <= k_max; ++k) {
    BigInt min_row_sum = -1;
    for (const auto& row : pw) {
      BigInt s = 0;
      for (const auto& e : row) s += e;
      if (min_row_sum < 0 || s < min_row_sum) min_row_sum = s;
    }
    if (min_row_sum >= max_size) return k;
    pw = mat_mul(pw, table.B);
  }
  throw CapExceeded("wlog_power: no admissible power up to the cap");
}

}  // namespace augtree
