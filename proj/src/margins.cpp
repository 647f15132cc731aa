#include "copreg/margins.hpp"

#include "copreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace copreg {

std::vector<UV> PseudoSample::response_pairs(std::size_t j) const {
  std::vector<UV> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = {u_y[i], u_x.at(j)[i]};
  return out;
}

std::vector<UV> PseudoSample::predictor_pairs(std::size_t a, std::size_t b) const {
  std::vector<UV> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = {u_x.at(a)[i], u_x.at(b)[i]};
  return out;
}

std::vector<double> pseudo_observations(std::span<const double> column) {
  const std::size_t n = column.size();
  if (n < 2)
    throw DomainError("pseudo_observations: need at least 2 observations, got " + std::to_string(n));
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(n);
  const double denom = static_cast<double>(n) + 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin();
    out[i] = static_cast<double>(count) / denom;
  }
  return out;
}

PseudoSample ecdf_transform(const Dataset& data) {
  const std::size_t n = data.n();
  if (n < 2)
    throw DomainError("ecdf_transform: need at least 2 observations, got " + std::to_string(n));
  PseudoSample ps;
  ps.n = n;
  ps.d = data.d();
  ps.y_raw = data.y;
  ps.u_y = pseudo_observations(data.y);
  for (const auto& col : data.x) {
    if (col.size() != n)
      throw DomainError("ecdf_transform: predictor column length differs from response length");
    ps.u_x.push_back(pseudo_observations(col));
    auto sorted = col;
    std::sort(sorted.begin(), sorted.end());
    ps.x_sorted.push_back(std::move(sorted));
  }
  return ps;
}

double ecdf_eval_sorted(std::span<const double> sorted_column, double query) {
  const auto count = std::upper_bound(sorted_column.begin(), sorted_column.end(), query) - sorted_column.begin();
  return static_cast<double>(count) / (static_cast<double>(sorted_column.size()) + 1.0);
}

double ecdf_eval(std::span<const double> column, double query) {
  const auto count = std::count_if(column.begin(), column.end(), [&](double x) { return x <= query; });
  return static_cast<double>(count) / (static_cast<double>(column.size()) + 1.0);
}

double empirical_quantile(std::span<const double> column, double p) {
  if (column.empty())
    throw DomainError("empirical_quantile: empty column");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const double denom = static_cast<double>(sorted.size()) + 1.0;
  // ecdf at sorted[k] is (index of last equal value + 1) / (n + 1)
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k])
      continue;
    if (static_cast<double>(k + 1) / denom >= p)
      return sorted[k];
  }
  return sorted.back();
}

namespace {

long long tie_pairs(const std::vector<double>& sorted_values) {
  long long total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted_values.size(); ++i) {
    if (i < sorted_values.size() && sorted_values[i] == sorted_values[i - 1]) {
      ++run;
    } else {
      total += static_cast<long long>(run) * static_cast<long long>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorts v ascending and returns the number of inversions (pairs i < j with v[i] > v[j]).
long long merge_count(std::vector<double>& v, std::vector<double>& buffer, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2)
    return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = merge_count(v, buffer, lo, mid) + merge_count(v, buffer, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buffer[k++] = v[i++];
    } else {
      swaps += static_cast<long long>(mid - i);
      buffer[k++] = v[j++];
    }
  }
  while (i < mid)
    buffer[k++] = v[i++];
  while (j < hi)
    buffer[k++] = v[j++];
  std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo), buffer.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

} // namespace

// Knight's O(n log n) algorithm for tau-b.
double empirical_kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DomainError("empirical_kendall_tau: columns differ in length");
  const std::size_t n = a.size();
  if (n < 2)
    return 0.0;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });
  std::vector<double> sa(n), sb(n);
  for (std::size_t k = 0; k < n; ++k) {
    sa[k] = a[idx[k]];
    sb[k] = b[idx[k]];
  }
  const long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  const long long n1 = tie_pairs(sa);
  long long n3 = 0;
  {
    std::size_t run = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k < n && sa[k] == sa[k - 1] && sb[k] == sb[k - 1]) {
        ++run;
      } else {
        n3 += static_cast<long long>(run) * static_cast<long long>(run - 1) / 2;
        run = 1;
      }
    }
  }
  std::vector<double> buffer(n);
  const long long swaps = merge_count(sb, buffer, 0, n);
  const long long n2 = tie_pairs(sb);
  const double denom = std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  if (denom == 0.0)
    return 0.0;
  return static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps) / denom;
}

double empirical_kendall_tau(std::span<const UV> points) {
  std::vector<double> a(points.size()), b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    a[i] = points[i].u;
    b[i] = points[i].v;
  }
  return empirical_kendall_tau(a, b);
}

} // namespace copreg
