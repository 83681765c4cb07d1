#include "optseq/seq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "optseq/errors.hpp"
#include "optseq/weights.hpp"

namespace optseq {

namespace {

void validate(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("sequence must be nonempty");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument("sequence entry " + std::to_string(i) +
                                  " is not finite");
}

std::size_t checked_product(std::size_t n, std::size_t m, std::size_t cap) {
  if (m != 0 && n > cap / m)
    throw ResourceLimitError("tensor length " + std::to_string(n) + "x" +
                             std::to_string(m) + " exceeds cap " +
                             std::to_string(cap));
  return n * m;
}

}  // namespace

FiniteSeq::FiniteSeq(std::vector<double> entries) : entries_(std::move(entries)) {
  validate(entries_);
}

FiniteSeq::FiniteSeq(std::initializer_list<double> entries)
    : entries_(entries) {
  validate(entries_);
}

FiniteSeq FiniteSeq::ones(std::size_t n) {
  return FiniteSeq(std::vector<double>(n, 1.0));
}

FiniteSeq FiniteSeq::unit(std::size_t n, std::size_t k) {
  if (k >= n) throw std::invalid_argument("unit vector index out of range");
  std::vector<double> v(n, 0.0);
  v[k] = 1.0;
  return FiniteSeq(std::move(v));
}

RearrangedSeq rearrange(std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("rearrange: empty input");
  std::vector<double> v(a.size());
  std::transform(a.begin(), a.end(), v.begin(),
                 [](double x) { return std::fabs(x); });
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return RearrangedSeq(std::move(v));
}

FiniteSeq tensor(const FiniteSeq& a, const FiniteSeq& b, std::size_t cap) {
  std::vector<double> out;
  out.reserve(checked_product(a.size(), b.size(), cap));
  for (double x : a.entries())
    for (double y : b.entries()) out.push_back(x * y);
  return FiniteSeq(std::move(out));
}

FiniteSeq tensor_blocks(const FiniteSeq& a, const FiniteSeq& b,
                        std::size_t cap) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<double> out(checked_product(n, n, cap), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * n + j] += a[i] * b[j];
  return FiniteSeq(std::move(out));
}

RearrangedSeq top_k_products(const WeightGenerator& w, std::size_t k,
                             std::size_t cap) {
  if (k == 0) throw std::invalid_argument("top_k_products: k must be >= 1");
  if (k > cap)
    throw ResourceLimitError("top_k_products: k = " + std::to_string(k) +
                             " exceeds cap " + std::to_string(cap));
  const auto len = w.length();
  if (len && *len * *len < k)
    throw ResourceLimitError("top_k_products: only " +
                             std::to_string(*len * *len) + " products defined");

  // Weights are fetched once per index; the frontier never reaches beyond k.
  std::vector<double> wv;
  auto weight = [&](std::uint64_t i) {
    while (wv.size() <= i) wv.push_back(w.weight(wv.size() + 1));
    return wv[i];
  };
  const std::uint64_t limit = len ? *len : std::uint64_t(k);

  using Node = std::tuple<double, std::uint64_t, std::uint64_t>;
  // Largest value first; among equal values the smallest (i, j).
  auto cmp = [](const Node& x, const Node& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) >
           std::tie(std::get<1>(y), std::get<2>(y));
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> frontier(cmp);
  std::set<std::pair<std::uint64_t, std::uint64_t>> visited;
  auto push = [&](std::uint64_t i, std::uint64_t j) {
    if (i >= limit || j >= limit) return;
    if (!visited.emplace(i, j).second) return;
    frontier.emplace(weight(i) * weight(j), i, j);
  };

  std::vector<double> out;
  out.reserve(k);
  push(0, 0);
  while (out.size() < k) {
    auto [v, i, j] = frontier.top();
    frontier.pop();
    out.push_back(v);
    visited.erase({i, j});
    push(i + 1, j);
    push(i, j + 1);
  }
  return RearrangedSeq(std::move(out));
}

double sum_abs(std::span<const double> a) {
  return std::accumulate(a.begin(), a.end(), 0.0,
                         [](double s, double x) { return s + std::fabs(x); });
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace optseq
