#include "randinv/random_fn.hpp"

#include <cmath>
#include <stdexcept>

namespace randinv {

RandomFn::RandomFn(std::vector<Label> domain, std::vector<Label> codomain,
                   std::vector<std::vector<double>> rows, double tol)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (rows.size() != domain_.size()) {
    throw std::invalid_argument("RandomFn: row count does not match domain size");
  }
  matrix_.reserve(domain_.size() * codomain_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Row validation (including nonnegativity and sum tolerance) reuses Dist.
    Dist check(codomain_, rows[i], tol);
    matrix_.insert(matrix_.end(), rows[i].begin(), rows[i].end());
  }
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (!domain_idx_.emplace(domain_[i], i).second) {
      throw std::invalid_argument("RandomFn: duplicate domain label '" + domain_[i] + "'");
    }
  }
  for (std::size_t j = 0; j < codomain_.size(); ++j) codomain_idx_.emplace(codomain_[j], j);
}

RandomFn RandomFn::identity(std::vector<Label> labels) {
  std::vector<std::vector<double>> rows(labels.size(), std::vector<double>(labels.size(), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) rows[i][i] = 1.0;
  return RandomFn(labels, labels, std::move(rows), kInternalTol);
}

Dist RandomFn::row_dist(std::size_t i) const {
  auto r = row(i);
  return Dist(codomain_, std::vector<double>(r.begin(), r.end()), kInternalTol);
}

std::size_t RandomFn::domain_index(const Label& a) const {
  auto it = domain_idx_.find(a);
  if (it == domain_idx_.end()) throw std::invalid_argument("RandomFn: unknown domain label '" + a + "'");
  return it->second;
}

std::size_t RandomFn::codomain_index(const Label& u) const {
  auto it = codomain_idx_.find(u);
  if (it == codomain_idx_.end()) {
    throw std::invalid_argument("RandomFn: unknown codomain label '" + u + "'");
  }
  return it->second;
}

RandomFn compose(const RandomFn& xi, const RandomFn& gamma) {
  if (xi.codomain() != gamma.domain()) {
    throw std::invalid_argument("compose: intermediate labels do not match");
  }
  const std::size_t na = xi.domain_size();
  const std::size_t nu = xi.codomain_size();
  const std::size_t nv = gamma.codomain_size();
  std::vector<std::vector<double>> rows(na, std::vector<double>(nv, 0.0));
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t u = 0; u < nu; ++u) {
      const double x = xi.entry(a, u);
      if (x == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) rows[a][v] += x * gamma.entry(u, v);
    }
  }
  return RandomFn(xi.domain(), gamma.codomain(), std::move(rows), kInternalTol);
}

Counts sample(const RandomFn& xi, const Label& a, std::int64_t k, RngStream& rng) {
  const std::size_t i = xi.domain_index(a);
  if (k < 1) throw std::invalid_argument("sample: k must be at least 1");
  std::vector<std::int64_t> counts(xi.codomain_size(), 0);
  auto r = xi.row(i);
  for (std::int64_t t = 0; t < k; ++t) ++counts[rng.next_index(r)];
  return Counts(xi.codomain(), std::move(counts));
}

std::vector<std::size_t> sample_sequence(const RandomFn& xi, const Label& a, std::int64_t k,
                                         RngStream& rng) {
  const std::size_t i = xi.domain_index(a);
  if (k < 1) throw std::invalid_argument("sample_sequence: k must be at least 1");
  std::vector<std::size_t> seq(static_cast<std::size_t>(k));
  auto r = xi.row(i);
  for (auto& s : seq) s = rng.next_index(r);
  return seq;
}

Label tuple_label(std::uint64_t code) { return std::to_string(code); }

std::vector<std::size_t> decode_tuple(std::uint64_t code, std::size_t base, int k) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  for (int pos = k - 1; pos >= 0; --pos) {
    digits[static_cast<std::size_t>(pos)] = static_cast<std::size_t>(code % base);
    code /= base;
  }
  return digits;
}

std::uint64_t encode_tuple(std::span<const std::size_t> digits, std::size_t base) {
  std::uint64_t code = 0;
  for (std::size_t d : digits) code = code * base + d;
  return code;
}

RandomFn kfold_explicit(const RandomFn& xi, int k, std::uint64_t max_row_entries) {
  if (k < 1) throw std::invalid_argument("kfold_explicit: k must be at least 1");
  const std::size_t nu = xi.codomain_size();
  std::uint64_t entries = 1;
  for (int i = 0; i < k; ++i) {
    if (entries > max_row_entries / nu) {
      throw std::invalid_argument("kfold_explicit: |U|^k exceeds the configured cap");
    }
    entries *= nu;
  }
  std::vector<Label> tuple_labels(entries);
  for (std::uint64_t code = 0; code < entries; ++code) tuple_labels[code] = tuple_label(code);

  const std::size_t na = xi.domain_size();
  std::vector<std::vector<double>> rows(na, std::vector<double>(entries, 0.0));
  for (std::size_t a = 0; a < na; ++a) {
    auto r = xi.row(a);
    // Walk codes in order; digit probabilities multiply across positions.
    for (std::uint64_t code = 0; code < entries; ++code) {
      double p = 1.0;
      std::uint64_t rest = code;
      for (int pos = 0; pos < k; ++pos) {
        p *= r[rest % nu];
        rest /= nu;
      }
      rows[a][code] = p;
    }
  }
  return RandomFn(xi.domain(), std::move(tuple_labels), std::move(rows), kInternalTol);
}

}  // namespace randinv
