#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "randinv/dist.hpp"
#include "randinv/rng.hpp"

namespace randinv {

// A random function A -> U stored as its associated row-stochastic matrix:
// row a holds the distribution of the image of a. The same type represents
// inverters U -> A.
class RandomFn {
 public:
  RandomFn(std::vector<Label> domain, std::vector<Label> codomain,
           std::vector<std::vector<double>> rows, double tol = kInputTol);

  static RandomFn identity(std::vector<Label> labels);

  const std::vector<Label>& domain() const { return domain_; }
  const std::vector<Label>& codomain() const { return codomain_; }
  std::size_t domain_size() const { return domain_.size(); }
  std::size_t codomain_size() const { return codomain_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {matrix_.data() + i * codomain_.size(), codomain_.size()};
  }
  double entry(std::size_t i, std::size_t j) const { return matrix_[i * codomain_.size() + j]; }

  Dist row_dist(std::size_t i) const;

  std::size_t domain_index(const Label& a) const;
  std::size_t codomain_index(const Label& u) const;

 private:
  std::vector<Label> domain_;
  std::vector<Label> codomain_;
  std::vector<double> matrix_;  // row-major, |A| x |U|
  std::unordered_map<Label, std::size_t> domain_idx_;
  std::unordered_map<Label, std::size_t> codomain_idx_;
};

// Composition Gamma o Xi as an A -> V random function; entry (a, v) is
// sum_u P[xi_a = u] P[gamma_u = v]. Both matrices are row-stochastic, so this
// is the plain matrix product of the associated matrices.
RandomFn compose(const RandomFn& xi, const RandomFn& gamma);

// k i.i.d. draws from row a.
Counts sample(const RandomFn& xi, const Label& a, std::int64_t k, RngStream& rng);
std::vector<std::size_t> sample_sequence(const RandomFn& xi, const Label& a, std::int64_t k,
                                         RngStream& rng);

// Tuple labels for the explicit k-fold product: a tuple (u_1, ..., u_k) is
// encoded as the base-|U| integer with u_1 as the most significant digit, and
// its label is the decimal form of that code.
Label tuple_label(std::uint64_t code);
std::vector<std::size_t> decode_tuple(std::uint64_t code, std::size_t base, int k);
std::uint64_t encode_tuple(std::span<const std::size_t> digits, std::size_t base);

// The k-fold product Xi^(k): A -> U^k built explicitly, with product
// probabilities per tuple. Guarded by a cap on |U|^k entries per row.
RandomFn kfold_explicit(const RandomFn& xi, int k, std::uint64_t max_row_entries = 1000000);

}  // namespace randinv
