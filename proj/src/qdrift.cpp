// Copyright 2026 the composim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "composim/qdrift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "composim/rng.hpp"

namespace composim {
namespace {

constexpr std::uint64_t kSampleStream = 1;

double subset_lambda_checked(const Hamiltonian& h, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("qdrift needs a nonempty subset");
  const double lam = lambda_of(h, subset);
  if (!(lam > 0.0)) throw std::invalid_argument("qdrift needs lambda > 0 on the subset");
  return lam;
}

}  // namespace

Superoperator qdrift_exact_channel(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                                   double t, long long n_samples) {
  if (h.dim > 64) throw std::invalid_argument("qdrift_exact_channel requires dim <= 64");
  if (n_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  const double lam = subset_lambda_checked(h, subset);
  const double step = t / static_cast<double>(n_samples);
  const Eigen::Index d2 = static_cast<Eigen::Index>(h.dim) * h.dim;
  Superoperator single;
  single.dim = h.dim;
  single.mat = Mat::Zero(d2, d2);
  for (std::size_t i : subset) {
    const double p = h.terms[i].weight / lam;
    const Mat u = expm_i_herm(h.terms[i].op, lam * step);
    single.mat += p * kron(u.conjugate(), u);
  }
  return superop_power(single, n_samples);
}

GateSequence qdrift_sample(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                           double t, long long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  const double lam = subset_lambda_checked(h, subset);
  // Inverse-CDF draw over the subset's cumulative weights, one independent
  // counter per sample.
  std::vector<double> cum(subset.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    acc += h.terms[subset[i]].weight;
    cum[i] = acc;
  }
  GateSequence seq;
  seq.dim = h.dim;
  seq.order = 0;
  seq.total_time = t;
  seq.gates.reserve(static_cast<std::size_t>(n_samples));
  const double step = lam * t / static_cast<double>(n_samples);
  for (long long j = 0; j < n_samples; ++j) {
    const double u = rng::uniform_at(seed, kSampleStream, static_cast<std::uint64_t>(j)) * acc;
    std::size_t pick = subset.size() - 1;
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (u < cum[i]) {
        pick = i;
        break;
      }
    }
    const std::size_t term = subset[pick];
    // Stored duration divides out the term weight, so the replayed gate is
    // e^{i Op lambda t / N} regardless of h_i.
    seq.gates.push_back({term, step / h.terms[term].weight});
  }
  return seq;
}

QDriftCost qdrift_cost(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                       double t, double epsilon) {
  const double lam = subset_lambda_checked(h, subset);
  const double limit = lam * t * std::log(2.0) / 2.0;
  if (!(epsilon > 0.0) || !(epsilon < limit)) {
    throw std::invalid_argument("qdrift_cost requires epsilon in (0, lambda*t*ln2/2)");
  }
  QDriftCost c;
  c.n_relaxed = qdrift_cost_relaxed(lam, t, epsilon);
  c.n = std::max<long long>(1, ceil_count(c.n_relaxed));
  c.gates = static_cast<double>(c.n);
  return c;
}

double qdrift_cost_relaxed(double lambda, double t, double epsilon) {
  return 4.0 * lambda * lambda * t * t / epsilon;
}

double qdrift_error_bound(double lambda, double t, long long n_samples) {
  if (n_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  const double n = static_cast<double>(n_samples);
  return (2.0 * lambda * lambda * t * t / n) * std::exp(2.0 * lambda * t / n);
}

}  // namespace composim
