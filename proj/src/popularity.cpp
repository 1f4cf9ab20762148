#include "mdscache/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdscache {

PopularityModel PopularityModel::zipf(int n_files, double alpha) {
  if (n_files < 1)
    throw std::invalid_argument("popularity: n_files must be at least 1");
  if (!(alpha >= 0) || !std::isfinite(alpha))
    throw std::invalid_argument("popularity: alpha must be finite and >= 0");

  std::vector<double> probs(n_files);
  long double norm = 0.0L;
  for (int j = 0; j < n_files; ++j) {
    const long double w = std::pow(static_cast<long double>(j + 1),
                                   -static_cast<long double>(alpha));
    probs[j] = static_cast<double>(w);
    norm += w;
  }
  for (double& p : probs) p = static_cast<double>(p / static_cast<double>(norm));
  return PopularityModel(std::move(probs), alpha);
}

PopularityModel PopularityModel::from_probs(std::vector<double> probs) {
  if (probs.empty())
    throw std::invalid_argument("popularity: need at least one file");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("popularity: probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("popularity: probabilities must sum to 1");
  return PopularityModel(std::move(probs), 0.0);
}

PopularityModel::PopularityModel(std::vector<double> probs, double alpha)
    : probs_(std::move(probs)), alpha_(alpha) {
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    acc += probs_[j];
    cdf_[j] = acc;
  }
  cdf_.back() = 1.0;  // guard against rounding at the top end
}

int PopularityModel::sample(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                   cdf_.size() - 1));
}

}  // namespace mdscache
