#pragma once

#include <vector>

namespace mdscache {

// Zipf file popularity over a library of equally sized files. File indices
// are 0-based in code; file 0 is the most popular.
class PopularityModel {
 public:
  static PopularityModel zipf(int n_files, double alpha);

  // Model over an explicit distribution (need not be sorted). Entries must
  // be nonnegative and sum to one within 1e-12.
  static PopularityModel from_probs(std::vector<double> probs);

  int n_files() const { return static_cast<int>(probs_.size()); }
  double alpha() const { return alpha_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(int file) const { return probs_[file]; }

  // Inverse-CDF sample; u must lie in [0, 1).
  int sample(double u) const;

  template <class Rng>
  int sample(Rng& rng) const {
    return sample(rng.next_unit());
  }

 private:
  PopularityModel(std::vector<double> probs, double alpha);

  std::vector<double> probs_;
  std::vector<double> cdf_;
  double alpha_ = 0.0;
};

}  // namespace mdscache
