// Copyright 2026 The mhd Authors.
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

#ifndef MHD_OPTIM_HPP_
#define MHD_OPTIM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace mhd::models {

// First-order update rule over a flat parameter vector.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(std::span<double> params, std::span<const double> grad) = 0;
};

class Sgd final : public Optimizer {
 public:
  explicit Sgd(double learning_rate) : learning_rate_(learning_rate) {}
  void step(std::span<double> params, std::span<const double> grad) override;

 private:
  double learning_rate_;
};

// Adam with bias-corrected first and second moment estimates.
class Adam final : public Optimizer {
 public:
  Adam(std::size_t n, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);
  void step(std::span<double> params, std::span<const double> grad) override;

  std::uint64_t steps() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  std::uint64_t t_ = 0;
  double beta1_pow_ = 1.0, beta2_pow_ = 1.0;
  std::vector<double> m_, v_;
};

}  // namespace mhd::models

#endif  // MHD_OPTIM_HPP_
