// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "eeorder/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "eeorder/error.hpp"
#include "eeorder/rng.hpp"

namespace eeorder {

namespace {
void check_set(const EncodedSet& data) {
  if (data.size() == 0) fail(ErrorCode::kInvalidArgument, "empty training data");
  if (data.x.size() != data.y.size())
    fail(ErrorCode::kInvalidArgument, "feature and label counts differ");
  for (const auto& x : data.x)
    for (const SparseEntry& e : x.entries)
      if (e.index >= data.dim) fail(ErrorCode::kInvalidArgument, "feature index out of range");
}

nlohmann::json sparse_to_json(const SparseVec& x) {
  nlohmann::json out = nlohmann::json::array();
  for (const SparseEntry& e : x.entries) out.push_back({e.index, e.value});
  return out;
}

SparseVec sparse_from_json(const nlohmann::json& j) {
  SparseVec out;
  for (const auto& e : j) out.entries.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<double>()});
  return out;
}

double sq_norm(const SparseVec& x) {
  double s = 0.0;
  for (const SparseEntry& e : x.entries) s += e.value * e.value;
  return s;
}
}  // namespace

nlohmann::json LinearModel::to_json() const {
  return {{"kind", "linear-svm"}, {"weights", weights}, {"bias", bias}, {"lambda", lambda}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  try {
    return {j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
            j.at("lambda").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("linear model json: ") + e.what());
  }
}

double svm_objective(const LinearModel& m, const EncodedSet& data) {
  double reg = m.bias * m.bias;
  for (double w : m.weights) reg += w * w;
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    hinge += std::max(0.0, 1.0 - to_sign(data.y[i]) * m.decision(data.x[i]));
  return 0.5 * m.lambda * reg + hinge / static_cast<double>(std::max<std::size_t>(1, data.size()));
}

// Pegasos. The bias is a regularized constant feature; the returned model is
// the average of the iterates over the second half of training.
LinearModel train_linear_svm(const EncodedSet& data, const LinearSvmParams& params) {
  check_set(data);
  if (!(params.lambda > 0.0)) fail(ErrorCode::kInvalidArgument, "lambda must be positive");
  if (params.epochs == 0) fail(ErrorCode::kInvalidArgument, "epochs must be positive");
  const std::size_t n = data.size(), dim = data.dim;
  const double lambda = params.lambda;
  const double radius2 = 1.0 / lambda;

  // w = scale * v keeps the shrink step O(1).
  std::vector<double> v(dim, 0.0), avg(dim, 0.0);
  double vb = 0.0, scale = 1.0, v_sq = 0.0, avg_b = 0.0;
  std::size_t averaged = 0;
  const std::size_t total = params.epochs * n;
  Rng rng(mix_seed(params.seed, 0x5eed));
  std::vector<std::size_t> order = iota_indices(n);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = to_sign(data.y[i]);
      const double margin = y * scale * (data.x[i].dot(v) + vb);
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        vb = 0.0;
        v_sq = 0.0;
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (const SparseEntry& e : data.x[i].entries) {
          const double old = v[e.index];
          v[e.index] += step * e.value;
          v_sq += v[e.index] * v[e.index] - old * old;
        }
        v_sq += (vb + step) * (vb + step) - vb * vb;
        vb += step;
      }
      const double norm2 = scale * scale * v_sq;
      if (norm2 > radius2) scale *= std::sqrt(radius2 / norm2);
      if (scale < 1e-100 || scale > 1e100) {
        for (double& x : v) x *= scale;
        vb *= scale;
        v_sq = vb * vb;
        for (double x : v) v_sq += x * x;
        scale = 1.0;
      }
      if (2 * t > total) {
        for (std::size_t d = 0; d < dim; ++d) avg[d] += scale * v[d];
        avg_b += scale * vb;
        ++averaged;
      }
    }
  }
  LinearModel m;
  m.lambda = lambda;
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(1, averaged));
  m.weights.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) m.weights[d] = avg[d] * inv;
  m.bias = avg_b * inv;
  return m;
}

double rbf_kernel(const SparseVec& u, double u_sq, const SparseVec& v, double v_sq,
                  double gamma) {
  double dot = 0.0;
  auto a = u.entries.begin(), b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->index < b->index) ++a;
    else if (b->index < a->index) ++b;
    else (dot += a->value * b->value, ++a, ++b);
  }
  return std::exp(-gamma * std::max(0.0, u_sq + v_sq - 2.0 * dot));
}

double KernelModel::decision(const SparseVec& x) const {
  const double x_sq = sq_norm(x);
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    s += coef[i] * rbf_kernel(support[i], support_sq_norm[i], x, x_sq, gamma);
  return s - rho;
}

nlohmann::json KernelModel::to_json() const {
  nlohmann::json sv = nlohmann::json::array();
  for (const auto& x : support) sv.push_back(sparse_to_json(x));
  return {{"kind", "rbf-svm"}, {"support", sv}, {"coef", coef}, {"rho", rho},
          {"gamma", gamma}, {"c", c}, {"converged", converged}, {"iterations", iterations}};
}

KernelModel KernelModel::from_json(const nlohmann::json& j) {
  try {
    KernelModel m;
    for (const auto& x : j.at("support")) {
      m.support.push_back(sparse_from_json(x));
      m.support_sq_norm.push_back(sq_norm(m.support.back()));
    }
    m.coef = j.at("coef").get<std::vector<double>>();
    if (m.coef.size() != m.support.size())
      fail(ErrorCode::kFormat, "support and coefficient counts differ");
    m.rho = j.at("rho").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.c = j.at("c").get<double>();
    m.converged = j.value("converged", true);
    m.iterations = j.value("iterations", std::size_t{0});
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormat, std::string("kernel model json: ") + e.what());
  }
}

namespace {

// LRU cache of kernel rows.
class KernelCache {
 public:
  KernelCache(const EncodedSet& data, double gamma, std::size_t cache_mb)
      : data_(data), gamma_(gamma), n_(data.size()), sq_(n_), dense_(data.dim, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) sq_[i] = sq_norm(data.x[i]);
    const std::size_t row_bytes = std::max<std::size_t>(1, n_ * sizeof(float));
    capacity_ = std::max<std::size_t>(2, cache_mb * (std::size_t{1} << 20) / row_bytes);
  }

  const float* row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second.data();
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<float> r(n_);
    for (const SparseEntry& e : data_.x[i].entries) dense_[e.index] = e.value;
    for (std::size_t k = 0; k < n_; ++k) {
      double dot = 0.0;
      for (const SparseEntry& e : data_.x[k].entries) dot += dense_[e.index] * e.value;
      r[k] = static_cast<float>(std::exp(-gamma_ * std::max(0.0, sq_[i] + sq_[k] - 2.0 * dot)));
    }
    for (const SparseEntry& e : data_.x[i].entries) dense_[e.index] = 0.0;
    lru_.emplace_front(i, std::move(r));
    index_[i] = lru_.begin();
    return lru_.front().second.data();
  }

  double sq(std::size_t i) const { return sq_[i]; }

 private:
  const EncodedSet& data_;
  double gamma_;
  std::size_t n_;
  std::vector<double> sq_;
  std::vector<double> dense_;
  std::size_t capacity_;
  std::list<std::pair<std::size_t, std::vector<float>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

}  // namespace

// SMO with second-order working set selection, following the libsvm solver
// for C-SVC without shrinking.
KernelModel train_rbf_svm(const EncodedSet& data, const RbfSvmParams& params) {
  check_set(data);
  if (!(params.c > 0.0)) fail(ErrorCode::kInvalidArgument, "C must be positive");
  if (params.gamma < 0.0) fail(ErrorCode::kInvalidArgument, "gamma must be non-negative");
  if (!(params.tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const std::size_t n = data.size();
  const double C = params.c;
  const double gamma =
      params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(1, data.dim));
  const std::size_t max_iter =
      params.max_iter > 0 ? params.max_iter : std::max<std::size_t>(10'000'000, 100 * n);
  constexpr double kTau = 1e-12;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  KernelCache cache(data, gamma, params.cache_mb);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = to_sign(data.y[i]);
  std::vector<double> alpha(n, 0.0), G(n, -1.0);
  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  auto in_up = [&](std::size_t t) { return y[t] == 1 ? !upper(t) : !lower(t); };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? !lower(t) : !upper(t); };

  bool converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t)
      if (in_up(t) && -y[t] * G[t] >= gmax) {
        if (-y[t] * G[t] > gmax || i == n) i = t;
        gmax = -y[t] * G[t];
      }
    double gmax2 = -kInf, obj_min = kInf;
    std::size_t j = n;
    const float* Ki = i < n ? cache.row(i) : nullptr;
    for (std::size_t t = 0; t < n && Ki; ++t) {
      if (!in_low(t)) continue;
      const double yg = y[t] * G[t];
      gmax2 = std::max(gmax2, yg);
      const double grad_diff = gmax + yg;
      if (grad_diff > 0.0) {
        double quad = 2.0 - 2.0 * Ki[t];
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj < obj_min) {
          obj_min = obj;
          j = t;
        }
      }
    }
    if (i == n || j == n || gmax + gmax2 < params.tol) {
      converged = true;
      break;
    }
    Ki = cache.row(i);
    const float* Kj = cache.row(j);
    const double Qij = y[i] * y[j] * static_cast<double>(Ki[j]);
    const double old_i = alpha[i], old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t k = 0; k < n; ++k)
      G[k] += y[k] * (y[i] * static_cast<double>(Ki[k]) * di + y[j] * static_cast<double>(Kj[k]) * dj);
  }

  // Bias from free vectors, else the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  KernelModel m;
  m.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  m.gamma = gamma;
  m.c = C;
  m.converged = converged;
  m.iterations = iter;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0.0) continue;
    m.support.push_back(data.x[t]);
    m.support_sq_norm.push_back(cache.sq(t));
    m.coef.push_back(alpha[t] * y[t]);
  }
  m.alpha = std::move(alpha);
  m.y = std::move(y);
  return m;
}

}  // namespace eeorder
