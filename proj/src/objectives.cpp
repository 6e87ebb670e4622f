// Copyright 2026 The signopt Authors. All Rights Reserved.
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
// =============================================================================

#include "signopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "signopt/errors.hpp"
#include "signopt/rng.hpp"

namespace signopt {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_positive(const std::optional<Constant>& c, const char* name) {
  if (c && !(c->value > 0.0 && std::isfinite(c->value))) {
    fail(ErrorKind::kInvalidInput, std::string("ConstantSet: ") + name + " must be positive");
  }
}

}  // namespace

void ConstantSet::validate() const {
  check_positive(mu_inf, "mu_inf");
  check_positive(L_inf, "L_inf");
  check_positive(pl_mu, "pl_mu");
  if (mu_inf && L_inf && mu_inf->provenance == Provenance::kAnalytic &&
      L_inf->provenance == Provenance::kAnalytic && mu_inf->value > L_inf->value) {
    fail(ErrorKind::kInvalidInput, "ConstantSet: analytic mu_inf exceeds analytic L_inf");
  }
}

Objective::Objective(ObjectiveParts parts) : parts_(std::move(parts)) {
  if (parts_.dim == 0) fail(ErrorKind::kInvalidInput, "Objective: dim must be >= 1");
  if (!parts_.value || !parts_.gradient) {
    fail(ErrorKind::kInvalidInput, "Objective: value and gradient are required");
  }
  parts_.constants.validate();
  if (parts_.minimizer) {
    require_same_dim(*parts_.minimizer, DenseVector(parts_.dim), "Objective minimizer");
    if (!parts_.f_star) fail(ErrorKind::kInvalidInput, "Objective: minimizer without f_star");
    const double at_min = parts_.value(*parts_.minimizer);
    if (std::abs(at_min - *parts_.f_star) > 1e-10 * std::max(1.0, std::abs(*parts_.f_star))) {
      fail(ErrorKind::kInvalidInput, "Objective: value at minimizer differs from f_star");
    }
  }
}

double Objective::value(const DenseVector& x) const {
  if (x.dim() != parts_.dim) {
    fail(ErrorKind::kInvalidInput, parts_.name + ": dimension mismatch in value");
  }
  return parts_.value(x);
}

DenseVector Objective::gradient(const DenseVector& x) const {
  if (x.dim() != parts_.dim) {
    fail(ErrorKind::kInvalidInput, parts_.name + ": dimension mismatch in gradient");
  }
  return parts_.gradient(x);
}

Objective Objective::with_f_star(double f_star) const {
  ObjectiveParts parts = parts_;
  parts.f_star = f_star;
  return Objective(std::move(parts));
}

Objective Objective::with_constants(ConstantSet constants) const {
  ObjectiveParts parts = parts_;
  parts.constants = std::move(constants);
  return Objective(std::move(parts));
}

Objective make_quadratic(const Eigen::MatrixXd& A, const DenseVector& b, std::string name) {
  const auto d = static_cast<Eigen::Index>(b.dim());
  if (A.rows() != d || A.cols() != d) {
    fail(ErrorKind::kInvalidInput, "make_quadratic: A must be square and match b");
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorKind::kInvalidInput, "make_quadratic: A is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  const double lmin = lambda(0);
  const double lmax = lambda(d - 1);
  const double tol = 1e-12 * std::max(1.0, std::abs(lmax));
  if (lmin < -tol) fail(ErrorKind::kInvalidInput, "make_quadratic: A is not positive semidefinite");

  const Eigen::Map<const Eigen::VectorXd> bv(b.entries().data(), d);
  Eigen::VectorXd xstar = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lambda(i) > tol) {
      const Eigen::VectorXd u = eig.eigenvectors().col(i);
      xstar += (u.dot(bv) / lambda(i)) * u;
    }
  }
  if ((A * xstar - bv).norm() > 1e-9 * (1.0 + bv.norm())) {
    fail(ErrorKind::kNoMinimum, "make_quadratic: b is not in the range of singular A");
  }

  ObjectiveParts parts;
  parts.name = std::move(name);
  parts.dim = b.dim();
  const Eigen::MatrixXd Ac = A;
  const Eigen::VectorXd bc = bv;
  parts.value = [Ac, bc](const DenseVector& x) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.entries().data(), bc.size());
    return 0.5 * xv.dot(Ac * xv) - bc.dot(xv);
  };
  parts.gradient = [Ac, bc](const DenseVector& x) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.entries().data(), bc.size());
    const Eigen::VectorXd g = Ac * xv - bc;
    return DenseVector(std::vector<double>(g.data(), g.data() + g.size()));
  };
  parts.minimizer = DenseVector(std::vector<double>(xstar.data(), xstar.data() + d));
  parts.f_star = -0.5 * bv.dot(xstar);

  const double l_inf = A.cwiseAbs().sum();
  if (l_inf > 0.0) {
    parts.constants.L_inf = Constant{l_inf, Provenance::kAnalytic};
    parts.l2_lipschitz = lmax;
  }
  // ||.||_inf <= ||.||_2, so l2 strong convexity carries over to l_inf.
  if (lmin > tol) parts.constants.mu_inf = Constant{lmin, Provenance::kAnalytic};
  return Objective(std::move(parts));
}

Objective make_toy_pl() {
  ObjectiveParts parts;
  parts.name = "toy_pl";
  parts.dim = 1;
  parts.value = [](const DenseVector& x) {
    const double s = std::sin(x[0]);
    return x[0] * x[0] + 3.0 * s * s;
  };
  parts.gradient = [](const DenseVector& x) {
    return DenseVector{2.0 * x[0] + 3.0 * std::sin(2.0 * x[0])};
  };
  parts.f_star = 0.0;
  parts.minimizer = DenseVector{0.0};
  // |f''| = |2 + 6 cos 2x| <= 8
  parts.constants.L_inf = Constant{8.0, Provenance::kAnalytic};
  parts.l2_lipschitz = 8.0;
  Objective base(std::move(parts));

  ConstantSet est = estimate_constants(base, Box::cube(1, -3.0, 3.0), 20000, 0x70f1,
                                       EstimateRequest{.lipschitz = false, .pl = true});
  ConstantSet constants = base.constants();
  constants.pl_mu = est.pl_mu;
  return base.with_constants(constants);
}

Objective make_logistic(SampleList samples, std::string name) {
  if (samples.empty()) fail(ErrorKind::kInvalidInput, "make_logistic: empty sample list");
  const std::size_t d = samples.front().features.dim();
  for (const Sample& s : samples) {
    if (s.features.dim() != d) fail(ErrorKind::kInvalidInput, "make_logistic: inconsistent dimension");
    if (s.label != 1 && s.label != -1) {
      fail(ErrorKind::kInvalidInput, "make_logistic: label must be -1 or +1");
    }
    require_finite(s.features, "make_logistic");
  }
  const std::size_t n = samples.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Row-major design matrix with the label folded in: rows are b_i a_i.
  auto design = std::make_shared<Eigen::MatrixXd>(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      (*design)(i, j) = samples[i].label * samples[i].features[j];
    }
  }

  ObjectiveParts parts;
  parts.name = std::move(name);
  parts.dim = d;
  parts.value = [design, inv_n](const DenseVector& x) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.entries().data(), design->cols());
    const Eigen::VectorXd margins = (*design) * xv;
    double s = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) s += softplus(-margins(i));
    return s * inv_n + 0.5 * inv_n * xv.squaredNorm();
  };
  parts.gradient = [design, inv_n](const DenseVector& x) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.entries().data(), design->cols());
    Eigen::VectorXd w = (*design) * xv;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = -sigmoid(-w(i));
    const Eigen::VectorXd g = inv_n * (design->transpose() * w + xv);
    return DenseVector(std::vector<double>(g.data(), g.data() + g.size()));
  };

  auto sum = std::make_shared<FiniteSum>();
  sum->count = n;
  sum->add_component_grad = [design, inv_n](std::size_t i, const DenseVector& x, DenseVector& accum) {
    const auto row = design->row(static_cast<Eigen::Index>(i));
    double margin = 0.0;
    for (std::size_t j = 0; j < x.dim(); ++j) margin += row(static_cast<Eigen::Index>(j)) * x[j];
    const double w = -sigmoid(-margin);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      accum[j] += w * row(static_cast<Eigen::Index>(j)) + inv_n * x[j];
    }
  };
  parts.finite_sum = std::move(sum);

  // Hessian = (1/n) sum s_i a_i a_i^T + I/n with s_i <= 1/4.
  double l1_sq = 0.0;
  for (const Sample& s : samples) {
    const double a1 = l1_norm(s.features);
    l1_sq += a1 * a1;
  }
  parts.constants.mu_inf = Constant{inv_n, Provenance::kAnalytic};
  parts.constants.L_inf =
      Constant{0.25 * inv_n * l1_sq + static_cast<double>(d) * inv_n, Provenance::kAnalytic};
  const Eigen::MatrixXd gram = (0.25 * inv_n) * (design->transpose() * (*design));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  parts.l2_lipschitz = eig.eigenvalues().maxCoeff() + inv_n;
  return Objective(std::move(parts));
}

SyntheticData synth_logistic_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) fail(ErrorKind::kInvalidInput, "synth_logistic_data: n and d must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  DenseVector w(d);
  const double w_scale = 2.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) w[j] = w_scale * normal(rng);

  SyntheticData out{{}, w};
  out.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DenseVector a(d);
    for (std::size_t j = 0; j < d; ++j) a[j] = normal(rng);
    const double p_pos = sigmoid(dot(a, w));
    const int label = unif(rng) < p_pos ? 1 : -1;
    out.samples.push_back(Sample{std::move(a), label});
  }
  return out;
}

void write_samples_csv(std::ostream& out, const SampleList& samples) {
  out << std::setprecision(17);
  for (const Sample& s : samples) {
    out << s.label;
    for (double v : s.features.view()) out << ',' << v;
    out << '\n';
  }
}

SampleList read_samples_csv(std::istream& in) {
  SampleList samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(line_no, "samples csv: bad number '" + cell + "' on line " +
                                      std::to_string(line_no));
      }
    }
    if (cells.size() < 2) {
      throw ParseError(line_no, "samples csv: need a label and features on line " +
                                    std::to_string(line_no));
    }
    const int label = static_cast<int>(cells.front());
    if (static_cast<double>(label) != cells.front() || (label != 1 && label != -1)) {
      throw ParseError(line_no, "samples csv: label must be -1 or +1 on line " +
                                    std::to_string(line_no));
    }
    samples.push_back(Sample{DenseVector(std::vector<double>(cells.begin() + 1, cells.end())), label});
  }
  return samples;
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

ConstantSet estimate_constants(const Objective& obj, const Box& box, std::size_t budget,
                               std::uint64_t seed, EstimateRequest request) {
  if (box.dim() != obj.dim() || box.upper.size() != box.lower.size()) {
    fail(ErrorKind::kInvalidInput, "estimate_constants: box dimension mismatch");
  }
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (!(box.lower[i] < box.upper[i])) {
      fail(ErrorKind::kInvalidInput, "estimate_constants: empty box");
    }
  }
  if (request.pl && !obj.f_star()) {
    fail(ErrorKind::kMissingData, "estimate_constants: PL estimate needs f_star");
  }

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw_point = [&] {
    DenseVector x(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unif(rng);
    }
    return x;
  };

  double l_hat = 0.0;
  double pl_hat = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < budget; ++s) {
    // Always draw the pair so the sample stream is identical for every request.
    const DenseVector x = draw_point();
    const DenseVector y = draw_point();
    const DenseVector gx = obj.gradient(x);
    if (request.lipschitz) {
      const double dx = linf_norm(x - y);
      if (dx > 0.0) l_hat = std::max(l_hat, l1_norm(gx - obj.gradient(y)) / dx);
    }
    if (request.pl) {
      const double gap = obj.value(x) - *obj.f_star();
      if (gap >= 1e-12) {
        const double g1 = l1_norm(gx);
        pl_hat = std::min(pl_hat, g1 * g1 / (2.0 * gap));
      }
    }
  }

  ConstantSet out;
  if (request.lipschitz && l_hat > 0.0) {
    if (const auto& analytic = obj.constants().L_inf;
        analytic && analytic->provenance == Provenance::kAnalytic) {
      if (l_hat > analytic->value * (1.0 + 1e-9)) {
        fail(ErrorKind::kInvalidInput, "estimate_constants: estimated L_inf exceeds analytic bound");
      }
      l_hat = std::min(l_hat, analytic->value);  // rounding only
    }
    out.L_inf = Constant{l_hat, Provenance::kEstimated};
  }
  if (request.pl && std::isfinite(pl_hat) && pl_hat > 0.0) {
    out.pl_mu = Constant{pl_hat, Provenance::kEstimated};
  }
  return out;
}

}  // namespace signopt
