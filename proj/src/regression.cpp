#include "huemodel/regression.hpp"

#include "huemodel/error.hpp"

#include <Eigen/QR>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace huemodel {
namespace {

double two_sided_t_p(double t, int dof) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double noise_floor(const Dataset& d) {
  const double scale = d.target.cwiseAbs().maxCoeff();
  const double e = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return static_cast<double>(d.rows()) * e * e;
}

} // namespace

void Dataset::validate() const {
  if (target.size() != predictors.rows())
    throw ArgumentError("dataset target length does not match predictor rows");
  if (predictors.cols() < 1 || predictors.rows() <= predictors.cols())
    throw ArgumentError(fmt::format("dataset needs n > k >= 1 (n={}, k={})", predictors.rows(),
                                    predictors.cols()));
  if (!predictors.allFinite() || !target.allFinite())
    throw ArgumentError("dataset has non-finite entries");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != predictors.cols())
    throw ArgumentError("dataset names do not match predictor count");
}

OlsFit fit_ols(const Dataset& d, std::span<const int> subset) {
  const Eigen::Index n = d.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(subset.size()) + 1;
  if (d.target.size() != n) throw ArgumentError("dataset target length does not match predictor rows");
  for (int j : subset)
    if (j < 0 || j >= d.cols()) throw ArgumentError(fmt::format("predictor index {} out of range", j));
  if (n <= p) throw ArgumentError("not enough rows for the requested fit");

  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (Eigen::Index i = 1; i < p; ++i) x.col(i) = d.predictors.col(subset[i - 1]);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string names;
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < p; ++i) {
      const Eigen::Index col = perm(i);
      std::string name = "intercept";
      if (col > 0) {
        const int j = subset[col - 1];
        name = j < static_cast<int>(d.names.size()) ? d.names[j] : fmt::format("x{}", j);
      }
      names += (names.empty() ? "" : ", ") + name;
    }
    throw SingularFitError(fmt::format("singular fit: collinear predictors {}", names));
  }

  const Eigen::VectorXd beta = qr.solve(d.target);
  OlsFit fit;
  fit.subset.assign(subset.begin(), subset.end());
  fit.intercept = beta(0);
  fit.coefficients = beta.tail(p - 1);
  fit.residuals = d.target - x * beta;
  fit.rss = fit.residuals.squaredNorm();
  fit.rms = std::sqrt(fit.rss / static_cast<double>(n));
  fit.dof = static_cast<int>(n - p);

  // (X^T X)^-1 = P R^-1 R^-T P^T
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd cov_perm = rinv * rinv.transpose();
  const auto perm = qr.colsPermutation();
  const Eigen::MatrixXd cov = perm * cov_perm * perm.transpose();

  const double sigma2 = fit.rss / fit.dof;
  auto p_value = [&](Eigen::Index i) {
    const double se = std::sqrt(sigma2 * cov(i, i));
    if (se == 0.0) return beta(i) == 0.0 ? 1.0 : 0.0;
    return two_sided_t_p(beta(i) / se, fit.dof);
  };
  fit.intercept_p_value = p_value(0);
  fit.p_values.resize(p - 1);
  for (Eigen::Index i = 1; i < p; ++i) fit.p_values(i - 1) = p_value(i);
  return fit;
}

StepwiseModel stepwise_fit(const Dataset& d, const StepwiseOptions& options) {
  d.validate();
  const int k = static_cast<int>(d.cols());
  const double floor = noise_floor(d);
  const int max_steps = 2 * k * (k + 1);

  std::vector<int> selected;
  std::vector<StepwiseStep> trace;
  std::set<std::vector<int>> visited{selected};

  auto with = [](std::vector<int> s, int j) {
    s.insert(std::upper_bound(s.begin(), s.end(), j), j);
    return s;
  };

  OlsFit current = fit_ols(d, selected);
  bool cycled = false;
  while (static_cast<int>(trace.size()) < max_steps && !cycled) {
    bool changed = false;

    // forward entry
    if (current.rss > floor) {
      int best = -1;
      double best_p = 1.0;
      for (int j = 0; j < k; ++j) {
        if (std::binary_search(selected.begin(), selected.end(), j)) continue;
        const auto trial_set = with(selected, j);
        OlsFit trial;
        try {
          trial = fit_ols(d, trial_set);
        } catch (const SingularFitError&) {
          continue;
        }
        const auto pos = std::lower_bound(trial_set.begin(), trial_set.end(), j) - trial_set.begin();
        const double pj = trial.p_values(pos);
        if (pj < options.p_enter && (best < 0 || pj < best_p)) {
          best = j;
          best_p = pj;
        }
      }
      if (best >= 0) {
        selected = with(selected, best);
        trace.push_back({StepwiseStep::Action::Add, best, best_p});
        current = fit_ols(d, selected);
        changed = true;
        if (!visited.insert(selected).second) cycled = true;
      }
    }

    // backward removal
    while (!cycled && !selected.empty() && static_cast<int>(trace.size()) < max_steps) {
      Eigen::Index worst = 0;
      current.p_values.maxCoeff(&worst);  // first maximum -> lowest index on ties
      const double pw = current.p_values(worst);
      if (!(pw > options.p_remove)) break;
      const int j = selected[worst];
      selected.erase(selected.begin() + worst);
      trace.push_back({StepwiseStep::Action::Remove, j, pw});
      current = fit_ols(d, selected);
      changed = true;
      if (!visited.insert(selected).second) cycled = true;
    }

    if (!changed) break;
  }

  StepwiseModel m;
  m.selected = selected;
  m.coefficients = current.coefficients;
  m.intercept = current.intercept;
  m.rms = current.rms;
  m.p_values.assign(current.p_values.data(), current.p_values.data() + current.p_values.size());
  m.trace = std::move(trace);
  m.predictor_count = k;
  m.names = d.names;
  return m;
}

double predict(const StepwiseModel& m, std::span<const double> responses) {
  if (static_cast<int>(responses.size()) != m.predictor_count)
    throw ArgumentError(fmt::format("predict expects {} responses, got {}", m.predictor_count,
                                    responses.size()));
  double y = m.intercept;
  for (std::size_t i = 0; i < m.selected.size(); ++i) y += m.coefficients(i) * responses[m.selected[i]];
  return y;
}

void write_dataset_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    out << (j < static_cast<Eigen::Index>(d.names.size()) ? d.names[j] : fmt::format("x{}", j)) << ',';
  out << "hue_rad\n";
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) out << fmt::format("{:.17g},", d.predictors(i, j));
    out << fmt::format("{:.17g}\n", d.target(i));
  }
  if (!out) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("'{}' is empty", path.string()));
  auto header = split(line);
  if (header.size() < 2 || header.back() != "hue_rad")
    throw InputError(fmt::format("'{}': last header column must be hue_rad", path.string()));
  header.pop_back();

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size() + 1)
      throw InputError(fmt::format("'{}': row {} has {} cells", path.string(), rows.size() + 1, cells.size()));
    std::vector<double> row;
    try {
      for (const auto& c : cells) row.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw InputError(fmt::format("'{}': non-numeric cell in row {}", path.string(), rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  Dataset d;
  d.names = header;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(header.size());
  d.predictors.resize(n, k);
  d.target.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) d.predictors(i, j) = rows[i][j];
    d.target(i) = rows[i][k];
  }
  return d;
}

} // namespace huemodel
