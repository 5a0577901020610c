#include "launchopt/nlsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace launchopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

class Hybrid {
 public:
  Hybrid(const ResidualMap& f, const SolveOptions& opts, int n)
      : f_(f), opts_(opts), n_(n), max_eval_(opts.max_eval > 0 ? opts.max_eval : 200 * n) {}

  SolveReport run(const Eigen::VectorXd& x0) {
    report_.solution = x0;
    x_ = x0;
    fx_ = eval(x_);
    if (!fx_.allFinite()) return finish(SolveStatus::NonFinite);
    if (max_norm(fx_) <= opts_.tol) return finish(SolveStatus::Converged);

    if (!refresh_jacobian()) return finish(SolveStatus::NonFinite);
    radius_ = opts_.initial_radius_factor * (diag_.cwiseProduct(x_)).norm();
    if (radius_ == 0.0) radius_ = opts_.initial_radius_factor;

    int consecutive_shrinks = 0;
    int successes = 0;
    int slow = 0;
    int refresh_stalls = 0;
    double norm_at_refresh = fx_.norm();

    while (true) {
      ++report_.iterations;
      IterationRecord rec;
      rec.iteration = report_.iterations;
      rec.trust_radius = radius_;

      const Eigen::VectorXd p = dogleg();
      const double pnorm = diag_.cwiseProduct(p).norm();
      rec.step_norm = pnorm;
      if (report_.iterations == 1) radius_ = std::min(radius_, pnorm);

      const Eigen::VectorXd xt = x_ + p;
      const Eigen::VectorXd ft = eval(xt);
      const double fnorm = fx_.norm();

      bool shrink = false;
      if (!ft.allFinite()) {
        radius_ *= 0.25;
        shrink = true;
        successes = 0;
        rec.ratio = -kInf;
      } else {
        const double ftnorm = ft.norm();
        const double actred = ftnorm < fnorm ? 1.0 - (ftnorm / fnorm) * (ftnorm / fnorm) : -1.0;
        const double lin = (fx_ + jac_ * p).norm();
        const double prered = lin < fnorm ? 1.0 - (lin / fnorm) * (lin / fnorm) : 0.0;
        const double ratio = prered > 0.0 ? actred / prered : 0.0;
        rec.ratio = ratio;

        if (ratio < 0.1) {
          successes = 0;
          radius_ *= 0.5;
          shrink = true;
        } else {
          ++successes;
          if (ratio >= 0.5 || successes > 1) radius_ = std::max(radius_, pnorm / 0.5);
          if (std::abs(ratio - 1.0) <= 0.1) radius_ = pnorm / 0.5;
        }

        const Eigen::VectorXd df = ft - fx_;
        if (ratio >= 1e-4) {
          x_ = xt;
          fx_ = ft;
          rec.accepted = true;
        }
        slow = actred >= 0.001 ? 0 : slow + 1;

        if (opts_.broyden || !rec.accepted) {
          const double pp = p.squaredNorm();
          if (pp > 0.0) {
            jac_ += ((df - jac_ * p) * p.transpose()) / pp;
            rec.broyden_update = true;
            rec.secant_error = (jac_ * p - df).norm() / std::max(1.0, df.norm());
          }
        }
      }
      consecutive_shrinks = shrink ? consecutive_shrinks + 1 : 0;
      rec.residual_norm = max_norm(fx_);

      if (rec.residual_norm <= opts_.tol) return log_and_finish(rec, SolveStatus::Converged);
      if (report_.evaluations >= max_eval_) return log_and_finish(rec, SolveStatus::MaxIter);
      if (slow >= 10) return log_and_finish(rec, SolveStatus::Stalled);
      if (radius_ <= 1e-15 * std::max(1.0, diag_.cwiseProduct(x_).norm())) {
        return log_and_finish(rec, SolveStatus::Stalled);
      }

      const bool refresh = consecutive_shrinks >= 2 || (!opts_.broyden && rec.accepted);
      if (refresh) {
        const double now = fx_.norm();
        refresh_stalls = now > 0.9 * norm_at_refresh ? refresh_stalls + 1 : 0;
        norm_at_refresh = now;
        if (refresh_stalls >= 5) return log_and_finish(rec, SolveStatus::Stalled);
        if (report_.evaluations + n_ > max_eval_) return log_and_finish(rec, SolveStatus::MaxIter);
        if (!refresh_jacobian()) return log_and_finish(rec, SolveStatus::NonFinite);
        consecutive_shrinks = 0;
        rec.jacobian_refreshed = true;
      }
      if (opts_.keep_log) report_.log.push_back(rec);
    }
  }

 private:
  Eigen::VectorXd eval(const Eigen::VectorXd& x) {
    ++report_.evaluations;
    return f_(x);
  }

  bool refresh_jacobian() {
    ++report_.jacobian_evaluations;
    jac_.resize(fx_.size(), n_);
    for (int j = 0; j < n_; ++j) {
      double h = std::max(1e-8, 1e-8 * std::abs(x_[j]));
      Eigen::VectorXd xp = x_;
      xp[j] += h;
      Eigen::VectorXd fp = eval(xp);
      if (!fp.allFinite()) {
        h = -h;
        xp[j] = x_[j] + h;
        fp = eval(xp);
        if (!fp.allFinite()) return false;
      }
      jac_.col(j) = (fp - fx_) / h;
    }
    if (diag_.size() == 0) diag_ = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      double c = jac_.col(j).norm();
      if (c == 0.0) c = 1.0;
      diag_[j] = std::max(diag_[j], c);
    }
    return true;
  }

  // Dogleg in the scaled variables y = D x.
  Eigen::VectorXd dogleg() const {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac_);
    Eigen::VectorXd newton = -qr.solve(fx_);
    if (!newton.allFinite()) newton.setZero();
    const Eigen::VectorXd s_newton = diag_.cwiseProduct(newton);
    if (s_newton.norm() <= radius_ && qr.rank() == n_) return newton;

    const Eigen::VectorXd gy = (jac_.transpose() * fx_).cwiseQuotient(diag_);
    const double gnorm = gy.norm();
    if (gnorm == 0.0) {
      return s_newton.norm() <= radius_ ? newton
                                        : Eigen::VectorXd(newton * (radius_ / s_newton.norm()));
    }
    const Eigen::VectorXd jg = jac_ * gy.cwiseQuotient(diag_);
    const double jgn2 = jg.squaredNorm();
    const double alpha = jgn2 > 0.0 ? gnorm * gnorm / jgn2 : kInf;
    const Eigen::VectorXd s_cauchy = -alpha * gy;
    if (!(s_cauchy.norm() < radius_)) {
      return (-radius_ / gnorm * gy).cwiseQuotient(diag_);
    }
    // Point on the segment s_cauchy -> s_newton at distance radius.
    const Eigen::VectorXd d = s_newton - s_cauchy;
    const double a = d.squaredNorm();
    const double b = 2.0 * s_cauchy.dot(d);
    const double c = s_cauchy.squaredNorm() - radius_ * radius_;
    const double tau = a > 0.0 ? (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a) : 0.0;
    return (s_cauchy + std::clamp(tau, 0.0, 1.0) * d).cwiseQuotient(diag_);
  }

  SolveReport log_and_finish(IterationRecord& rec, SolveStatus status) {
    if (opts_.keep_log) report_.log.push_back(rec);
    return finish(status);
  }

  SolveReport finish(SolveStatus status) {
    report_.status = status;
    report_.solution = x_;
    report_.residual = fx_;
    report_.residual_norm = fx_.allFinite() ? max_norm(fx_) : kInf;
    if (jac_.size() > 0) report_.condition = condition_estimate(jac_).value;
    return report_;
  }

  const ResidualMap& f_;
  const SolveOptions& opts_;
  const int n_;
  const int max_eval_;
  SolveReport report_;
  Eigen::VectorXd x_, fx_, diag_;
  Eigen::MatrixXd jac_;
  double radius_ = 0.0;
};

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Stalled: return "Stalled";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

SolveReport solve(const ResidualMap& f, const Eigen::VectorXd& x0, const SolveOptions& opts) {
  Hybrid h(f, opts, static_cast<int>(x0.size()));
  return h.run(x0);
}

ConditionEstimate condition_estimate(const Eigen::MatrixXd& j) {
  ConditionEstimate out;
  if (!j.allFinite()) {
    out.value = kInf;
    out.singular = true;
    return out;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
  if (!lu.isInvertible()) {
    out.value = kInf;
    out.singular = true;
    return out;
  }
  const Eigen::MatrixXd inv = lu.inverse();
  auto norm1 = [](const Eigen::MatrixXd& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
  out.value = norm1(j) * norm1(inv);
  out.singular = !(out.value <= 1e15);
  return out;
}

}  // namespace launchopt
