#include "robustml/trainer.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "robustml/oracle.hpp"

namespace robustml {

const char* family_name(Family f) {
  switch (f) {
    case Family::SquaredRegression: return "squared";
    case Family::Logistic: return "logistic";
    case Family::Hinge: return "hinge";
    case Family::TwoLayerNN: return "two_layer_nn";
    case Family::GGM: return "ggm";
    case Family::MatrixCompletion: return "matrix_completion";
    case Family::MaxMarginMC: return "maxmargin_mc";
  }
  return "?";
}

const char* mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::NoError: return "no_error";
    case TrainMode::Random: return "random";
    case TrainMode::Proposed: return "proposed";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::SquaredRegression, Family::Logistic, Family::Hinge,
                   Family::TwoLayerNN, Family::GGM, Family::MatrixCompletion,
                   Family::MaxMarginMC}) {
    if (s == family_name(f)) return f;
  }
  throw InvalidInputError("unknown family: " + s);
}

TrainMode mode_from_string(const std::string& s) {
  for (TrainMode m : {TrainMode::NoError, TrainMode::Random, TrainMode::Proposed}) {
    if (s == mode_name(m)) return m;
  }
  throw InvalidInputError("unknown mode: " + s);
}

void TrainConfig::validate() const {
  if (iterations < 1) throw InvalidInputError("iterations must be >= 1");
  if (!(eta > 0.0)) throw InvalidInputError("eta must be > 0");
  if (!(reg_c >= 0.0)) throw InvalidInputError("reg_c must be >= 0");
}

void ProblemSpec::validate_ball(const NormBall& ball) const {
  switch (family) {
    case Family::GGM:
      if (ball.norm.tag() != NormKind::Tag::L2 && ball.norm.tag() != NormKind::Tag::Linf) {
        throw InvalidInputError("ggm supports l2 or linf balls only");
      }
      break;
    case Family::MatrixCompletion:
    case Family::MaxMarginMC:
      // l2 on the observed entries is the Frobenius ball; linf is entry-wise
      if (ball.norm.tag() != NormKind::Tag::L2 && ball.norm.tag() != NormKind::Tag::Linf) {
        throw InvalidInputError("matrix families support frobenius (l2) or entry-wise linf only");
      }
      break;
    case Family::TwoLayerNN:
      if (ball.norm.tag() == NormKind::Tag::Lp) {
        throw InvalidInputError("two-layer attack supports l1/l2/linf balls");
      }
      break;
    default:
      break;
  }
}

Vector perturb(const ProblemSpec& spec, const Params& params, const LabeledSample& sample,
               const TrainConfig& config, std::mt19937_64& rng) {
  switch (config.mode) {
    case TrainMode::NoError:
      return Vector::Zero(sample.x.size());
    case TrainMode::Random:
      if (config.ball.radius == 0.0) return Vector::Zero(sample.x.size());
      return sample_ball_surface(static_cast<int>(sample.x.size()), config.ball, rng);
    case TrainMode::Proposed:
      break;
  }
  switch (spec.family) {
    case Family::SquaredRegression:
      return attack_squared(sample, std::get<LinearModel>(params), config.ball).delta;
    case Family::Logistic:
      return attack_logistic(sample, std::get<LinearModel>(params), config.ball).delta;
    case Family::Hinge:
      return attack_hinge(sample, std::get<LinearModel>(params), config.ball).delta;
    case Family::TwoLayerNN:
      return dca_attack(std::get<TwoLayerNet>(params), sample, config.ball, config.dca_tol,
                        config.dca_max_iter)
          .first.delta;
    case Family::GGM: {
      const Eigen::MatrixXd& om = std::get<Eigen::MatrixXd>(params);
      PrecisionMatrix pm(om);
      if (config.ball.norm.tag() == NormKind::Tag::L2) {
        return ggm_attack_l2(sample.x, pm, config.ball.radius).first.delta;
      }
      return ggm_attack_linf(sample.x, pm, config.ball.radius).first.delta;
    }
    default:
      throw InvalidInputError("matrix families use perturb_matrix");
  }
}

SparsePerturbation perturb_matrix(const ProblemSpec& spec, const Params& params,
                                  const PartialMatrix& X, const TrainConfig& config,
                                  std::mt19937_64& rng) {
  const Eigen::MatrixXd& Y = std::get<Eigen::MatrixXd>(params);
  SparsePerturbation out;
  switch (config.mode) {
    case TrainMode::NoError:
      for (const auto& e : X.observed) out.entries.push_back({e.row, e.col, 0.0});
      return out;
    case TrainMode::Random: {
      int n = static_cast<int>(X.observed.size());
      if (n == 0 || config.ball.radius == 0.0) {
        for (const auto& e : X.observed) out.entries.push_back({e.row, e.col, 0.0});
        return out;
      }
      Vector v = sample_ball_surface(n, config.ball, rng);
      for (int i = 0; i < n; ++i) {
        out.entries.push_back({X.observed[i].row, X.observed[i].col, v[i]});
      }
      return out;
    }
    case TrainMode::Proposed:
      break;
  }
  bool frobenius = config.ball.norm.tag() == NormKind::Tag::L2;
  if (spec.family == Family::MatrixCompletion) {
    return frobenius ? mc_attack_fro(X, Y, config.ball.radius)
                     : mc_attack_linf(X, Y, config.ball.radius);
  }
  if (spec.family == Family::MaxMarginMC) {
    return frobenius ? maxmargin_attack_fro(X, Y, config.ball.radius)
                     : maxmargin_attack_linf(X, Y, config.ball.radius);
  }
  throw InvalidInputError("perturb_matrix is for matrix families");
}

namespace {

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double log1pexp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sign0(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

double loss_and_grad(const ProblemSpec& spec, const Params& params,
                     const LabeledSample& s, double reg_c, Gradient& grad) {
  switch (spec.family) {
    case Family::SquaredRegression: {
      const Vector& w = std::get<LinearModel>(params).w;
      double r = w.dot(s.x) - s.y;
      grad.w = 2.0 * r * s.x;
      return r * r;
    }
    case Family::Logistic: {
      const Vector& w = std::get<LinearModel>(params).w;
      double t = -s.y * w.dot(s.x);
      grad.w = -s.y * sigmoid(t) * s.x;
      return log1pexp(t);
    }
    case Family::Hinge: {
      const Vector& w = std::get<LinearModel>(params).w;
      double margin = s.y * w.dot(s.x);
      // subgradient 0 at the kink
      grad.w = margin < 1.0 ? Vector(-s.y * s.x) : Vector(Vector::Zero(s.x.size()));
      return std::max(0.0, 1.0 - margin);
    }
    case Family::TwoLayerNN: {
      const TwoLayerNet& net = std::get<TwoLayerNet>(params);
      DcPair dc = dc_decompose(net.activation);
      Vector z = net.W * s.x;
      Vector act(z.size()), dact(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        act[i] = dc.sigma.value(z[i]);
        dact[i] = dc.sigma.subgrad(z[i]);
      }
      double out = net.v.dot(act);
      double t = -s.y * out;
      double dl_dout = -s.y * sigmoid(t);
      grad.v = dl_dout * act;
      grad.W = (dl_dout * net.v.cwiseProduct(dact)) * s.x.transpose();
      return log1pexp(t);
    }
    case Family::GGM: {
      const Eigen::MatrixXd& om = std::get<Eigen::MatrixXd>(params);
      Eigen::LLT<Eigen::MatrixXd> llt(om);
      if (llt.info() != Eigen::Success) {
        throw std::runtime_error("ggm step rejected: precision matrix not PD");
      }
      Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(om.rows(), om.cols()));
      double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      grad.m = -inv + s.x * s.x.transpose() + reg_c * om.unaryExpr([](double t) { return sign0(t); });
      return -logdet + s.x.dot(om * s.x) + reg_c * om.cwiseAbs().sum();
    }
    default:
      throw InvalidInputError("matrix families use loss_and_grad_matrix");
  }
}

double loss_and_grad_matrix(const ProblemSpec& spec, const Params& params,
                            const PartialMatrix& Xp, double /*reg_c*/, Gradient& grad) {
  const Eigen::MatrixXd& Y = std::get<Eigen::MatrixXd>(params);
  grad.m = Eigen::MatrixXd::Zero(Y.rows(), Y.cols());
  double loss = 0.0;
  if (spec.family == Family::MatrixCompletion) {
    for (const auto& e : Xp.observed) {
      double r = e.value - Y(e.row, e.col);
      loss += r * r;
      grad.m(e.row, e.col) = -2.0 * r;
    }
  } else if (spec.family == Family::MaxMarginMC) {
    for (const auto& e : Xp.observed) {
      double m = 1.0 - e.value * Y(e.row, e.col);
      if (m > 0.0) {
        loss += m;
        grad.m(e.row, e.col) = -e.value;
      }
    }
  } else {
    throw InvalidInputError("loss_and_grad_matrix is for matrix families");
  }
  return loss;
}

Matrix svt_prox(const Matrix& Y, double tau) {
  if (!(tau >= 0.0)) throw InvalidInputError("svt_prox requires tau >= 0");
  if (tau == 0.0) return Y;
  Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

namespace {

Params initial_params(const ProblemSpec& spec, const TrainData& data, std::uint64_t seed) {
  switch (spec.family) {
    case Family::SquaredRegression:
    case Family::Logistic:
    case Family::Hinge: {
      Eigen::Index d = data.dataset.samples.empty() ? 0 : data.dataset.samples[0].x.size();
      return LinearModel{Vector::Zero(d)};
    }
    case Family::TwoLayerNN: {
      Eigen::Index d = data.dataset.samples.empty() ? 0 : data.dataset.samples[0].x.size();
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
      std::normal_distribution<double> gauss(0.0, 0.5);
      TwoLayerNet net;
      net.activation = spec.activation;
      net.W = Matrix::NullaryExpr(spec.hidden, d, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
      net.v = Vector::NullaryExpr(spec.hidden, [&](Eigen::Index) { return gauss(rng); });
      return net;
    }
    case Family::GGM: {
      Eigen::Index p = data.dataset.samples.empty() ? 0 : data.dataset.samples[0].x.size();
      return Eigen::MatrixXd(Eigen::MatrixXd::Identity(p, p));
    }
    case Family::MatrixCompletion:
    case Family::MaxMarginMC:
      return Eigen::MatrixXd(Eigen::MatrixXd::Zero(data.matrix.rows, data.matrix.cols));
  }
  throw InvalidInputError("unknown family");
}

Eigen::MatrixXd project_pd(const Eigen::MatrixXd& S, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TrainResult train(const ProblemSpec& spec, const TrainData& data, const TrainConfig& config) {
  config.validate();
  spec.validate_ball(config.ball);

  TrainResult result;
  result.params = initial_params(spec, data, config.seed);
  std::mt19937_64 rng(config.seed + 1);  // Random-mode draws only

  bool matrix_family =
      spec.family == Family::MatrixCompletion || spec.family == Family::MaxMarginMC;
  if (!matrix_family && data.dataset.samples.empty()) {
    throw InvalidInputError("empty training set");
  }

  for (int j = 0; j < config.iterations; ++j) {
    double robust_loss = 0.0;
    if (!matrix_family) {
      const auto& samples = data.dataset.samples;
      Gradient total;
      Gradient g;
      for (const LabeledSample& s : samples) {
        LabeledSample attacked{s.x + perturb(spec, result.params, s, config, rng), s.y};
        robust_loss += loss_and_grad(spec, result.params, attacked, config.reg_c, g);
        if (g.w.size() > 0) total.w = total.w.size() ? Vector(total.w + g.w) : g.w;
        if (g.W.size() > 0) total.W = total.W.size() ? Matrix(total.W + g.W) : g.W;
        if (g.v.size() > 0) total.v = total.v.size() ? Vector(total.v + g.v) : g.v;
        if (g.m.size() > 0) total.m = total.m.size() ? Matrix(total.m + g.m) : g.m;
      }
      double n = static_cast<double>(samples.size());
      robust_loss /= n;
      double step = config.eta / n;
      if (auto* lin = std::get_if<LinearModel>(&result.params)) {
        lin->w -= step * total.w;
      } else if (auto* net = std::get_if<TwoLayerNet>(&result.params)) {
        net->W -= step * total.W;
        net->v -= step * total.v;
      } else {
        auto& om = std::get<Eigen::MatrixXd>(result.params);
        om -= step * total.m;
        om = project_pd(om, 1e-8);
      }
    } else {
      SparsePerturbation delta = perturb_matrix(spec, result.params, data.matrix, config, rng);
      PartialMatrix attacked = data.matrix;
      for (size_t i = 0; i < attacked.observed.size(); ++i) {
        attacked.observed[i].value += delta.entries[i].value;
      }
      Gradient g;
      robust_loss = loss_and_grad_matrix(spec, result.params, attacked, config.reg_c, g);
      auto& Y = std::get<Eigen::MatrixXd>(result.params);
      Y -= config.eta * g.m;
      if (config.reg_c > 0.0) Y = svt_prox(Y, config.eta * config.reg_c);
    }
    result.loss_history.push_back(robust_loss);
    if (!std::isfinite(robust_loss) || robust_loss > 1e12) {
      throw std::runtime_error("training diverged at iteration " + std::to_string(j + 1));
    }
  }
  return result;
}

MetricRecord evaluate(const ProblemSpec& spec, const Params& params, const TrainData& testset) {
  MetricRecord rec;
  switch (spec.family) {
    case Family::SquaredRegression: {
      const Vector& w = std::get<LinearModel>(params).w;
      double s = 0.0;
      for (const auto& smp : testset.dataset.samples) {
        double r = w.dot(smp.x) - smp.y;
        s += r * r;
      }
      rec = {"mse", s / std::max<size_t>(1, testset.dataset.samples.size()), false};
      break;
    }
    case Family::Logistic:
    case Family::Hinge: {
      const Vector& w = std::get<LinearModel>(params).w;
      double correct = 0.0;
      for (const auto& smp : testset.dataset.samples) {
        double pred = w.dot(smp.x) >= 0.0 ? 1.0 : -1.0;
        if (pred == smp.y) correct += 1.0;
      }
      rec = {"accuracy", correct / std::max<size_t>(1, testset.dataset.samples.size()), true};
      break;
    }
    case Family::TwoLayerNN: {
      const TwoLayerNet& net = std::get<TwoLayerNet>(params);
      DcPair dc = dc_decompose(net.activation);
      double correct = 0.0;
      for (const auto& smp : testset.dataset.samples) {
        Vector z = net.W * smp.x;
        double out = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) out += net.v[i] * dc.sigma.value(z[i]);
        double pred = out >= 0.0 ? 1.0 : -1.0;
        if (pred == smp.y) correct += 1.0;
      }
      rec = {"accuracy", correct / std::max<size_t>(1, testset.dataset.samples.size()), true};
      break;
    }
    case Family::GGM: {
      const Eigen::MatrixXd& om = std::get<Eigen::MatrixXd>(params);
      Eigen::LLT<Eigen::MatrixXd> llt(om);
      double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      double quad = 0.0;
      for (const auto& smp : testset.dataset.samples) quad += smp.x.dot(om * smp.x);
      quad /= std::max<size_t>(1, testset.dataset.samples.size());
      rec = {"loglik", logdet - quad, true};
      break;
    }
    case Family::MatrixCompletion: {
      const Eigen::MatrixXd& Y = std::get<Eigen::MatrixXd>(params);
      double s = 0.0;
      for (const auto& e : testset.matrix.observed) {
        double r = e.value - Y(e.row, e.col);
        s += r * r;
      }
      rec = {"mse", s / std::max<size_t>(1, testset.matrix.observed.size()), false};
      break;
    }
    case Family::MaxMarginMC: {
      const Eigen::MatrixXd& Y = std::get<Eigen::MatrixXd>(params);
      double correct = 0.0;
      for (const auto& e : testset.matrix.observed) {
        double pred = Y(e.row, e.col) >= 0.0 ? 1.0 : -1.0;
        if (pred == e.value) correct += 1.0;
      }
      rec = {"accuracy", correct / std::max<size_t>(1, testset.matrix.observed.size()), true};
      break;
    }
  }
  return rec;
}

}  // namespace robustml
