// Command-line front end: train / eval / attack / verify / experiment.
//
// Exit codes: 0 success, 1 user error (bad flags, bad files, bad config),
// 2 internal error.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "robustml/experiment.hpp"
#include "robustml/oracle.hpp"

namespace rml = robustml;

namespace {

// ---- model serialization (simple text format, 17-digit round-trip) ----

void save_model(const std::string& path, const rml::ProblemSpec& spec,
                const rml::Params& params) {
  std::ofstream out(path);
  if (!out) throw rml::InvalidInputError("cannot write model file: " + path);
  out.precision(17);
  if (const auto* lin = std::get_if<rml::LinearModel>(&params)) {
    out << "linear " << lin->w.size() << "\n";
    for (Eigen::Index i = 0; i < lin->w.size(); ++i) out << lin->w[i] << "\n";
  } else if (const auto* net = std::get_if<rml::TwoLayerNet>(&params)) {
    out << "nn " << net->W.rows() << " " << net->W.cols() << " " << spec.activation.name()
        << "\n";
    for (Eigen::Index i = 0; i < net->W.rows(); ++i) {
      for (Eigen::Index j = 0; j < net->W.cols(); ++j)
        out << net->W(i, j) << (j + 1 < net->W.cols() ? " " : "\n");
    }
    for (Eigen::Index i = 0; i < net->v.size(); ++i)
      out << net->v[i] << (i + 1 < net->v.size() ? " " : "\n");
  } else {
    const auto& m = std::get<Eigen::MatrixXd>(params);
    out << "matrix " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << m(i, j) << (j + 1 < m.cols() ? " " : "\n");
    }
  }
}

rml::Params load_model(const std::string& path, const rml::ProblemSpec& spec) {
  std::ifstream in(path);
  if (!in) throw rml::InvalidInputError("cannot open model file: " + path);
  std::string kind;
  in >> kind;
  if (kind == "linear") {
    Eigen::Index d;
    in >> d;
    rml::LinearModel m;
    m.w.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) in >> m.w[i];
    if (!in) throw rml::InvalidInputError("truncated model file: " + path);
    return m;
  }
  if (kind == "nn") {
    Eigen::Index h, d;
    std::string act;
    in >> h >> d >> act;
    rml::TwoLayerNet net;
    net.activation = spec.activation;
    net.W.resize(h, d);
    net.v.resize(h);
    for (Eigen::Index i = 0; i < h; ++i)
      for (Eigen::Index j = 0; j < d; ++j) in >> net.W(i, j);
    for (Eigen::Index i = 0; i < h; ++i) in >> net.v[i];
    if (!in) throw rml::InvalidInputError("truncated model file: " + path);
    return net;
  }
  if (kind == "matrix") {
    Eigen::Index r, c;
    in >> r >> c;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) in >> m(i, j);
    if (!in) throw rml::InvalidInputError("truncated model file: " + path);
    return m;
  }
  throw rml::InvalidInputError("unknown model kind '" + kind + "' in " + path);
}

rml::Vector parse_vector(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw rml::InvalidInputError("cannot parse vector component '" + tok + "'");
    }
  }
  if (vals.empty()) throw rml::InvalidInputError("empty vector");
  return Eigen::Map<rml::Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void print_vector(const std::string& label, const rml::Vector& v) {
  std::cout << label << " = [";
  std::cout << std::setprecision(12);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i];
  std::cout << "]\n";
}

rml::TrainData load_data(const rml::RunConfig& cfg, const std::string& data_path) {
  rml::TrainData d;
  if (cfg.spec.family == rml::Family::MatrixCompletion ||
      cfg.spec.family == rml::Family::MaxMarginMC) {
    d.matrix = rml::load_sparse(data_path);
    d.matrix.validate(cfg.spec.family == rml::Family::MaxMarginMC);
  } else {
    d.dataset = rml::load_dense(data_path);
  }
  return d;
}

// ---- subcommand bodies ----

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& model_out) {
  rml::RunConfig cfg = rml::parse_config(config_path);
  rml::TrainData data = data_path.empty() ? rml::make_synthetic(cfg).train
                                          : load_data(cfg, data_path);
  rml::TrainResult res = rml::train(cfg.spec, data, cfg.train);
  save_model(model_out, cfg.spec, res.params);
  std::cout << std::setprecision(12) << "final robust loss = " << res.loss_history.back()
            << "\nmodel written to " << model_out << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& data_path,
             const std::string& model_path) {
  rml::RunConfig cfg = rml::parse_config(config_path);
  rml::Params params = load_model(model_path, cfg.spec);
  rml::TrainData data = data_path.empty() ? rml::make_synthetic(cfg).test
                                          : load_data(cfg, data_path);
  rml::MetricRecord m = rml::evaluate(cfg.spec, params, data);
  std::cout << std::setprecision(12) << m.name << " = " << m.value << " ("
            << (m.higher_is_better ? "higher" : "lower") << " is better)\n";
  return 0;
}

int cmd_attack(const std::string& config_path, const std::string& model_path,
               const std::string& x_csv, double y, const std::string& data_path) {
  rml::RunConfig cfg = rml::parse_config(config_path);
  rml::Params params = load_model(model_path, cfg.spec);
  const rml::NormBall& ball = cfg.train.ball;
  std::cout << std::setprecision(12);

  switch (cfg.spec.family) {
    case rml::Family::SquaredRegression:
    case rml::Family::Logistic:
    case rml::Family::Hinge: {
      rml::LabeledSample s{parse_vector(x_csv), y};
      const auto& lin = std::get<rml::LinearModel>(params);
      rml::AttackResult r;
      if (cfg.spec.family == rml::Family::SquaredRegression)
        r = rml::attack_squared(s, lin, ball);
      else if (cfg.spec.family == rml::Family::Logistic)
        r = rml::attack_logistic(s, lin, ball);
      else
        r = rml::attack_hinge(s, lin, ball);
      print_vector("delta", r.delta);
      std::cout << "loss = " << r.objective << "\n";
      return 0;
    }
    case rml::Family::TwoLayerNN: {
      rml::LabeledSample s{parse_vector(x_csv), y};
      const auto& net = std::get<rml::TwoLayerNet>(params);
      auto [r, trace] = rml::dca_attack(net, s, ball, cfg.train.dca_tol, cfg.train.dca_max_iter);
      print_vector("delta", r.delta);
      std::cout << "loss = " << r.objective << "\niterations = " << trace.iterations << "\n";
      return 0;
    }
    case rml::Family::GGM: {
      rml::Vector x = parse_vector(x_csv);
      rml::PrecisionMatrix omega(std::get<Eigen::MatrixXd>(params));
      if (ball.norm.tag() == rml::NormKind::Tag::L2) {
        auto [r, dual] = rml::ggm_attack_l2(x, omega, ball.radius);
        print_vector("delta", r.delta);
        std::cout << "objective = " << r.objective << "\nmu = " << dual.mu << "\n";
      } else {
        auto [r, sdp] = rml::ggm_attack_linf(x, omega, ball.radius);
        print_vector("delta", r.delta);
        std::cout << "objective = " << r.objective
                  << "\ncertified = " << (sdp.certified ? "yes" : "no") << "\n";
      }
      return 0;
    }
    case rml::Family::MatrixCompletion:
    case rml::Family::MaxMarginMC: {
      if (data_path.empty()) throw rml::InvalidInputError("matrix attack requires --data");
      rml::PartialMatrix X = rml::load_sparse(data_path);
      X.validate(cfg.spec.family == rml::Family::MaxMarginMC);
      const auto& Y = std::get<Eigen::MatrixXd>(params);
      bool fro = ball.norm.tag() == rml::NormKind::Tag::L2;
      rml::SparsePerturbation d;
      if (cfg.spec.family == rml::Family::MatrixCompletion)
        d = fro ? rml::mc_attack_fro(X, Y, ball.radius) : rml::mc_attack_linf(X, Y, ball.radius);
      else
        d = fro ? rml::maxmargin_attack_fro(X, Y, ball.radius)
                : rml::maxmargin_attack_linf(X, Y, ball.radius);
      for (const auto& e : d.entries)
        std::cout << "delta[" << e.row << "," << e.col << "] = " << e.value << "\n";
      double loss = cfg.spec.family == rml::Family::MatrixCompletion
                        ? rml::mc_squared_loss(X, Y, d)
                        : rml::maxmargin_hinge_loss(X, Y, d);
      std::cout << "loss = " << loss << "\n";
      return 0;
    }
  }
  throw rml::InvalidInputError("unknown family");
}

int cmd_verify(const std::string& config_path, const std::string& model_path,
               const std::string& x_csv, double y, long n_samples, std::uint64_t seed) {
  rml::RunConfig cfg = rml::parse_config(config_path);
  rml::Params params = load_model(model_path, cfg.spec);
  const rml::NormBall& ball = cfg.train.ball;
  rml::Vector x = parse_vector(x_csv);
  int dim = static_cast<int>(x.size());

  std::function<double(const rml::Vector&)> objective;
  double analytic = 0.0;
  switch (cfg.spec.family) {
    case rml::Family::SquaredRegression: {
      const auto& lin = std::get<rml::LinearModel>(params);
      objective = [lin, &x, y](const rml::Vector& d) { return rml::squared_loss(lin, x + d, y); };
      analytic = rml::attack_squared({x, y}, lin, ball).objective;
      break;
    }
    case rml::Family::Logistic: {
      const auto& lin = std::get<rml::LinearModel>(params);
      objective = [lin, &x, y](const rml::Vector& d) { return rml::logistic_loss(lin, x + d, y); };
      analytic = rml::attack_logistic({x, y}, lin, ball).objective;
      break;
    }
    case rml::Family::Hinge: {
      const auto& lin = std::get<rml::LinearModel>(params);
      objective = [lin, &x, y](const rml::Vector& d) { return rml::hinge_loss(lin, x + d, y); };
      analytic = rml::attack_hinge({x, y}, lin, ball).objective;
      break;
    }
    case rml::Family::TwoLayerNN: {
      const auto& net = std::get<rml::TwoLayerNet>(params);
      objective = [net, &x, y](const rml::Vector& d) { return rml::nn_log_loss(net, x + d, y); };
      analytic =
          rml::dca_attack(net, {x, y}, ball, cfg.train.dca_tol, cfg.train.dca_max_iter)
              .first.objective;
      break;
    }
    case rml::Family::GGM: {
      rml::PrecisionMatrix omega(std::get<Eigen::MatrixXd>(params));
      objective = [omega, &x](const rml::Vector& d) {
        rml::Vector z = x + d;
        return z.dot(omega.matrix() * z);
      };
      // the attack objective reports the full quadratic at x + delta
      analytic = (ball.norm.tag() == rml::NormKind::Tag::L2
                      ? rml::ggm_attack_l2(x, omega, ball.radius).first
                      : rml::ggm_attack_linf(x, omega, ball.radius).first)
                     .objective;
      break;
    }
    default:
      throw rml::InvalidInputError("verify supports vector families only");
  }

  rml::OracleReport rep =
      rml::brute_force_ball_max(objective, dim, ball, n_samples, 20, seed, analytic);
  std::cout << std::setprecision(12) << "analytic = " << rep.analytic_value
            << "\nbrute force = " << rep.best_value << "\ngap = " << rep.gap << " (samples "
            << rep.samples_used << ")\n";
  if (rep.gap < -1e-6) {
    std::cout << "VERIFY FAILED: brute force beat the analytic attack\n";
    return 2;
  }
  std::cout << "VERIFY OK\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path) {
  rml::RunConfig cfg = rml::parse_config(config_path);
  rml::SyntheticSplit split = rml::make_synthetic(cfg);
  rml::ExperimentReport rep = rml::run_experiment(cfg, split);
  {
    std::ofstream out(out_path);
    if (!out) throw rml::InvalidInputError("cannot write report: " + out_path);
    rml::write_report_csv(rep, out);
  }
  rml::write_report_summary(rep, std::cout);
  std::cout << "report written to " << out_path << "\n";
  return rep.complete ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarially robust training toolkit"};
  app.require_subcommand(1);

  std::string config_path, data_path, model_path, out_path = "report.csv", x_csv;
  double y = 1.0;
  long n_samples = 100000;
  std::uint64_t seed = 0;

  auto* train = app.add_subcommand("train", "Train a model with worst-case perturbations");
  train->add_option("--config", config_path, "key=value config file")->required();
  train->add_option("--data", data_path, "training data (CSV or triplet); synthetic if omitted");
  train->add_option("--out", model_path, "output model file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a trained model");
  eval->add_option("--config", config_path)->required();
  eval->add_option("--data", data_path, "test data; shifted synthetic test split if omitted");
  eval->add_option("--model", model_path)->required();

  auto* attack = app.add_subcommand("attack", "Print the worst-case perturbation of one sample");
  attack->add_option("--config", config_path)->required();
  attack->add_option("--model", model_path)->required();
  attack->add_option("--x", x_csv, "comma-separated feature vector (vector families)");
  attack->add_option("--y", y, "label");
  attack->add_option("--data", data_path, "observed triplets (matrix families)");

  auto* verify = app.add_subcommand("verify", "Check an analytic attack against brute force");
  verify->add_option("--config", config_path)->required();
  verify->add_option("--model", model_path)->required();
  verify->add_option("--x", x_csv)->required();
  verify->add_option("--y", y);
  verify->add_option("--samples", n_samples, "brute-force sample count");
  verify->add_option("--seed", seed, "brute-force RNG seed");

  auto* experiment = app.add_subcommand("experiment", "Three-way mode comparison on synthetic data");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--out", out_path, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, data_path, model_path);
    if (eval->parsed()) return cmd_eval(config_path, data_path, model_path);
    if (attack->parsed()) return cmd_attack(config_path, model_path, x_csv, y, data_path);
    if (verify->parsed()) return cmd_verify(config_path, model_path, x_csv, y, n_samples, seed);
    if (experiment->parsed()) return cmd_experiment(config_path, out_path);
  } catch (const rml::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
