#include "robustml/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace robustml {

namespace {

double parse_real(const std::string& tok, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    if (!std::isfinite(v)) throw InvalidInputError(where + ": non-finite value '" + tok + "'");
    return v;
  } catch (const InvalidInputError&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInputError(where + ": cannot parse '" + tok + "'");
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Dataset load_dense(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path);
  Dataset data;
  std::string line;
  int lineno = 0;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (has_header && lineno == 1) continue;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      vals.push_back(parse_real(trim(tok), path + ":" + std::to_string(lineno)));
    }
    if (vals.size() < 2) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) +
                              ": need at least one feature and a label");
    }
    Eigen::Index d = static_cast<Eigen::Index>(vals.size()) - 1;
    if (dim < 0) dim = d;
    if (d != dim) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": inconsistent dimension");
    }
    LabeledSample s;
    s.x = Eigen::Map<Vector>(vals.data(), d);
    s.y = vals.back();
    data.samples.push_back(std::move(s));
  }
  if (data.samples.empty()) throw InvalidInputError("empty dataset: " + path);
  return data;
}

void save_dense(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write file: " + path);
  out.precision(17);
  for (const auto& s : data.samples) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) out << s.x[i] << ",";
    out << s.y << "\n";
  }
}

PartialMatrix load_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path);
  PartialMatrix m;
  std::set<std::pair<int, int>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    long r, c;
    double v;
    if (!(ss >> r >> c >> v) || !std::isfinite(v)) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": bad triplet line");
    }
    if (r < 0 || c < 0) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": negative index");
    }
    if (!seen.insert({static_cast<int>(r), static_cast<int>(c)}).second) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": duplicate entry");
    }
    m.observed.push_back({static_cast<int>(r), static_cast<int>(c), v});
    m.rows = std::max(m.rows, static_cast<int>(r) + 1);
    m.cols = std::max(m.cols, static_cast<int>(c) + 1);
  }
  return m;
}

void save_sparse(const std::string& path, const PartialMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write file: " + path);
  out.precision(17);
  // deterministic row-major order
  std::vector<PartialMatrix::Entry> sorted = m.observed;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  for (const auto& e : sorted) out << e.row << " " << e.col << " " << e.value << "\n";
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  // defaults
  cfg.train.iterations = 100;
  cfg.train.eta = 0.1;
  double epsilon = 0.1;
  NormKind norm = NormKind::l2();
  cfg.train.mode = TrainMode::Proposed;
  bool seed_given = false;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "family") {
      cfg.spec.family = family_from_string(val);
    } else if (key == "norm") {
      if (val == "l1") norm = NormKind::l1();
      else if (val == "l2" || val == "frobenius") norm = NormKind::l2();
      else if (val == "linf") norm = NormKind::linf();
      else if (val.rfind("lp:", 0) == 0) norm = NormKind::lp(parse_real(val.substr(3), "norm"));
      else throw InvalidInputError("unknown norm: " + val);
    } else if (key == "epsilon") {
      epsilon = parse_real(val, "epsilon");
    } else if (key == "eta") {
      cfg.train.eta = parse_real(val, "eta");
    } else if (key == "T") {
      cfg.train.iterations = static_cast<int>(parse_real(val, "T"));
    } else if (key == "mode") {
      cfg.train.mode = mode_from_string(val);
    } else if (key == "seed") {
      cfg.train.seed = static_cast<std::uint64_t>(std::stoull(val));
      seed_given = true;
    } else if (key == "reg_c") {
      cfg.train.reg_c = parse_real(val, "reg_c");
    } else if (key == "activation") {
      if (val == "relu") cfg.spec.activation = ActivationKind::relu();
      else if (val == "sigmoid") cfg.spec.activation = ActivationKind::sigmoid();
      else if (val == "tanh") cfg.spec.activation = ActivationKind::tanh();
      else if (val == "softplus") cfg.spec.activation = ActivationKind::softplus();
      else if (val == "elu") cfg.spec.activation = ActivationKind::elu(1.0);
      else throw InvalidInputError("unknown activation: " + val);
    } else if (key == "hidden") {
      cfg.spec.hidden = static_cast<int>(parse_real(val, "hidden"));
    } else if (key == "n_train") {
      cfg.n_train = static_cast<int>(parse_real(val, "n_train"));
    } else if (key == "n_test") {
      cfg.n_test = static_cast<int>(parse_real(val, "n_test"));
    } else if (key == "dim") {
      cfg.dim = static_cast<int>(parse_real(val, "dim"));
    } else if (key == "mc_rows") {
      cfg.mc_rows = static_cast<int>(parse_real(val, "mc_rows"));
    } else if (key == "mc_cols") {
      cfg.mc_cols = static_cast<int>(parse_real(val, "mc_cols"));
    } else if (key == "mc_rank") {
      cfg.mc_rank = static_cast<int>(parse_real(val, "mc_rank"));
    } else {
      throw InvalidInputError("unknown config key: " + key);
    }
  }
  if (cfg.train.mode == TrainMode::Random && !seed_given) {
    throw InvalidInputError("mode=random requires an explicit seed");
  }
  cfg.train.ball = NormBall(norm, epsilon);
  cfg.spec.validate_ball(cfg.train.ball);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace robustml
