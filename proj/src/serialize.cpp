#include "immax/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace immax {

namespace {

const std::pair<LossKind, const char*> kLossNames[] = {
    {LossKind::PhiMargin, "phi"},
    {LossKind::ImbalancedMarginBinary, "margin-binary"},
    {LossKind::ImbalancedMarginMulti, "margin-multi"},
    {LossKind::ImmaxBinary, "immax-binary"},
    {LossKind::ImmaxMulti, "immax"},
    {LossKind::CE, "ce"},
    {LossKind::RW, "rw"},
    {LossKind::BS, "bs"},
    {LossKind::Equal, "equal"},
    {LossKind::LA, "la"},
    {LossKind::CB, "cb"},
    {LossKind::Focal, "focal"},
    {LossKind::Ldam, "ldam"},
    {LossKind::CostSensitive, "cost"},
    {LossKind::Hinge, "hinge"},
    {LossKind::Logistic, "logistic"},
    {LossKind::Exponential, "exponential"},
};

Vector parse_real_list(const std::string& text) {
  std::vector<Real> values;
  std::istringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw ParseError("bad real list entry '" + field + "'");
    }
  }
  Vector result(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) result[static_cast<Index>(i)] = values[i];
  return result;
}

std::string format_real_list(const Vector& values) {
  std::string out;
  for (Index i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real_shortest(values[i]);
  }
  return out;
}

Real config_real(const std::map<std::string, std::string>& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end()) throw ConfigError("missing loss parameter '" + key + "'");
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("bad value for '" + key + "': " + it->second);
  }
}

}  // namespace

std::string format_real(Real value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_real_shortest(Real value) {
  char buffer[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::stod(buffer) == value) break;
  }
  return buffer;
}

std::string loss_kind_name(LossKind kind) {
  for (const auto& [k, name] : kLossNames) {
    if (k == kind) return name;
  }
  throw ConfigError("unknown loss kind");
}

LossKind loss_kind_from_name(const std::string& name) {
  for (const auto& [kind, candidate] : kLossNames) {
    if (name == candidate) return kind;
  }
  throw ConfigError("unknown loss '" + name + "'");
}

std::string psi_kind_name(PsiKind kind) {
  switch (kind) {
    case PsiKind::Hinge:
      return "hinge";
    case PsiKind::Logistic:
      return "logistic";
    case PsiKind::Exponential:
      return "exponential";
  }
  throw ConfigError("unknown surrogate");
}

PsiKind psi_kind_from_name(const std::string& name) {
  if (name == "hinge") return PsiKind::Hinge;
  if (name == "logistic") return PsiKind::Logistic;
  if (name == "exponential" || name == "exp") return PsiKind::Exponential;
  throw ConfigError("unknown surrogate '" + name + "'");
}

std::map<std::string, std::string> loss_spec_to_config(const LossSpec& spec) {
  std::map<std::string, std::string> config;
  config["loss"] = loss_kind_name(spec.kind);
  switch (spec.kind) {
    case LossKind::PhiMargin:
    case LossKind::ImbalancedMarginBinary:
    case LossKind::ImbalancedMarginMulti:
    case LossKind::ImmaxMulti:
      config["rho"] = format_real_list(spec.rho);
      break;
    case LossKind::ImmaxBinary:
      config["alpha"] = format_real_shortest(spec.alpha);
      config["psi"] = psi_kind_name(spec.psi);
      break;
    case LossKind::CostSensitive:
      config["cplus"] = format_real_shortest(spec.c_plus);
      config["cminus"] = format_real_shortest(spec.c_minus);
      break;
    case LossKind::LA:
      config["tau"] = format_real_shortest(spec.tau);
      break;
    case LossKind::CB:
      config["gamma"] = format_real_shortest(spec.gamma_cb);
      break;
    case LossKind::Focal:
      config["gamma"] = format_real_shortest(spec.gamma_focal);
      break;
    case LossKind::Ldam:
      config["C"] = format_real_shortest(spec.ldam_C);
      break;
    case LossKind::Equal:
      config["p"] = format_real_shortest(spec.equal_p);
      config["lambda_equal"] = format_real_shortest(spec.equal_lambda);
      break;
    default:
      break;
  }
  return config;
}

LossSpec loss_spec_from_config(const std::map<std::string, std::string>& config) {
  const auto it = config.find("loss");
  if (it == config.end()) throw ConfigError("missing 'loss' entry");
  LossSpec spec;
  spec.kind = loss_kind_from_name(it->second);
  switch (spec.kind) {
    case LossKind::PhiMargin:
    case LossKind::ImbalancedMarginBinary:
    case LossKind::ImbalancedMarginMulti:
    case LossKind::ImmaxMulti: {
      const auto rho_it = config.find("rho");
      if (rho_it == config.end()) throw ConfigError("missing loss parameter 'rho'");
      spec.rho = parse_real_list(rho_it->second);
      break;
    }
    case LossKind::ImmaxBinary: {
      spec.alpha = config_real(config, "alpha");
      const auto psi_it = config.find("psi");
      spec.psi = psi_it == config.end() ? PsiKind::Hinge : psi_kind_from_name(psi_it->second);
      break;
    }
    case LossKind::CostSensitive:
      spec.c_plus = config_real(config, "cplus");
      spec.c_minus = config_real(config, "cminus");
      break;
    case LossKind::LA:
      spec.tau = config_real(config, "tau");
      break;
    case LossKind::CB:
      spec.gamma_cb = config_real(config, "gamma");
      break;
    case LossKind::Focal:
      spec.gamma_focal = config_real(config, "gamma");
      break;
    case LossKind::Ldam:
      spec.ldam_C = config_real(config, "C");
      break;
    case LossKind::Equal:
      spec.equal_p = config_real(config, "p");
      spec.equal_lambda = config_real(config, "lambda_equal");
      break;
    default:
      break;
  }
  return spec;
}

namespace {

void write_matrix_rows(std::ofstream& out, const Matrix& matrix) {
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) {
      out << (j == 0 ? "" : " ") << format_real(matrix(i, j));
    }
    out << "\n";
  }
}

void write_vector(std::ofstream& out, const Vector& values) {
  for (Index j = 0; j < values.size(); ++j) {
    out << (j == 0 ? "" : " ") << format_real(values[j]);
  }
  out << "\n";
}

class LineReader {
 public:
  explicit LineReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw ParseError("cannot open '" + path + "'");
  }

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError(path_ + ": unexpected end of file");
    return line;
  }

  std::string expect_field(const std::string& key) {
    const std::string line = next();
    if (line.rfind(key + " ", 0) != 0) {
      throw ParseError(path_ + ": expected '" + key + "', got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }

  Vector read_vector(Index n) {
    std::istringstream stream(next());
    Vector values(n);
    for (Index j = 0; j < n; ++j) {
      if (!(stream >> values[j])) throw ParseError(path_ + ": short weight row");
    }
    return values;
  }

  Matrix read_matrix(Index rows, Index cols) {
    Matrix matrix(rows, cols);
    for (Index i = 0; i < rows; ++i) matrix.row(i) = read_vector(cols).transpose();
    return matrix;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

Index parse_index(const std::string& text, const char* what) {
  try {
    return static_cast<Index>(std::stoll(text));
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + ": " + text);
  }
}

}  // namespace

void save_scorer(const Scorer& scorer, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "scorer v1\n";
  if (const auto* binary = std::get_if<BinaryLinearScorer>(&scorer)) {
    out << "kind binary_linear\n";
    out << "dim " << binary->w.size() << "\n";
    out << "use_bias " << (binary->use_bias ? 1 : 0) << "\n";
    out << "bias " << format_real(binary->bias) << "\n";
    write_vector(out, binary->w);
  } else if (const auto* multi = std::get_if<MultiLinearScorer>(&scorer)) {
    out << "kind multi_linear\n";
    out << "classes " << multi->W.rows() << "\n";
    out << "dim " << multi->W.cols() << "\n";
    out << "use_bias " << (multi->use_bias ? 1 : 0) << "\n";
    write_vector(out, multi->bias);
    write_matrix_rows(out, multi->W);
  } else {
    const auto& mlp = std::get<MlpScorer>(scorer);
    out << "kind mlp\n";
    out << "classes " << mlp.W2.rows() << "\n";
    out << "hidden " << mlp.W1.rows() << "\n";
    out << "dim " << mlp.W1.cols() << "\n";
    write_vector(out, mlp.b1);
    write_vector(out, mlp.b2);
    write_matrix_rows(out, mlp.W1);
    write_matrix_rows(out, mlp.W2);
  }
}

Scorer load_scorer(const std::string& path) {
  LineReader reader(path);
  if (reader.next() != "scorer v1") throw ParseError(path + ": unknown scorer format");
  const std::string kind = reader.expect_field("kind");
  if (kind == "binary_linear") {
    BinaryLinearScorer scorer;
    const Index dim = parse_index(reader.expect_field("dim"), "dim");
    scorer.use_bias = reader.expect_field("use_bias") == "1";
    scorer.bias = std::stod(reader.expect_field("bias"));
    scorer.w = reader.read_vector(dim);
    return scorer;
  }
  if (kind == "multi_linear") {
    MultiLinearScorer scorer;
    const Index classes = parse_index(reader.expect_field("classes"), "classes");
    const Index dim = parse_index(reader.expect_field("dim"), "dim");
    scorer.use_bias = reader.expect_field("use_bias") == "1";
    scorer.bias = reader.read_vector(classes);
    scorer.W = reader.read_matrix(classes, dim);
    return scorer;
  }
  if (kind == "mlp") {
    MlpScorer scorer;
    const Index classes = parse_index(reader.expect_field("classes"), "classes");
    const Index hidden = parse_index(reader.expect_field("hidden"), "hidden");
    const Index dim = parse_index(reader.expect_field("dim"), "dim");
    scorer.b1 = reader.read_vector(hidden);
    scorer.b2 = reader.read_vector(classes);
    scorer.W1 = reader.read_matrix(hidden, dim);
    scorer.W2 = reader.read_matrix(classes, hidden);
    return scorer;
  }
  throw ParseError(path + ": unknown scorer kind '" + kind + "'");
}

void save_trace(const TrainTrace& trace, const std::string& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "epoch,objective,train_error\n";
  for (size_t epoch = 0; epoch < trace.objective.size(); ++epoch) {
    out << epoch << ',' << format_real(trace.objective[epoch]) << ','
        << format_real(trace.train_error[epoch]) << "\n";
  }
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::map<std::string, std::string> config;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line without '=': " + line);
    config[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return config;
}

}  // namespace immax
