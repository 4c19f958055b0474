#include "fpc/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpc {

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_row(std::string& out, const double* row, int n) {
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    append_num(out, row[i]);
  }
  out += '\n';
}

class Tokens {
 public:
  explicit Tokens(std::string_view text) : in_(std::string(text)) {}

  std::string word(const char* what) {
    std::string t;
    if (!(in_ >> t)) throw ParseError(std::string("model: unexpected end of file, expected ") + what);
    return t;
  }

  bool peek_word(std::string& out) {
    const auto pos = in_.tellg();
    if (!(in_ >> out)) return false;
    in_.seekg(pos);
    return true;
  }

  double number(const char* what) {
    double v;
    if (!(in_ >> v)) throw ParseError(std::string("model: malformed number, expected ") + what);
    return v;
  }

  long integer(const char* what) {
    long v;
    if (!(in_ >> v)) throw ParseError(std::string("model: malformed integer, expected ") + what);
    return v;
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::string model_to_text(const Model& m) {
  std::string out = "SAEv1\n";
  for (std::size_t k = 0; k < m.encoder.layers.size(); ++k) {
    const LayerParams& p = m.encoder.layers[k];
    const SaeHyper& h = m.encoder.hyper[k];
    out += "layer " + std::to_string(p.visible()) + " " + std::to_string(p.hidden()) + " ";
    append_num(out, h.lambda);
    out += ' ';
    append_num(out, h.beta);
    out += ' ';
    append_num(out, h.rho);
    out += '\n';
    for (int r = 0; r < p.hidden(); ++r) append_row(out, p.w1.row(r), p.visible());
    append_row(out, p.b1.data(), static_cast<int>(p.b1.size()));
    for (int r = 0; r < p.visible(); ++r) append_row(out, p.w2.row(r), p.hidden());
    append_row(out, p.b2.data(), static_cast<int>(p.b2.size()));
  }
  if (m.softmax) {
    const SoftmaxModel& s = *m.softmax;
    out += "SOFTMAXv1\n";
    out += std::to_string(s.k()) + " " + std::to_string(s.n()) + " ";
    append_num(out, s.lambda_reg);
    out += '\n';
    for (int r = 0; r < s.k(); ++r) append_row(out, s.theta.row(r), s.n() + 1);
  }
  return out;
}

Model model_from_text(std::string_view text) {
  Tokens tok(text);
  if (tok.word("SAEv1 header") != "SAEv1") throw ParseError("model: missing SAEv1 header");

  Model m;
  std::string next;
  while (tok.peek_word(next)) {
    if (next == "layer") {
      tok.word("layer keyword");
      const long visible = tok.integer("visible size");
      const long hidden = tok.integer("hidden size");
      if (visible < 1 || hidden < 1 || visible > 1000000 || hidden > 1000000)
        throw ParseError("model: layer sizes out of range");
      SaeHyper h;
      h.lambda = tok.number("lambda");
      h.beta = tok.number("beta");
      h.rho = tok.number("rho");

      LayerParams p;
      p.w1 = Matrix(static_cast<int>(hidden), static_cast<int>(visible));
      p.w2 = Matrix(static_cast<int>(visible), static_cast<int>(hidden));
      p.b1.resize(hidden);
      p.b2.resize(visible);
      for (double& v : p.w1.flat()) v = tok.number("W1 entry");
      for (double& v : p.b1) v = tok.number("b1 entry");
      for (double& v : p.w2.flat()) v = tok.number("W2 entry");
      for (double& v : p.b2) v = tok.number("b2 entry");

      if (!m.encoder.layers.empty() && m.encoder.layers.back().hidden() != visible)
        throw ParseError("model: layer visible size does not chain with previous hidden size");
      m.encoder.layers.push_back(std::move(p));
      m.encoder.hyper.push_back(h);
    } else if (next == "SOFTMAXv1") {
      tok.word("SOFTMAXv1 header");
      const long k = tok.integer("class count");
      const long n = tok.integer("feature size");
      if (k < 2 || n < 1 || k > 1000 || n > 1000000) throw ParseError("model: softmax dims out of range");
      SoftmaxModel s;
      s.lambda_reg = tok.number("lambda");
      s.theta = Matrix(static_cast<int>(k), static_cast<int>(n) + 1);
      for (double& v : s.theta.flat()) v = tok.number("theta entry");
      m.softmax = std::move(s);
      break;
    } else {
      throw ParseError("model: unexpected token '" + next + "'");
    }
  }
  return m;
}

void save_model(const std::string& path, const Model& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << model_to_text(m);
  if (!out) throw IoError("write failed: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_text(ss.str());
}

}  // namespace fpc
