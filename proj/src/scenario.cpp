#include "sclab/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "sclab/induction.hpp"

namespace sclab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path, msg);
}

std::string item(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string key(const std::string& path, const char* k) {
  return path.empty() ? std::string(k) : path + "." + k;
}

const json& require(const json& j, const char* k, const std::string& path) {
  if (!j.is_object() || !j.contains(k)) fail(key(path, k), "required field is missing");
  return j.at(k);
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

int opt_int(const json& j, const char* k, int dflt, int lo,
            const std::string& path) {
  if (!j.contains(k)) return dflt;
  int v = as_int(j.at(k), key(path, k));
  if (v < lo) fail(key(path, k), "must be at least " + std::to_string(lo));
  return v;
}

double opt_double(const json& j, const char* k, double dflt,
                  const std::string& path) {
  if (!j.contains(k)) return dflt;
  double v = as_double(j.at(k), key(path, k));
  if (!(v > 0)) fail(key(path, k), "must be positive");
  return v;
}

// Dense row-major matrix from nested rows of numbers.
std::vector<double> parse_matrix(const json& j, int n,
                                 const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " rows");
  std::vector<double> m(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(item(path, r), "expected " + std::to_string(n) + " numbers");
    for (int c = 0; c < n; ++c)
      m[static_cast<size_t>(r) * n + c] = as_double(row.at(c), item(item(path, r), c));
  }
  return m;
}

void check_sp_membership(const std::vector<double>& a, int n,
                         const std::string& path) {
  const auto w = standard_form_matrix(n);
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double t = 0;  // (A^T W + W A)_{ij}
      for (int m = 0; m < n; ++m)
        t += a[static_cast<size_t>(m) * n + i] * w[static_cast<size_t>(m) * n + j] +
             w[static_cast<size_t>(i) * n + m] * a[static_cast<size_t>(m) * n + j];
      worst = std::max(worst, std::abs(t));
    }
  if (worst > 1e-10) {
    std::ostringstream os;
    os << "generator is not infinitesimally symplectic: max |A^T W + W A| = "
       << worst;
    fail(path, os.str());
  }
}

int require_dimension(const json& j, const std::string& path, int lo, int hi,
                      bool even) {
  int d = as_int(require(j, "dimension", path), key(path, "dimension"));
  if (d < lo || d > hi)
    fail(key(path, "dimension"),
         "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (even && d % 2 != 0) fail(key(path, "dimension"), "must be even");
  return d;
}

// Sparse connection coefficients: a list of {i, k, j, value} entries.
ExprConnection parse_gamma(const json& j, int d, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of {i, k, j, value} entries");
  ExprConnection g(d);
  std::vector<bool> seen(static_cast<size_t>(d) * d * d, false);
  for (size_t e = 0; e < j.size(); ++e) {
    const std::string ep = item(path, e);
    const json& entry = j.at(e);
    if (!entry.is_object()) fail(ep, "expected an object {i, k, j, value}");
    int i = as_int(require(entry, "i", ep), key(ep, "i"));
    int k = as_int(require(entry, "k", ep), key(ep, "k"));
    int jj = as_int(require(entry, "j", ep), key(ep, "j"));
    for (auto [name, idx] :
         {std::pair{"i", i}, std::pair{"k", k}, std::pair{"j", jj}})
      if (idx < 0 || idx >= d)
        fail(key(ep, name), "index out of range [0, " + std::to_string(d) + ")");
    size_t flat = (static_cast<size_t>(i) * d + k) * d + jj;
    if (seen[flat]) fail(ep, "duplicate coefficient entry");
    seen[flat] = true;
    g.at(i, k, jj) = parse_expr(require(entry, "value", ep), d, key(ep, "value"));
  }
  return g;
}

// Two-form: the string "standard", or strictly-upper entries {i, j, value}
// with the lower triangle filled by antisymmetry.
ExprForm parse_omega(const json& j, int d, bool* standard,
                     const std::string& path) {
  *standard = false;
  ExprForm w(d);
  if (j.is_string()) {
    if (j.get<std::string>() != "standard")
      fail(path, "unknown form name '" + j.get<std::string>() +
                     "' (only \"standard\" is defined)");
    *standard = true;
    auto m = standard_form_matrix(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        w.at(a, b) = Expr::constant(m[static_cast<size_t>(a) * d + b]);
    return w;
  }
  if (!j.is_array()) fail(path, "expected \"standard\" or an array of {i, j, value} entries");
  for (size_t e = 0; e < j.size(); ++e) {
    const std::string ep = item(path, e);
    const json& entry = j.at(e);
    if (!entry.is_object()) fail(ep, "expected an object {i, j, value}");
    int i = as_int(require(entry, "i", ep), key(ep, "i"));
    int jj = as_int(require(entry, "j", ep), key(ep, "j"));
    if (i < 0 || i >= d) fail(key(ep, "i"), "index out of range [0, " + std::to_string(d) + ")");
    if (jj < 0 || jj >= d) fail(key(ep, "j"), "index out of range [0, " + std::to_string(d) + ")");
    if (i >= jj)
      fail(ep, "entries must have i < j; the lower triangle is implied by antisymmetry");
    Expr v = parse_expr(require(entry, "value", ep), d, key(ep, "value"));
    w.at(i, jj) = v;
    w.at(jj, i) = -v;
  }
  return w;
}

std::vector<Expr> parse_expr_list(const json& j, int count, int d,
                                  const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != count)
    fail(path, "expected " + std::to_string(count) + " expressions");
  std::vector<Expr> out;
  out.reserve(j.size());
  for (size_t e = 0; e < j.size(); ++e)
    out.push_back(parse_expr(j.at(e), d, item(path, e)));
  return out;
}

GaussSpec parse_gauss(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected {center, width}");
  const json& c = require(j, "center", path);
  if (!c.is_array() || c.size() != 2)
    fail(key(path, "center"), "expected [a, l]");
  GaussSpec g;
  g.center_a = as_double(c.at(0), item(key(path, "center"), 0));
  g.center_l = as_double(c.at(1), item(key(path, "center"), 1));
  g.width = as_double(require(j, "width", path), key(path, "width"));
  if (!(g.width > 0)) fail(key(path, "width"), "must be positive");
  return g;
}

json gauss_to_json(const GaussSpec& g) {
  return json{{"center", {g.center_a, g.center_l}}, {"width", g.width}};
}

}  // namespace

Expr parse_expr(const json& j, int dimension, const std::string& path) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (!j.is_object())
    fail(path, "expected an expression: a number, {const}, {coord}, or {op, args}");
  if (j.contains("const"))
    return Expr::constant(as_double(j.at("const"), key(path, "const")));
  if (j.contains("coord")) {
    int i = as_int(j.at("coord"), key(path, "coord"));
    if (i < 0 || i >= dimension)
      fail(key(path, "coord"),
           "coordinate index out of range [0, " + std::to_string(dimension) + ")");
    return Expr::coord(i);
  }
  const std::string op = as_string(require(j, "op", path), key(path, "op"));
  const json& args = require(j, "args", path);
  if (!args.is_array()) fail(key(path, "args"), "expected an array");
  auto arg = [&](size_t i) {
    return parse_expr(args.at(i), dimension, item(key(path, "args"), i));
  };
  auto need = [&](size_t n) {
    if (args.size() != n)
      fail(key(path, "args"), "'" + op + "' takes " + std::to_string(n) +
                                  " argument" + (n == 1 ? "" : "s"));
  };
  if (op == "add") { need(2); return arg(0) + arg(1); }
  if (op == "sub") { need(2); return arg(0) - arg(1); }
  if (op == "mul") { need(2); return arg(0) * arg(1); }
  if (op == "div") { need(2); return arg(0) / arg(1); }
  if (op == "neg") { need(1); return -arg(0); }
  if (op == "exp") { need(1); return Expr::exp(arg(0)); }
  if (op == "sinh") { need(1); return Expr::sinh(arg(0)); }
  if (op == "cosh") { need(1); return Expr::cosh(arg(0)); }
  if (op == "sqrt") { need(1); return Expr::sqrt(arg(0)); }
  if (op == "powi") {
    need(1);
    return Expr::pow_int(arg(0), as_int(require(j, "exponent", path),
                                        key(path, "exponent")));
  }
  fail(key(path, "op"), "unknown function name '" + op + "'");
}

nlohmann::json expr_to_json(const Expr& e) {
  struct Walk {
    static json go(const ExprNode* n) {
      switch (n->kind) {
        case ExprNode::Kind::kConst: return json(n->c);
        case ExprNode::Kind::kCoord: return json{{"coord", n->var}};
        case ExprNode::Kind::kAdd:
          return json{{"op", "add"}, {"args", {go(n->a.get()), go(n->b.get())}}};
        case ExprNode::Kind::kSub:
          return json{{"op", "sub"}, {"args", {go(n->a.get()), go(n->b.get())}}};
        case ExprNode::Kind::kMul:
          return json{{"op", "mul"}, {"args", {go(n->a.get()), go(n->b.get())}}};
        case ExprNode::Kind::kDiv:
          return json{{"op", "div"}, {"args", {go(n->a.get()), go(n->b.get())}}};
        case ExprNode::Kind::kNeg:
          return json{{"op", "neg"}, {"args", {go(n->a.get())}}};
        case ExprNode::Kind::kExp:
          return json{{"op", "exp"}, {"args", {go(n->a.get())}}};
        case ExprNode::Kind::kSinh:
          return json{{"op", "sinh"}, {"args", {go(n->a.get())}}};
        case ExprNode::Kind::kCosh:
          return json{{"op", "cosh"}, {"args", {go(n->a.get())}}};
        case ExprNode::Kind::kSqrt:
          return json{{"op", "sqrt"}, {"args", {go(n->a.get())}}};
        case ExprNode::Kind::kPowInt:
          return json{{"op", "powi"}, {"args", {go(n->a.get())}}, {"exponent", n->ip}};
      }
      return json();
    }
  };
  return Walk::go(e.node());
}

Scenario parse_scenario(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) fail(source, "scenario must be a JSON object");
  const std::string root;

  const std::string version =
      as_string(require(j, "spec_version", root), "spec_version");
  if (version != kSpecVersion)
    fail("spec_version", "unsupported version '" + version + "' (expected '" +
                             kSpecVersion + "')");

  Scenario s;
  s.raw = j;
  s.kind = as_string(require(j, "kind", root), "kind");
  static const char* kKinds[] = {"connection-check", "reduce", "induce",
                                 "roundtrip", "twistor", "wkb", "koszul"};
  if (std::find_if(std::begin(kKinds), std::end(kKinds), [&](const char* k) {
        return s.kind == k;
      }) == std::end(kKinds))
    fail("kind", "unknown kind '" + s.kind + "'");

  if (j.contains("seed")) {
    const json& sd = j.at("seed");
    if (!sd.is_number_integer() || sd.get<long long>() < 0)
      fail("seed", "expected a non-negative integer");
    s.seed = sd.get<std::uint64_t>();
  }
  if (j.contains("tolerance")) {
    s.tolerance = as_double(j.at("tolerance"), "tolerance");
    if (!(s.tolerance > 0)) fail("tolerance", "must be positive");
  }
  s.box = opt_double(j, "box", 0.5, root);

  if (s.kind == "connection-check" || s.kind == "twistor" ||
      s.kind == "induce" || s.kind == "roundtrip") {
    const int hi = (s.kind == "connection-check") ? 8 : 4;
    s.dimension = require_dimension(j, root, 2, hi, true);
    s.gamma = parse_gamma(require(j, "gamma", root), s.dimension, "gamma");
    s.omega = parse_omega(require(j, "omega", root), s.dimension,
                          &s.omega_standard, "omega");
    if (j.contains("lambda")) {
      s.lambda = parse_expr_list(j.at("lambda"), s.dimension, s.dimension, "lambda");
      s.has_lambda = true;
    }
    if (s.kind == "induce" || s.kind == "roundtrip") {
      if (!s.has_lambda) {
        if (!s.omega_standard)
          fail("lambda",
               "required: a potential of the two-form must be supplied unless "
               "omega is \"standard\"");
        s.lambda = linear_potential(s.dimension);
        s.has_lambda = true;
      }
      s.box = opt_double(j, "box", 0.3, root);
    }
    s.samples = opt_int(j, "samples", s.kind == "connection-check" ? 100
                                      : s.kind == "roundtrip"      ? 50
                                      : s.kind == "twistor"        ? 10
                                                                   : 5,
                        1, root);
    s.structures = opt_int(j, "structures", 50, 1, root);
  } else if (s.kind == "reduce") {
    s.dimension = require_dimension(j, root, 4, 8, true);
    const json& a = require(j, "A", root);
    if (a.is_string()) {
      s.generator_form = a.get<std::string>();
      if (s.generator_form != "round" && s.generator_form != "random")
        fail("A", "unknown generator name '" + s.generator_form +
                      "' (use \"round\", \"random\", or a matrix)");
      s.generator_scale = opt_double(j, "scale", 0.6, root);
    } else {
      s.generator_form = "matrix";
      s.generator = parse_matrix(a, s.dimension, "A");
      check_sp_membership(s.generator, s.dimension, "A");
    }
    if (j.contains("basepoint")) {
      const json& bp = j.at("basepoint");
      if (!bp.is_array() || static_cast<int>(bp.size()) != s.dimension)
        fail("basepoint", "expected " + std::to_string(s.dimension) + " numbers");
      for (size_t i = 0; i < bp.size(); ++i)
        s.basepoint.push_back(as_double(bp.at(i), item("basepoint", i)));
    } else {
      s.basepoint.assign(static_cast<size_t>(s.dimension), 0.0);
      s.basepoint[0] = 1.0;
    }
    s.samples = opt_int(j, "samples", 20, 2, root);
    s.box = opt_double(j, "box", 0.25, root);
  } else if (s.kind == "wkb") {
    const json& th = require(j, "thetas", root);
    if (!th.is_array() || th.empty()) fail("thetas", "expected a non-empty array");
    for (size_t i = 0; i < th.size(); ++i) {
      double t = as_double(th.at(i), item("thetas", i));
      if (!(t > 0)) fail(item("thetas", i), "must be positive");
      s.thetas.push_back(t);
    }
    const json& pr = require(j, "pairs", root);
    if (!pr.is_array() || pr.empty()) fail("pairs", "expected a non-empty array");
    for (size_t i = 0; i < pr.size(); ++i) {
      const std::string pp = item("pairs", i);
      const json& p = pr.at(i);
      s.pairs.emplace_back(parse_gauss(require(p, "u", pp), key(pp, "u")),
                           parse_gauss(require(p, "v", pp), key(pp, "v")));
    }
    s.wkb_box = opt_double(j, "box", 4.10, root);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (!g.is_array() || g.size() != 2) fail("grid", "expected [n_a, n_l]");
      s.grid_a = as_int(g.at(0), "grid[0]");
      s.grid_l = as_int(g.at(1), "grid[1]");
      if (s.grid_a < 2 || s.grid_l < 2) fail("grid", "node counts must be at least 2");
    }
    s.samples = opt_int(j, "samples", 1000, 1, root);
    if (j.contains("dimension") && as_int(j.at("dimension"), "dimension") != 2)
      fail("dimension", "the deformation model is two-dimensional");
    s.dimension = 2;
  } else {  // koszul
    s.dimension = require_dimension(j, root, 2, 8, true);
    if (j.contains("degrees")) {
      const json& dg = j.at("degrees");
      if (!dg.is_array() || dg.empty()) fail("degrees", "expected a non-empty array");
      for (size_t i = 0; i < dg.size(); ++i) {
        const json& e = dg.at(i);
        if (!e.is_array() || e.size() != 2) fail(item("degrees", i), "expected [q, p]");
        int q = as_int(e.at(0), item("degrees", i));
        int p = as_int(e.at(1), item("degrees", i));
        if (q < 1 || p < 1 || q > s.dimension)
          fail(item("degrees", i),
               "need q in [1, dimension] and p >= 1 for the anticommutator");
        s.degrees.emplace_back(q, p);
      }
    } else {
      for (int q = 1; q <= std::min(3, s.dimension); ++q)
        for (int p = 1; q + p <= 4; ++p) s.degrees.emplace_back(q, p);
    }
    s.samples = opt_int(j, "samples", 1, 1, root);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line and column.
    size_t line = 1, col = 1;
    const size_t stop = std::min(e.byte, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": " << e.what();
    throw ParseError(os.str());
  }
  return parse_scenario(j, path);
}

nlohmann::json save_scenario(const Scenario& s) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["kind"] = s.kind;
  j["seed"] = s.seed;
  j["samples"] = s.samples;
  if (s.tolerance > 0) j["tolerance"] = s.tolerance;

  auto emit_gamma = [&]() {
    json arr = json::array();
    const int d = s.dimension;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int jj = 0; jj < d; ++jj) {
          const Expr& e = s.gamma.at(i, k, jj);
          double c;
          if (e.is_const(&c) && c == 0.0) continue;
          arr.push_back(json{
              {"i", i}, {"k", k}, {"j", jj}, {"value", expr_to_json(e)}});
        }
    return arr;
  };
  auto emit_omega = [&]() -> json {
    if (s.omega_standard) return "standard";
    json arr = json::array();
    const int d = s.dimension;
    for (int i = 0; i < d; ++i)
      for (int jj = i + 1; jj < d; ++jj) {
        const Expr& e = s.omega.at(i, jj);
        double c;
        if (e.is_const(&c) && c == 0.0) continue;
        arr.push_back(json{{"i", i}, {"j", jj}, {"value", expr_to_json(e)}});
      }
    return arr;
  };

  if (s.kind == "connection-check" || s.kind == "twistor" ||
      s.kind == "induce" || s.kind == "roundtrip") {
    j["dimension"] = s.dimension;
    j["box"] = s.box;
    j["gamma"] = emit_gamma();
    j["omega"] = emit_omega();
    if (s.has_lambda && !s.omega_standard) {
      json lam = json::array();
      for (const Expr& e : s.lambda) lam.push_back(expr_to_json(e));
      j["lambda"] = lam;
    }
    if (s.kind == "twistor") j["structures"] = s.structures;
  } else if (s.kind == "reduce") {
    j["dimension"] = s.dimension;
    j["box"] = s.box;
    if (s.generator_form == "matrix") {
      json rows = json::array();
      for (int r = 0; r < s.dimension; ++r) {
        json row = json::array();
        for (int c = 0; c < s.dimension; ++c)
          row.push_back(s.generator[static_cast<size_t>(r) * s.dimension + c]);
        rows.push_back(row);
      }
      j["A"] = rows;
    } else {
      j["A"] = s.generator_form;
      if (s.generator_form == "random") j["scale"] = s.generator_scale;
    }
    j["basepoint"] = s.basepoint;
  } else if (s.kind == "wkb") {
    j["thetas"] = s.thetas;
    json pr = json::array();
    for (const auto& [u, v] : s.pairs)
      pr.push_back(json{{"u", gauss_to_json(u)}, {"v", gauss_to_json(v)}});
    j["pairs"] = pr;
    j["box"] = s.wkb_box;
    j["grid"] = {s.grid_a, s.grid_l};
  } else {  // koszul
    j["dimension"] = s.dimension;
    json dg = json::array();
    for (const auto& [q, p] : s.degrees) dg.push_back(json{q, p});
    j["degrees"] = dg;
  }
  return j;
}

int worker_cap() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("SCLAB_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

}  // namespace sclab
