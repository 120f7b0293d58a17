#include "bmkit/json_io.hpp"

#include <fstream>
#include <sstream>

namespace bmkit {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key + ": missing");
  return *it;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

Index index_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw ParseError(where + ": expected " + std::to_string(dim) + " integers");
  Index k{0, 0, 0};
  for (int i = 0; i < dim; ++i) k[i] = integer(j[static_cast<std::size_t>(i)], where + "/" + std::to_string(i));
  return k;
}

json index_to_json(const Index& k, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(k[i]);
  return a;
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  if (std::isnan(x)) return json("nan");
  return json(x);
}

double number_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  throw ParseError(where + ": expected a number or \"inf\"");
}

json to_json(const GridFunction& f) {
  json j;
  j["dim"] = f.dim;
  j["J"] = f.J;
  j["origin"] = index_to_json(f.origin, f.dim);
  j["shape"] = index_to_json(f.shape, f.dim);
  json v = json::array();
  for (const auto& c : f.values) v.push_back(json::array({c.real(), c.imag()}));
  j["values"] = std::move(v);
  return j;
}

GridFunction grid_function_from_json(const json& j) {
  const std::string w = "";
  const auto dim = integer(field(j, "dim", w), "/dim");
  if (dim < 1 || dim > kMaxDim) throw ParseError("/dim: must be 1, 2 or 3");
  const int n = static_cast<int>(dim);
  const auto J = integer(field(j, "J", w), "/J");
  if (J < 0) throw ParseError("/J: must be nonnegative");
  const Index origin = index_from_json(field(j, "origin", w), n, "/origin");
  Index shape = index_from_json(field(j, "shape", w), n, "/shape");
  for (int i = 0; i < n; ++i)
    if (shape[i] < 1) throw ParseError("/shape/" + std::to_string(i) + ": must be positive");
  GridFunction f(n, static_cast<int>(J), origin, shape);
  const json& vals = field(j, "values", w);
  if (!vals.is_array() || vals.size() != f.size())
    throw ParseError("/values: expected " + std::to_string(f.size()) + " entries");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const json& e = vals[i];
    const std::string where = "/values/" + std::to_string(i);
    if (e.is_number()) {
      f.values[i] = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      f.values[i] = cplx{e[0].get<double>(), e[1].get<double>()};
    } else {
      throw ParseError(where + ": expected [re, im]");
    }
  }
  return f;
}

json to_json(const ExponentVector& p) {
  json a = json::array();
  for (double x : p) a.push_back(number_to_json(x));
  return a;
}

ExponentVector exponents_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array");
  ExponentVector p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(number_from_json(j[i], where + "/" + std::to_string(i)));
  return p;
}

json to_json(const SpaceParams& sp) {
  json j;
  j["p"] = to_json(sp.p);
  j["t"] = number_to_json(sp.t);
  j["r"] = number_to_json(sp.r);
  return j;
}

SpaceParams space_params_from_json(const json& j) {
  SpaceParams sp;
  sp.p = exponents_from_json(field(j, "p", ""), "/p");
  sp.t = number_from_json(field(j, "t", ""), "/t");
  sp.r = number_from_json(field(j, "r", ""), "/r");
  return sp;
}

json to_json(const DyadicCube& q) {
  json j;
  j["j"] = q.scale;
  j["m"] = index_to_json(q.pos, q.dim);
  json s = json::array();
  for (int i = 0; i < q.dim; ++i) s.push_back(q.shift[i]);
  j["shift"] = std::move(s);
  return j;
}

json to_json(const NormBreakdown& b) {
  json j;
  j["total"] = number_to_json(b.total);
  j["divergence"] = to_string(b.divergence);
  j["jmin"] = b.jmin;
  j["jmax"] = b.jmax;
  json ps = json::array();
  for (double x : b.per_scale) ps.push_back(number_to_json(x));
  j["per_scale"] = std::move(ps);
  j["coarse_tail"] = number_to_json(b.coarse_tail);
  j["fine_tail"] = number_to_json(b.fine_tail);
  return j;
}

json to_json(const BlockDecomposition& d) {
  json j;
  j["weight_norm"] = number_to_json(d.weight_norm);
  json blocks = json::array();
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    json b;
    b["lambda"] = d.lambda[i];
    b["cube"] = to_json(d.blocks[i].support);
    b["values"] = to_json(d.blocks[i].function);
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

json to_json(const CoefficientSet& c) {
  json j;
  j["dim"] = c.dim;
  j["J"] = c.J;
  j["window"] = json::array({c.window.jlo, c.window.jhi});
  json a = json::array();
  for (const auto& w : c.coeffs) {
    json e;
    e["ell"] = w.ell;
    e["j"] = w.j;
    e["k"] = index_to_json(w.k, c.dim);
    e["value"] = json::array({w.value.real(), w.value.imag()});
    a.push_back(std::move(e));
  }
  j["coefficients"] = std::move(a);
  return j;
}

}  // namespace bmkit
