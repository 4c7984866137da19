#include "lcw/metric.hpp"

#include "lcw/jet.hpp"
#include "lcw/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace lcw {

namespace {

std::size_t packed(int n, int i, int j) {
  if (i > j)
    std::swap(i, j);
  // rows 0..i-1 contribute n, n-1, ..., n-i+1 entries
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

bool valid_identifier(const std::string &s) {
  if (s.empty())
    return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

void check_coordinates(const std::vector<std::string> &coords) {
  std::set<std::string> seen;
  for (const auto &c : coords) {
    if (!valid_identifier(c))
      throw SpecError("coordinate name '" + c + "' is not an identifier");
    if (is_reserved_name(c))
      throw SpecError("coordinate name '" + c + "' collides with a function name");
    if (!seen.insert(c).second)
      throw SpecError("duplicate coordinate name '" + c + "'");
  }
}

Expr parse_component(const std::string &text, const std::vector<std::string> &coords, int i,
                     int j) {
  try {
    return parse_expr(text, coords);
  } catch (const ParseError &e) {
    throw SpecError("g[" + std::to_string(i) + "][" + std::to_string(j) + "]: " + e.what());
  }
}

std::optional<std::string> entry_text(const Json &e, int i, int j) {
  if (e.is_null())
    return std::nullopt;
  if (e.is_string()) {
    auto s = e.get<std::string>();
    if (s.empty())
      return std::nullopt;
    return s;
  }
  if (e.is_number())
    return format_number(e.get<double>());
  throw SpecError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] must be an expression string or a number");
}

} // namespace

bool DomainBox::contains(std::span<const double> x) const {
  if (x.size() != lo.size())
    return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!(x[k] >= lo[k] && x[k] <= hi[k]))
      return false;
  return true;
}

MetricSpec::MetricSpec(std::vector<std::string> coordinates, std::vector<Expr> upper_triangle,
                       DomainBox domain)
    : n_(static_cast<int>(coordinates.size())), coords_(std::move(coordinates)),
      upper_(std::move(upper_triangle)), domain_(std::move(domain)) {
  if (n_ < kMinDimension || n_ > kMaxDimension)
    throw SpecError("dimension must be between 3 and 8, got " + std::to_string(n_));
  check_coordinates(coords_);
  if (upper_.size() != static_cast<std::size_t>(n_ * (n_ + 1) / 2))
    throw SpecError("metric needs n(n+1)/2 upper-triangle components");
  if (domain_.lo.size() != static_cast<std::size_t>(n_) ||
      domain_.hi.size() != static_cast<std::size_t>(n_))
    throw SpecError("domain box must have one interval per coordinate");
  for (int k = 0; k < n_; ++k)
    if (!(domain_.lo[k] < domain_.hi[k]))
      throw SpecError("domain interval for '" + coords_[k] + "' is empty");
}

const Expr &MetricSpec::component(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("metric component index out of range");
  return upper_[packed(n_, i, j)];
}

Eigen::MatrixXd MetricSpec::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_)
    throw MetricEvaluationError("point has " + std::to_string(x.size()) +
                                " coordinates; metric dimension is " + std::to_string(n_));
  if (!domain_.contains(x))
    throw MetricEvaluationError("point lies outside the chart domain box");
  Eigen::MatrixXd g(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      try {
        g(i, j) = g(j, i) = eval_expr(component(i, j), x);
      } catch (const EvaluationError &e) {
        throw MetricEvaluationError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                                    "]: " + e.what());
      }
    }
  return g;
}

MetricSpec make_metric(std::vector<std::string> coordinates,
                       const std::vector<std::string> &upper_triangle,
                       std::optional<DomainBox> domain) {
  const int n = static_cast<int>(coordinates.size());
  check_coordinates(coordinates);
  std::vector<Expr> upper;
  upper.reserve(upper_triangle.size());
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) {
      if (k >= upper_triangle.size())
        throw SpecError("not enough metric components");
      upper.push_back(parse_component(upper_triangle[k], coordinates, i, j));
    }
  DomainBox box = domain ? *domain
                         : DomainBox{std::vector<double>(static_cast<std::size_t>(n), -1.0),
                                     std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  return MetricSpec(std::move(coordinates), std::move(upper), std::move(box));
}

MetricSpec parse_metric(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error &e) {
    throw SpecError(std::string("metric document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw SpecError("metric document must be a JSON object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw SpecError("'dimension' must be an integer");
  const int n = doc["dimension"].get<int>();
  if (n < MetricSpec::kMinDimension || n > MetricSpec::kMaxDimension)
    throw SpecError("dimension must be between 3 and 8, got " + std::to_string(n));

  if (!doc.contains("coordinates") || !doc["coordinates"].is_array())
    throw SpecError("'coordinates' must be an array of names");
  std::vector<std::string> coords;
  for (const auto &c : doc["coordinates"]) {
    if (!c.is_string())
      throw SpecError("coordinate names must be strings");
    coords.push_back(c.get<std::string>());
  }
  if (static_cast<int>(coords.size()) != n)
    throw SpecError("'coordinates' must list exactly 'dimension' names");
  check_coordinates(coords);

  if (!doc.contains("g") || !doc["g"].is_array() || static_cast<int>(doc["g"].size()) != n)
    throw SpecError("'g' must be an array of n rows");
  // Row i is either n entries (lower triangle may be null/"" to copy the
  // upper one) or the n-i entries g[i][i..n-1].
  std::vector<std::vector<std::optional<std::string>>> text(
      static_cast<std::size_t>(n), std::vector<std::optional<std::string>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const Json &row = doc["g"][static_cast<std::size_t>(i)];
    if (!row.is_array())
      throw SpecError("row " + std::to_string(i) + " of 'g' is not an array");
    const int len = static_cast<int>(row.size());
    if (len == n) {
      for (int j = 0; j < n; ++j)
        text[i][j] = entry_text(row[static_cast<std::size_t>(j)], i, j);
    } else if (len == n - i) {
      for (int j = i; j < n; ++j)
        text[i][j] = entry_text(row[static_cast<std::size_t>(j - i)], i, j);
    } else {
      throw SpecError("row " + std::to_string(i) + " of 'g' has " + std::to_string(len) +
                      " entries; expected " + std::to_string(n) + " or " +
                      std::to_string(n - i));
    }
  }

  std::vector<Expr> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (!text[i][j])
        throw SpecError("g[" + std::to_string(i) + "][" + std::to_string(j) + "] is missing");
      Expr e = parse_component(*text[i][j], coords, i, j);
      if (i != j && text[j][i]) {
        Expr mirror = parse_component(*text[j][i], coords, j, i);
        if (!structurally_equal(e, mirror))
          throw SpecError("asymmetric metric: g[" + std::to_string(i) + "][" + std::to_string(j) +
                          "] = \"" + *text[i][j] + "\" but g[" + std::to_string(j) + "][" +
                          std::to_string(i) + "] = \"" + *text[j][i] + "\"");
      }
      upper.push_back(std::move(e));
    }

  DomainBox box{std::vector<double>(static_cast<std::size_t>(n), -1.0),
                std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  if (doc.contains("domain") && !doc["domain"].is_null()) {
    const Json &dom = doc["domain"];
    if (!dom.is_object())
      throw SpecError("'domain' must be an object mapping coordinates to [lo, hi]");
    for (auto it = dom.begin(); it != dom.end(); ++it) {
      auto pos = std::find(coords.begin(), coords.end(), it.key());
      if (pos == coords.end())
        throw SpecError("'domain' names unknown coordinate '" + it.key() + "'");
      const Json &iv = it.value();
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
        throw SpecError("'domain' entry for '" + it.key() + "' must be [lo, hi]");
      auto k = static_cast<std::size_t>(pos - coords.begin());
      box.lo[k] = iv[0].get<double>();
      box.hi[k] = iv[1].get<double>();
    }
  }
  return MetricSpec(std::move(coords), std::move(upper), std::move(box));
}

MetricSpec load_metric(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::ios_base::failure("cannot open metric file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_metric(ss.str());
}

std::string metric_to_json(const MetricSpec &spec) {
  const int n = spec.dimension();
  Json doc;
  doc["dimension"] = n;
  doc["coordinates"] = spec.coordinates();
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < n; ++j)
      row.push_back(to_string(spec.component(i, j)));
    rows.push_back(row);
  }
  doc["g"] = rows;
  Json dom = Json::object();
  for (int k = 0; k < n; ++k)
    dom[spec.coordinates()[k]] = Json::array({spec.domain().lo[k], spec.domain().hi[k]});
  doc["domain"] = dom;
  return dump_json(doc);
}

MetricJets metric_jets(const MetricSpec &spec, std::span<const double> point) {
  const int n = spec.dimension();
  if (static_cast<int>(point.size()) != n)
    throw MetricEvaluationError("point has " + std::to_string(point.size()) +
                                " coordinates; metric dimension is " + std::to_string(n));
  if (!spec.domain().contains(point))
    throw MetricEvaluationError("point lies outside the chart domain box");

  std::vector<Jet3> env;
  env.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    env.push_back(Jet3::variable(k, point[k], n));

  MetricJets mj;
  mj.n = n;
  mj.point.assign(point.begin(), point.end());
  mj.g.resize(n, n);
  const auto un = static_cast<std::size_t>(n);
  mj.d1.assign(un * un * un, 0.0);
  mj.d2.assign(un * un * un * un, 0.0);
  mj.d3.assign(un * un * un * un * un, 0.0);

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet3 v;
      try {
        v = eval_expr<Jet3>(spec.component(i, j), env);
      } catch (const EvaluationError &e) {
        throw MetricEvaluationError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                                    "]: " + e.what());
      } catch (const std::domain_error &e) {
        throw MetricEvaluationError("g[" + std::to_string(i) + "][" + std::to_string(j) +
                                    "]: " + e.what());
      }
      mj.g(i, j) = mj.g(j, i) = v.value();
      for (int k = 0; k < n; ++k) {
        mj.d1[mj.idx(k, i, j)] = mj.d1[mj.idx(k, j, i)] = v.grad(k);
        for (int l = 0; l < n; ++l) {
          mj.d2[mj.idx(k, l, i, j)] = mj.d2[mj.idx(k, l, j, i)] = v.hess(k, l);
          for (int m = 0; m < n; ++m)
            mj.d3[mj.idx(k, l, m, i, j)] = mj.d3[mj.idx(k, l, m, j, i)] = v.third(k, l, m);
        }
      }
    }

  Eigen::LLT<Eigen::MatrixXd> llt(mj.g);
  if (llt.info() != Eigen::Success || !mj.g.allFinite())
    throw MetricEvaluationError("metric is not positive definite at the requested point");
  return mj;
}

} // namespace lcw
