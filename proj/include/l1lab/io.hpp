#pragma once

// JSON encoding for metrics, embeddings, measure families, certificates,
// Kahane maps and bound reports, plus a canonical writer (sorted keys,
// 17 significant digits) so reruns diff byte-for-byte.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "l1lab/bounds.hpp"
#include "l1lab/error.hpp"
#include "l1lab/kahane.hpp"
#include "l1lab/measure.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/pipeline.hpp"

namespace l1lab {

using Json = nlohmann::json;

// Thrown for malformed or schema-violating input documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_number(std::string& out, double x) {
  if (std::isnan(x)) { out += "\"nan\""; return; }
  if (std::isinf(x)) { out += x > 0 ? "\"inf\"" : "\"-inf\""; return; }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

inline void write_canonical(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys already sorted
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_canonical(out, it.value());
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_canonical(out, j[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

// Doubles may arrive as numbers or as the strings written for non-finite values.
inline double read_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number");
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::size_t read_size(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError("expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline std::vector<std::size_t> read_indices(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an index array");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(read_size(x));
  return out;
}

inline std::vector<double> read_doubles(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a number array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_double(x));
  return out;
}

inline Json number(double x) {
  if (std::isfinite(x)) return Json(x);
  return Json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
}

inline Json number_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace detail

inline std::string to_canonical_string(const Json& j) {
  std::string out;
  detail::write_canonical(out, j);
  return out;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << to_canonical_string(j) << '\n';
}

// --- metric -----------------------------------------------------------------

inline Json metric_to_json(const FiniteMetricSpace& m) {
  Json j;
  j[schema::kN] = m.size();
  Json dist = Json::array();
  for (std::size_t i = 1; i < m.size(); ++i)
    for (std::size_t k = 0; k < i; ++k) dist.push_back(detail::number(m(i, k)));
  j[schema::kDist] = std::move(dist);
  if (!m.labels().empty()) j[schema::kLabels] = m.labels();
  return j;
}

inline MetricPtr metric_from_json(const Json& j) {
  try {
    const std::size_t n = detail::read_size(detail::field(j, schema::kN));
    const auto lower = detail::read_doubles(detail::field(j, schema::kDist));
    if (n == 0 || lower.size() != n * (n - 1) / 2) throw ParseError("dist must hold n(n-1)/2 entries");
    std::vector<double> full(n * n, 0.0);
    std::size_t p = 0;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) full[i * n + k] = full[k * n + i] = lower[p++];
    std::vector<std::string> labels;
    if (j.contains(schema::kLabels)) labels = j.at(schema::kLabels).get<std::vector<std::string>>();
    return std::make_shared<const FiniteMetricSpace>(n, std::move(full), std::move(labels));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad metric: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad metric: ") + e.what());
  }
}

// --- embedding ---------------------------------------------------------------

namespace detail {

// Recognize the two named sources so files stay small.
inline Json source_to_json(const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  if (n >= 2 && m.is_star()) return Json{{"kind", "star"}, {"n", n}};
  for (std::size_t k = 2; k < n; ++k) {
    std::size_t size = 1, width = 1, h = 0;
    while (size < n) {
      width *= k;
      size += width;
      ++h;
    }
    if (size != n || h == 0) continue;
    const KaryTree t(k, h);
    bool same = true;
    for (std::size_t u = 0; u < n && same; ++u)
      for (std::size_t v = u + 1; v < n && same; ++v)
        same = std::abs(m(u, v) - static_cast<double>(t.distance(u, v))) <= kMetricTolerance;
    if (same) return Json{{"kind", "kary_tree"}, {"k", k}, {"h", h}};
  }
  Json j = metric_to_json(m);
  j["kind"] = "metric";
  return j;
}

inline MetricPtr source_from_json(const Json& j, std::size_t n) {
  const auto kind = field(j, "kind").get<std::string>();
  MetricPtr m;
  if (kind == "star") m = star_metric(read_size(field(j, "n")));
  else if (kind == "kary_tree") m = kary_tree_metric(read_size(field(j, "k")), read_size(field(j, "h")));
  else if (kind == "metric") m = metric_from_json(j);
  else throw ParseError("unknown source kind \"" + kind + "\"");
  if (m->size() != n) throw ParseError("source size does not match n");
  return m;
}

}  // namespace detail

inline Json embedding_to_json(const Embedding& e) {
  Json j;
  j[schema::kN] = e.size();
  j[schema::kDim] = e.dim();
  j[schema::kNorm] = e.norm() == Norm::L1 ? "l1" : "l2";
  Json pts = Json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto p = e.point(i);
    pts.push_back(detail::number_array(std::vector<double>(p.begin(), p.end())));
  }
  j[schema::kPoints] = std::move(pts);
  j[schema::kSource] = detail::source_to_json(e.source());
  return j;
}

// A missing "source" means the n-star.
inline Embedding embedding_from_json(const Json& j) {
  try {
    const std::size_t n = detail::read_size(detail::field(j, schema::kN));
    const std::size_t d = detail::read_size(detail::field(j, schema::kDim));
    const auto norm = detail::field(j, schema::kNorm).get<std::string>();
    if (norm != "l1" && norm != "l2") throw ParseError("norm must be \"l1\" or \"l2\"");
    const Json& pts = detail::field(j, schema::kPoints);
    if (!pts.is_array() || pts.size() != n) throw ParseError("points must hold n rows");
    std::vector<double> flat;
    for (const auto& row : pts) {
      auto r = detail::read_doubles(row);
      if (r.size() != d) throw ParseError("every point must have dim coordinates");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    MetricPtr src = j.contains(schema::kSource) ? detail::source_from_json(j.at(schema::kSource), n)
                                                : star_metric(n);
    return Embedding(src, d, norm == "l1" ? Norm::L1 : Norm::L2, std::move(flat));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad embedding: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad embedding: ") + e.what());
  }
}

// --- measure family -------------------------------------------------------------

inline Json family_to_json(const MeasureFamily& f) {
  Json j;
  j["k"] = f.ground_size();
  Json ms = Json::array();
  for (const auto& m : f) ms.push_back(detail::number_array(m.weights()));
  j["measures"] = std::move(ms);
  return j;
}

inline MeasureFamily family_from_json(const Json& j) {
  try {
    const std::size_t k = detail::read_size(detail::field(j, "k"));
    MeasureFamily f(k);
    for (const auto& row : detail::field(j, "measures")) {
      auto w = detail::read_doubles(row);
      if (w.size() != k) throw ParseError("measure length differs from k");
      f.push_back(FiniteMeasure(std::move(w)));
    }
    return f;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad family: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad family: ") + e.what());
  }
}

// --- certificate -------------------------------------------------------------

inline Json check_to_json(const Check& c) {
  return Json{{"name", c.name}, {"relation", relation_symbol(c.relation)},
              {"lhs", detail::number(c.lhs)}, {"rhs", detail::number(c.rhs)}, {"pass", c.pass}};
}

inline Json certificate_to_json(const PipelineCertificate& c) {
  Json j;
  j["eps"] = c.eps;
  j["entry_distortion"] = detail::number(c.entry_distortion);
  j["family_size"] = c.family_size;
  j["ground_size"] = c.ground_size;
  Json stages = Json::array();
  for (const auto& f : c.stages) stages.push_back(family_to_json(f));
  j["stages"] = std::move(stages);
  j["coordinate_set"] = c.coordinate_set;
  Json w = Json::array();
  for (const auto& [atom, members] : c.witnesses) w.push_back(Json{{"atom", atom}, {"members", members}});
  j["witnesses"] = std::move(w);
  j["restrictions"] = c.restrictions;
  j["heavy"] = c.heavy;
  j["kept"] = c.kept;
  j["truncations"] = c.truncations;
  Json checks = Json::array();
  for (const auto& ch : c.checks) checks.push_back(check_to_json(ch));
  j["checks"] = std::move(checks);
  return j;
}

inline PipelineCertificate certificate_from_json(const Json& j) {
  try {
    PipelineCertificate c;
    c.eps = detail::read_double(detail::field(j, "eps"));
    c.entry_distortion = detail::read_double(detail::field(j, "entry_distortion"));
    c.family_size = detail::read_size(detail::field(j, "family_size"));
    c.ground_size = detail::read_size(detail::field(j, "ground_size"));
    for (const auto& f : detail::field(j, "stages")) c.stages.push_back(family_from_json(f));
    c.coordinate_set = detail::read_indices(detail::field(j, "coordinate_set"));
    for (const auto& w : detail::field(j, "witnesses"))
      c.witnesses[detail::read_size(detail::field(w, "atom"))] = detail::read_indices(detail::field(w, "members"));
    for (const auto& r : detail::field(j, "restrictions")) c.restrictions.push_back(detail::read_indices(r));
    c.heavy = detail::read_indices(detail::field(j, "heavy"));
    c.kept = detail::read_indices(detail::field(j, "kept"));
    for (const auto& z : detail::field(j, "truncations")) c.truncations.push_back(detail::read_indices(z));
    for (const auto& ch : detail::field(j, "checks")) {
      Check x;
      x.name = detail::field(ch, "name").get<std::string>();
      x.relation = parse_relation(detail::field(ch, "relation").get<std::string>());
      x.lhs = detail::read_double(detail::field(ch, "lhs"));
      x.rhs = detail::read_double(detail::field(ch, "rhs"));
      x.pass = detail::field(ch, "pass").get<bool>();
      c.checks.push_back(std::move(x));
    }
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad certificate: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad certificate: ") + e.what());
  }
}

// --- kahane map, bounds --------------------------------------------------------

inline Json kahane_to_json(const KahaneMap& k) {
  return Json{{"eps", k.eps()},
              {"range", Json::array({k.lo(), k.hi()})},
              {"frequencies", k.frequencies()},
              {"amplitudes", k.amplitudes()},
              {"achieved_eps", k.achieved_eps()},
              {"min_scale", k.min_scale()},
              {"dim", k.dim()}};
}

inline KahaneMap kahane_from_json(const Json& j) {
  try {
    const auto range = detail::read_doubles(detail::field(j, "range"));
    if (range.size() != 2) throw ParseError("range must be [lo, hi]");
    return KahaneMap(detail::read_double(detail::field(j, "eps")), range[0], range[1],
                     detail::read_doubles(detail::field(j, "frequencies")),
                     detail::read_doubles(detail::field(j, "amplitudes")),
                     detail::read_double(detail::field(j, "achieved_eps")),
                     j.contains("min_scale") ? detail::read_double(j.at("min_scale")) : 0.0);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad kahane map: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad kahane map: ") + e.what());
  }
}

inline Json bound_report_to_json(const BoundReport& r) {
  return Json{{"n", r.n},
              {"eps", r.eps},
              {"d_lower", r.d_lower},
              {"branch", branch_name(r.branch)},
              {"family_size", r.family_size},
              {"support_bound", r.support_bound},
              {"log_count", r.log_count},
              {"support_constant", r.support_constant},
              {"packing_base", r.packing_base},
              {"note", r.note}};
}

}  // namespace l1lab
