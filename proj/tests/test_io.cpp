#include <gtest/gtest.h>

#include <cstdio>
#include <string>

#include "l1lab/constructions.hpp"
#include "l1lab/io.hpp"
#include "support.hpp"

using namespace l1lab;

TEST(Canonical, SortedKeysAndSeventeenDigits) {
  Json j = {{"b", 0.1}, {"a", 1}, {"c", Json::array({true, "x", 1.5})}};
  EXPECT_EQ(to_canonical_string(j), R"({"a":1,"b":0.10000000000000001,"c":[true,"x",1.5]})");
  EXPECT_EQ(to_canonical_string(detail::number(std::numeric_limits<double>::infinity())), "\"inf\"");
}

TEST(Metric, RoundTripLowerTriangle) {
  auto m = kary_tree_metric(2, 2);
  const Json j = metric_to_json(*m);
  EXPECT_EQ(j["dist"].size(), 21u);
  EXPECT_EQ(j["dist"][0].get<double>(), 1.0);  // d(1,0)
  EXPECT_EQ(*metric_from_json(j), *m);
  Json bad = j;
  bad["dist"].erase(0);
  EXPECT_THROW(metric_from_json(bad), ParseError);
  auto labeled = std::make_shared<const FiniteMetricSpace>(2, std::vector<double>{0, 3, 3, 0},
                                                           std::vector<std::string>{"x", "y"});
  EXPECT_EQ(*metric_from_json(metric_to_json(*labeled)), *labeled);
}

TEST(Embedding, RoundTripKeepsSource) {
  const auto star = random_sparse_star_embedding(10, 24, 6, 3);
  const auto s2 = embedding_from_json(embedding_to_json(star));
  EXPECT_EQ(s2.coordinates(), star.coordinates());
  EXPECT_TRUE(s2.source().is_star());
  EXPECT_EQ(embedding_to_json(star)["source"]["kind"], "star");

  const auto tree = tree_code_embedding(3, 2, 12, 0.1, 1);
  const Json tj = embedding_to_json(tree);
  EXPECT_EQ(tj["source"]["kind"], "kary_tree");
  EXPECT_EQ(tj["source"]["k"], 3);
  const auto t2 = embedding_from_json(tj);
  EXPECT_EQ(t2.source(), tree.source());

  const auto u = equilateral_set(4);
  const auto u2 = embedding_from_json(embedding_to_json(u));
  EXPECT_EQ(u2.source(), u.source());
  EXPECT_EQ(embedding_to_json(u)["source"]["kind"], "metric");
}

TEST(Embedding, MissingSourceMeansStar) {
  const Json j = Json::parse(R"({"n":3,"dim":1,"norm":"l1","points":[[0],[1],[-1]]})");
  const auto e = embedding_from_json(j);
  EXPECT_TRUE(e.source().is_star());
  EXPECT_EQ(distortion(e), 1.0);
}

TEST(Embedding, ParseErrors) {
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"n":3,"dim":1,"norm":"l1","points":[[0],[1]]})")), ParseError);
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"n":2,"dim":1,"norm":"linf","points":[[0],[1]]})")), ParseError);
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"n":2,"dim":2,"norm":"l1","points":[[0],[1]]})")), ParseError);
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"dim":1,"norm":"l1","points":[[0],[1]]})")), ParseError);
  EXPECT_THROW(embedding_from_json(Json::parse(R"({"n":2,"dim":1,"norm":"l1","points":[[0],["a"]]})")), ParseError);
  EXPECT_THROW(parse_json_text("{not json"), ParseError);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), ParseError);
}

TEST(Family, RoundTrip) {
  MeasureFamily f(3, {FiniteMeasure({0.25, 0.75, 0}), FiniteMeasure({0.1, 0.2, 0.7})});
  EXPECT_EQ(family_from_json(family_to_json(f)), f);
  EXPECT_THROW(family_from_json(Json::parse(R"({"k":2,"measures":[[1]]})")), ParseError);
  EXPECT_THROW(family_from_json(Json::parse(R"({"k":2,"measures":[[1,-1]]})")), ParseError);
}

TEST(Certificate, RoundTripVerifiesAndIsByteStable) {
  const auto c = run_pipeline(fixtures::perturbed_star(24, 23, 0.05, 2, 8.0), 0.05);
  const std::string text = to_canonical_string(certificate_to_json(c));
  const auto back = certificate_from_json(parse_json_text(text));
  EXPECT_EQ(back, c);
  EXPECT_TRUE(verify_certificate(back).ok);
  EXPECT_EQ(to_canonical_string(certificate_to_json(back)), text);
  const auto again = run_pipeline(fixtures::perturbed_star(24, 23, 0.05, 2, 8.0), 0.05);
  EXPECT_EQ(to_canonical_string(certificate_to_json(again)), text);
}

TEST(Certificate, CheckFieldsPresent) {
  const auto c = run_pipeline(basis_star_embedding(5, 4), 0.05);
  const Json j = certificate_to_json(c);
  for (const auto& ch : j["checks"]) {
    EXPECT_TRUE(ch.contains("name"));
    EXPECT_TRUE(ch.contains("lhs"));
    EXPECT_TRUE(ch.contains("rhs"));
    EXPECT_TRUE(ch.contains("pass"));
    EXPECT_TRUE(ch.contains("relation"));
  }
  EXPECT_EQ(j["stages"].size(), 4u);
}

TEST(Kahane, RoundTrip) {
  const auto k = kahane_map(0.1, 0.0, 2.0);
  const auto k2 = kahane_from_json(kahane_to_json(k));
  EXPECT_EQ(k2.frequencies(), k.frequencies());
  EXPECT_EQ(k2.amplitudes(), k.amplitudes());
  EXPECT_EQ(k2.achieved_eps(), k.achieved_eps());
  EXPECT_EQ(k2.lo(), 0.0);
  EXPECT_EQ(k2.hi(), 2.0);
  const Json j = kahane_to_json(k);
  for (const char* key : {"eps", "range", "frequencies", "amplitudes", "achieved_eps"}) EXPECT_TRUE(j.contains(key));
}

TEST(Bounds, ReportJson) {
  const Json j = bound_report_to_json(evaluate_lower_bound(1u << 20, 0.05));
  EXPECT_EQ(j["branch"], "counting-case");
  EXPECT_EQ(j["note"], "as-stated constants, not optimized");
  EXPECT_EQ(j["d_lower"], evaluate_lower_bound(1u << 20, 0.05).d_lower);
}

TEST(Files, WriteAndRead) {
  const std::string path = ::testing::TempDir() + "l1lab_io_test.json";
  const Json j = embedding_to_json(basis_star_embedding(4, 3));
  write_json_file(path, j);
  EXPECT_EQ(read_json_file(path), j);
  std::remove(path.c_str());
}
