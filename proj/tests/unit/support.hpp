#pragma once

#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/dataframe.hpp"
#include "json.hpp"

namespace testing_support {

inline const ardlkit::Frame& fixture() {
  static const ardlkit::Frame f = ardlkit::load_csv(std::string(ARDLKIT_TEST_DATA) + "/fixture.csv", "date");
  return f;
}

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(std::string(ARDLKIT_TEST_DATA) + "/oracles.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline Eigen::VectorXd col(const std::string& name) { return fixture().column(name).to_vector(); }

inline Eigen::VectorXd normals(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
  ardlkit::CounterRng rng(seed, stream);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

inline Eigen::VectorXd cumsum(const Eigen::VectorXd& e) {
  Eigen::VectorXd s(e.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) s(i) = acc += e(i);
  return s;
}

inline ardlkit::Series series(const Eigen::VectorXd& v, const std::string& name, ardlkit::MonthStamp start = {2000, 1}) {
  return ardlkit::Series(name, start, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace testing_support
