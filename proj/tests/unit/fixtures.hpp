#pragma once

#include <fstream>
#include <string>

#include "json.hpp"
#include "microspec/core.hpp"

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream f(std::string(MICROSPEC_FIXTURES) + "/oracle.json");
    return nlohmann::json::parse(f);
  }();
  return j;
}

inline microspec::cplx cvalue(const nlohmann::json& v) { return {v[0].get<double>(), v[1].get<double>()}; }

template <class F>
microspec::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const microspec::Error& e) {
    return e.code();
  }
  FAIL("no microspec::Error thrown");
  return microspec::ErrorCode::InvalidArgument;
}
