#pragma once

#include <string>

#ifndef NBSEL_FIXTURE_DIR
#error "NBSEL_FIXTURE_DIR must point at tests/fixtures"
#endif

inline std::string fixture(const std::string& name) {
  return std::string(NBSEL_FIXTURE_DIR) + "/" + name;
}
