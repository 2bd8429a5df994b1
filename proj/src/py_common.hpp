#pragma once

#include <cstdint>
#include <string>

#include "gtt/grades.hpp"
#include "gtt/typecheck.hpp"
#include "gtt/usage.hpp"

namespace gttpy {

// One bundle of instance/discipline options shared by every exposed
// operation, built once per call from the python keyword arguments.
struct Opts {
  gtt::Modality m;
  gtt::Restrictions rs;
  bool moded = false;
  gtt::CheckConfig cc;
  std::uint64_t fuel = 0;  // resolved: never 0
};

// Validates and resolves the option set; throws ValueError on bad input.
Opts make_opts(const std::string& modality, const std::string& nr,
               const std::string& mode, bool erased_matches,
               bool emptyrec_zero, const std::string& pisigma,
               std::uint64_t fuel);

}  // namespace gttpy
