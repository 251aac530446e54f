// Copyright 2026 The schurstate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace schurstate::cli {

struct Options {
  std::string model;
  std::string observable;
  std::string observable_b;
  std::optional<std::string> region;
  std::optional<std::string> outer;
  std::string format = "json";
  std::optional<double> tol;
  double tail_tol = 1e-12;
  std::optional<int> tmax;
  std::optional<std::string> t_list;
  std::string strategies = "translate,random";
  std::string sizes = "1,2,4,8,16,32,64";
  int samples = 4;
  std::uint64_t seed = 1;
  int threads = 1;
  bool check_projectivity = false;
};

// Each command writes its report to `out` and returns the exit status for
// a completed run. Library errors propagate to the caller.
int check_kernel(const Options& o, std::ostream& out);
int eval(const Options& o, std::ostream& out);
int limit(const Options& o, std::ostream& out);
int homog(const Options& o, std::ostream& out);
int mixing_scan(const Options& o, std::ostream& out);
int selftest(const Options& o, std::ostream& out);

/// Sections of the self test, in report order.
nlohmann::json run_selftest(std::uint64_t seed, int threads);

std::vector<int> parse_int_list(const std::string& text, const char* what);

}  // namespace schurstate::cli
