#pragma once

#include "hmfq/kernel.hpp"

namespace hmfq {

// Parsed scenario configuration.  Every module-level precondition is checked
// up front; violations are collected (not thrown) so a config error lists
// everything at once.
struct ScenarioConfig {
  // field
  std::string field = "Q";
  long long quad_d = 0;
  long long prime_bound = 4000;
  // CM data
  bool has_cm = false;
  Elem delta;
  long long declared_D_norm = 0;  // 0 = not declared
  // level, prime, precision
  std::string level_spec = "1";
  long long p = 0;
  int precision = 0;
  // character
  std::string character_type = "trivial";  // trivial | epsilon | class
  std::vector<long long> class_gen;        // (a, b, c) of a generator form
  int class_k = 0, class_m = 1;
  // bounds
  long long ideal_norm_bound = 100;
  int tree_depth = 6;
  long long tree_q = 2;
  int tree_k = 0;
  // constant term
  std::string a0_source = "omitted";  // bernoulli | supplied | omitted
  std::string a0_value = "0";
  // run control
  std::string output_dir = ".";
  int parallelism = 0;
  int weight = 1;

  std::string raw_text;  // canonicalized source for hashing

  static ScenarioConfig parse_file(const std::string& path);
  static ScenarioConfig parse_text(const std::string& text);

  std::shared_ptr<const BaseField> build_field() const;
  std::shared_ptr<const CMExtension> build_cm(std::shared_ptr<const BaseField> F) const;
  IdealF build_level(const BaseField& F) const;
  KernelScenario build_kernel_scenario() const;
  // every violated precondition, empty when the scenario is usable
  std::vector<std::string> validate() const;

  std::string config_hash() const;
};

std::string fnv1a_hex(const std::string& data);

}  // namespace hmfq
