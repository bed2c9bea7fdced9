#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kmc/finite_group.hpp"
#include "kmc/presentation.hpp"
#include "kmc/report.hpp"

namespace kmc {

struct CheckSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

// Line-oriented plain text:
//   ring Z/4
//   gcm [[2,-1],[-1,2]]        (or a type name: A2, B2, ...)
//   datum simply-connected     (or affine: gcm is the finite part)
//   cap 1000000
//   limit 200000
//   check parabolics J=1,2
// '#' starts a comment.
struct Scenario {
  std::string ring;
  std::string gcm;
  std::string datum = "simply-connected";
  std::size_t cap = default_group_cap;
  std::size_t limit = default_coset_limit;
  std::vector<CheckSpec> checks;

  static Scenario parse(std::string_view text);
  std::string to_text() const;
};

std::vector<std::string> const& check_names();

// Runs checks against one (GCM, ring), sharing the enumerated group and the
// twin datum between them.
class Runner {
 public:
  explicit Runner(Scenario const& s);
  ~Runner();

  CheckReport run(CheckSpec const& spec);
  Report run_all();

  // Tab-separated coset and chamber tables of the twin datum.
  std::string coset_tsv();
  std::string chambers_tsv(int sign);

 private:
  struct State;
  std::unique_ptr<State> st_;
};

// Exit status convention: 0 all pass, 1 a check failed, 2 usage or parse
// error, 3 a cap or overflow stopped the computation.
int exit_code_for(std::exception const& e);

}  // namespace kmc
