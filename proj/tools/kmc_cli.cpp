#include <fmt/format.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kmc/errors.hpp"
#include "kmc/scenario.hpp"

namespace {

struct Options {
  std::string report_path;
  std::string dump_prefix;
  bool seedless = false;
  bool timing = false;
  bool brief = false;  // drop details from the report
};

void write_file(std::string const& path, std::string const& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kmc::ParseError("cannot write " + path);
  out << text;
}

int run_scenario(kmc::Scenario const& sc, Options const& opt) {
  auto strip = [&](kmc::Report r) {
    if (opt.brief) {
      for (auto& c : r.checks) c.details = kmc::Json::object();
    }
    return r;
  };
  kmc::Runner runner(sc);
  kmc::Report rep = strip(runner.run_all());
  if (opt.seedless) {
    kmc::Runner again(sc);
    auto second = strip(again.run_all());
    if (second.dump() != rep.dump()) {
      kmc::CheckReport d;
      d.check = "determinism";
      d.fail(kmc::Json{{"description", "two runs produced different reports"}});
      rep.checks.push_back(d);
    }
  }
  for (auto const& c : rep.checks) fmt::print("{}\n", c.summary());
  if (!opt.dump_prefix.empty()) {
    write_file(opt.dump_prefix + ".cosets.tsv", runner.coset_tsv());
    write_file(opt.dump_prefix + ".plus.tsv", runner.chambers_tsv(1));
    write_file(opt.dump_prefix + ".minus.tsv", runner.chambers_tsv(-1));
  }
  if (!opt.report_path.empty()) write_file(opt.report_path, rep.dump(opt.timing));
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kac-Moody groups over local rings: desk-scale verifications"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--report", opt.report_path, "write the JSON report here ('-' for stdout)");
  app.add_flag("--seedless", opt.seedless, "run twice and require identical reports");
  app.add_flag("--timing", opt.timing, "include wall-clock millis in the report");
  app.add_option("--dump-tsv", opt.dump_prefix, "write coset and chamber tables (twin checks)");

  kmc::Scenario sc;
  std::size_t cap = kmc::default_group_cap, limit = kmc::default_coset_limit;
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--cap", cap, "group enumeration cap")->check(CLI::PositiveNumber);
    sub->add_option("--limit", limit, "coset table limit")->check(CLI::PositiveNumber);
  };

  auto* roots = app.add_subcommand("roots", "list real roots");
  std::string gcm;
  int height = 0;
  roots->add_option("gcm", gcm, "GCM literal or type name")->required();
  roots->add_option("--height", height, "height bound")->check(CLI::PositiveNumber);

  auto* ring = app.add_subcommand("ring", "describe a ring");
  std::string ring_lit;
  bool info = false;
  ring->add_option("literal", ring_lit, "ring literal")->required();
  ring->add_flag("--info", info, "show residue field, units and quotient fields");
  ring->add_option("--gcm", gcm, "also report condition (co) for this GCM");

  auto* verify = app.add_subcommand("verify", "run one verification");
  std::string check, datum = "simply-connected", J, index, axiom;
  verify->add_option("check", check, "check name")
      ->required()
      ->check(CLI::IsMember(kmc::check_names()));
  verify->add_option("--gcm", gcm, "GCM literal or type name")->required();
  verify->add_option("--ring", ring_lit, "ring literal")->required();
  verify->add_option("--datum", datum, "simply-connected or affine");
  verify->add_option("--J", J, "index set for parabolics, e.g. 1,2");
  verify->add_option("--i", index, "index for levi");
  verify->add_option("--axiom", axiom, "TCS axioms to check, e.g. 3");
  add_limits(verify);

  auto* bez = app.add_subcommand("decompose-bezout", "factor a 2x2 rational matrix over Z_(p)");
  int prime = 0;
  std::vector<std::string> matrix;
  bez->add_option("--prime", prime, "prime p")->required();
  bez->add_option("--matrix", matrix, "entries p q r s (rationals a/b)")->required()->expected(1, 4);

  auto* loop = app.add_subcommand("loop-embed", "check the loop embedding of an affine GCM");
  loop->add_option("--gcm", gcm, "finite-type GCM of the loop group")->required();
  loop->add_option("--ring", ring_lit, "ring literal")->required();

  auto* scen = app.add_subcommand("scenario", "run a scenario file");
  std::string scen_path;
  scen->add_option("file", scen_path, "scenario file")->required()->check(CLI::ExistingFile);
  add_limits(scen);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (roots->parsed()) {
      sc.gcm = gcm;
      kmc::CheckSpec c{"roots", {}};
      if (height > 0) c.params["height"] = std::to_string(height);
      sc.checks.push_back(c);
    } else if (ring->parsed()) {
      sc.ring = ring_lit;
      sc.gcm = gcm;
      sc.checks.push_back({"ring-info", {}});
      opt.brief = !info;
    } else if (verify->parsed()) {
      sc.gcm = gcm;
      sc.ring = ring_lit;
      sc.datum = datum;
      sc.cap = cap;
      sc.limit = limit;
      kmc::CheckSpec c{check, {}};
      if (!J.empty() || verify->count("--J")) c.params["J"] = J.empty() ? "none" : J;
      if (!index.empty()) c.params["i"] = index;
      if (!axiom.empty()) c.params["axiom"] = axiom;
      sc.checks.push_back(c);
    } else if (bez->parsed()) {
      std::string m;
      for (auto const& e : matrix) m += (m.empty() ? "" : ",") + e;
      sc.checks.push_back({"decompose-bezout", {{"prime", std::to_string(prime)}, {"matrix", m}}});
    } else if (loop->parsed()) {
      sc.gcm = gcm;
      sc.ring = ring_lit;
      sc.datum = "affine";
      sc.checks.push_back({"loop-embed", {}});
    } else if (scen->parsed()) {
      std::ifstream in(scen_path);
      std::stringstream buf;
      buf << in.rdbuf();
      sc = kmc::Scenario::parse(buf.str());
      if (scen->count("--cap")) sc.cap = cap;
      if (scen->count("--limit")) sc.limit = limit;
    }
    return run_scenario(sc, opt);
  } catch (kmc::Error const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    int code = kmc::exit_code_for(e);
    if (!opt.report_path.empty()) {
      kmc::Json j{{"verdict", "error"}, {"exit", code}, {"error", e.what()}};
      try {
        write_file(opt.report_path, j.dump(2) + "\n");
      } catch (std::exception const&) {
      }
    }
    return code;
  } catch (std::exception const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
