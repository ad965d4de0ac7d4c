// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfm/certify.hpp"
#include "sfm/io.hpp"
#include "sfm/minimize.hpp"

using nlohmann::json;
using namespace sfm;

namespace {

struct Common {
  std::string instance_path;
  std::string cert_path;
  std::string out_path;
  std::string engine = "cuttingplane";
  std::uint64_t budget = kDefaultEnumBudget;
  std::uint64_t seed = 0;
  bool trace = false;
  int jobs = 1;
};

Engine parse_engine(const std::string& s) {
  if (s == "cuttingplane") return Engine::cuttingplane;
  if (s == "ellipsoid") return Engine::ellipsoid;
  throw Error("unknown engine: " + s);
}

json base_report(const std::string& command, const Common& c, const std::string& instance_text) {
  json j;
  j["command"] = command;
  j["instance_digest"] = instance_text.empty() ? "" : digest_hex(instance_text);
  j["engine"] = c.engine;
  j["seed"] = c.seed;
  return j;
}

void finish(json& report, const OracleFunction* f,
            std::chrono::steady_clock::time_point start) {
  if (f) report["oracle_calls"] = f->call_count();
  const auto dt = std::chrono::steady_clock::now() - start;
  report["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
  std::cout << report.dump(2) << std::endl;
}

int run(const std::string& cmd, const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  std::string instance_text;
  TabulatedFunction table;
  OracleFunction f;
  if (cmd != "generate") {
    if (c.instance_path.empty()) {
      std::cerr << "error: --instance is required\n";
      return 2;
    }
    instance_text = read_file(c.instance_path);
    table = instance_from_json(instance_text);
    f = table.oracle();
  }
  json report = base_report(cmd, c, instance_text);

  if (cmd == "minimize") {
    PipelineStats stats;
    if (c.trace) stats.trace = &std::cerr;
    MinimizeOptions opt;
    opt.engine = parse_engine(c.engine);
    opt.dense_budget = c.budget;
    opt.stats = &stats;
    opt.emit_dual = !c.out_path.empty();
    MinimizeResult res = minimize(f, opt);
    report["min"] = res.min;
    report["argmin"] = tuple_to_string(res.argmin);
    report["decisions"] = stats.decisions;
    report["improve_steps"] = stats.improve_steps;
    report["max_gap_jump"] = stats.max_gap_jump;
    if (res.dual) write_file(c.out_path, vector_to_json(*res.dual));
    std::cerr << "min " << res.min << " at " << tuple_to_string(res.argmin) << " ("
              << stats.decisions << " decisions, " << stats.improve_steps << " improve steps)\n";
    finish(report, &f, start);
    return 0;
  }
  if (cmd == "brute") {
    auto [m, t] = brute_min(f, c.budget, c.jobs);
    report["min"] = m;
    report["argmin"] = tuple_to_string(t);
    std::cerr << "brute min " << m << " at " << tuple_to_string(t) << "\n";
    finish(report, &f, start);
    return 0;
  }
  if (cmd == "greedy") {
    if (f(LatticeTuple::all_bottom(f.n(), f.k())) < 0) {
      std::cerr << "error: greedy requires f(0) >= 0\n";
      return 1;
    }
    GreedyResult g = greedy_base(f);
    json entries = json::array();
    for (int i = 0; i < g.vector.n; ++i)
      for (int a = 1; a <= g.vector.k; ++a)
        entries.push_back({i, "a" + std::to_string(a), format_rat(g.vector.at(i, a))});
    report["vector"] = entries;
    report["dual_bound"] = dual_lower_bound(normalize(f));
    if (!c.out_path.empty()) save_vector(g.vector, c.out_path);
    std::cerr << "greedy base vector computed; dual bound " << report["dual_bound"] << "\n";
    finish(report, &f, start);
    return 0;
  }
  if (cmd == "certify") {
    Certificate cert = prove(f, c.budget);
    if (c.out_path.empty()) {
      std::cerr << "error: certify requires --out\n";
      return 2;
    }
    write_file(c.out_path, serialize(cert));
    report["claimed_min"] = cert.claimed_min;
    report["witness"] = tuple_to_string(cert.witness);
    std::cerr << "certificate written to " << c.out_path << " (claimed_min "
              << cert.claimed_min << " for the normalized instance)\n";
    finish(report, &f, start);
    return 0;
  }
  if (cmd == "verify") {
    if (c.cert_path.empty()) {
      std::cerr << "error: verify requires --cert\n";
      return 2;
    }
    Certificate cert;
    try {
      cert = deserialize(read_file(c.cert_path));
    } catch (const Error& e) {
      std::cerr << "malformed certificate: " << e.what() << "\n";
      return 2;
    }
    VerifyResult vr = verify(cert, f);
    report["accept"] = vr.accept;
    if (!vr.accept) {
      report["failed_check"] = vr.failed_check;
      report["reason"] = vr.reason;
    }
    std::cerr << (vr.accept ? "certificate accepted\n"
                            : "certificate rejected: " + vr.reason + "\n");
    finish(report, &f, start);
    if (!vr.accept) return vr.failed_check == 0 ? 2 : 1;
    return 0;
  }
  if (cmd == "check") {
    SubmodularityReport rep = is_submodular(f, c.budget);
    report["submodular"] = rep.submodular;
    report["strictly_submodular"] = rep.strictly_submodular;
    if (rep.witness) {
      report["witness"] = {tuple_to_string(rep.witness->first), tuple_to_string(rep.witness->second)};
      std::cerr << "not submodular: violated at (" << tuple_to_string(rep.witness->first) << ", "
                << tuple_to_string(rep.witness->second) << ")\n";
    } else {
      std::cerr << "submodular" << (rep.strictly_submodular ? " (strictly)" : "") << "\n";
    }
    finish(report, &f, start);
    return rep.submodular ? 0 : 1;
  }
  throw Error("unknown command: " + cmd);
}

int run_generate(const Common& c, int n, int k, long long bound) {
  const auto start = std::chrono::steady_clock::now();
  TabulatedFunction t = random_submodular(n, k, bound, c.seed);
  const std::string text = instance_to_json(t);
  if (!c.out_path.empty()) write_file(c.out_path, text);
  else std::cout << text;
  json report = base_report("generate", c, text);
  report["n"] = n;
  report["k"] = k;
  report["bound"] = bound;
  std::cerr << "generated instance n=" << n << " k=" << k << " seed=" << c.seed << "\n";
  if (!c.out_path.empty()) finish(report, nullptr, start);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular function minimization over diamond lattice products"};
  app.require_subcommand(1);
  Common c;
  int gen_n = 2, gen_k = 3;
  long long gen_bound = 10;

  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    if (needs_instance) sub->add_option("--instance", c.instance_path, "instance JSON file");
    sub->add_option("--out", c.out_path, "output file");
    sub->add_option("--engine", c.engine, "cuttingplane|ellipsoid");
    sub->add_option("--budget", c.budget, "dense enumeration budget");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--jobs", c.jobs, "worker threads for brute-force scans");
    sub->add_flag("--trace", c.trace, "dump per-iteration vertices and chains to stderr");
  };

  for (const char* name : {"minimize", "brute", "greedy", "check", "certify"})
    add_common(app.add_subcommand(name), true);
  {
    CLI::App* v = app.add_subcommand("verify");
    add_common(v, true);
    v->add_option("--cert", c.cert_path, "certificate JSON file");
  }
  {
    CLI::App* g = app.add_subcommand("generate");
    add_common(g, false);
    g->add_option("--n", gen_n, "coordinates");
    g->add_option("--k", gen_k, "atoms per diamond");
    g->add_option("--bound", gen_bound, "max |f|");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "generate") return run_generate(c, gen_n, gen_k, gen_bound);
    return run(cmd, c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
