// Copyright 2026 The Authors.
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


// cbgt: generate instances, build and check schedules, reduce to pinwheel
// scheduling, and run the acceptance benchmark. All input and output is
// JSON; "-" means stdin/stdout.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cbgt/bench.hpp"
#include "cbgt/cbgt.hpp"

namespace {

using namespace cbgt;

// Exit codes.
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;
constexpr int kFailure = 3;

class Violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  if (path == "-") return parse_json(std::cin, "stdin");
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return parse_json(in, path);
}

void write_json(const Json& j, const std::string& path) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << "\n";
}

CbgtInstance read_instance(const std::string& path) {
  Json j = read_json(path);
  if (j.contains("instance") && !j.contains("system")) return instance_from_json(j.at("instance"));
  return instance_from_json(j);
}

// A schedule document is either {"instance", "schedule", ...} or a bare
// schedule; --instance supplies or overrides the instance.
std::pair<CbgtInstance, Schedule> read_scheduled(const std::string& path, const std::string& instance_path) {
  Json j = read_json(path);
  Schedule s = j.contains("schedule") ? schedule_from_json(j.at("schedule")) : schedule_from_json(j);
  if (!instance_path.empty()) return {read_instance(instance_path), s};
  if (!j.contains("instance")) throw ParseError(path + ": no embedded instance; pass --instance");
  return {instance_from_json(j.at("instance")), s};
}

Json scheduled_doc(const CbgtInstance& inst, const Schedule& s, Json info) {
  Json out = Json::object();
  out["instance"] = instance_to_json(inst);
  out["schedule"] = schedule_to_json(s);
  out["info"] = std::move(info);
  return out;
}

std::int64_t default_horizon(const Schedule& s, std::int64_t requested) {
  if (requested > 0) return requested;
  auto len = static_cast<std::int64_t>(s.length());
  return s.periodic ? 2 * len : len;
}

Rational parse_rational_arg(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const DomainError& e) {
    throw DomainError("bad rational '" + s + "': " + e.what());
  }
}

// First (day, element) at which the height reaches `bound`.
std::optional<std::pair<std::int64_t, std::size_t>> first_height_at_least(const CbgtInstance& inst, const Schedule& s,
                                                                          std::int64_t horizon, const Rational& bound) {
  std::vector<Rational> h(inst.size());
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const auto& cut = s.at(static_cast<std::size_t>(t));
    for (std::size_t e = 0; e < inst.size(); ++e) {
      h[e] += inst.growth()[e];
      if (h[e] >= bound) return std::make_pair(t, e);
      if (contains(cut, static_cast<ElementId>(e))) h[e] = 0;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::int64_t, std::size_t>> first_discrepancy_at_least_one(const CbgtInstance& inst,
                                                                                  const Schedule& s,
                                                                                  std::int64_t horizon) {
  std::vector<std::int64_t> count(inst.size(), 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const auto& cut = s.at(static_cast<std::size_t>(t));
    for (std::size_t e = 0; e < inst.size(); ++e) {
      if (contains(cut, static_cast<ElementId>(e))) ++count[e];
      if (abs(Rational(t) * inst.growth()[e] - Rational(count[e])) >= 1) return std::make_pair(t, e);
    }
  }
  return std::nullopt;
}

struct Globals {
  std::string input = "-";
  std::string output = "-";
  std::uint64_t seed = 1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial bamboo garden trimming: schedulers, simulator and pinwheel tools"};
  app.require_subcommand(1);
  Globals g;

  // generate
  auto* gen = app.add_subcommand("generate", "Write an instance");
  gen->require_subcommand(1);
  int gen_k = 2;
  std::string eps = "1/4";
  std::string kind = "uniform";
  RandomParams rp;
  auto* gen_bin = gen->add_subcommand("binomial", "Lower-bound instance on all k-subsets of [2k]");
  gen_bin->add_option("--k", gen_k, "k (1..6)")->capture_default_str();
  auto* gen_cube = gen->add_subcommand("hypercube", "Lower-bound instance on F_2^k \\ {0}");
  gen_cube->add_option("--k", gen_k, "k (1..5)")->capture_default_str();
  auto* gen_pair = gen->add_subcommand("pair", "1-uniform rates 1-eps, eps");
  gen_pair->add_option("--eps", eps, "eps in (0, 1)")->capture_default_str();
  auto* gen_rand = gen->add_subcommand("random", "Random instance with a witness");
  std::vector<std::string> kinds;
  for (const auto& [name, _] : random_kind_names()) kinds.push_back(name);
  gen_rand->add_option("--kind", kind, "System kind")->check(CLI::IsMember(kinds))->capture_default_str();
  gen_rand->add_option("--n", rp.n, "Elements")->capture_default_str();
  gen_rand->add_option("--k", rp.k, "Rank of a uniform system")->capture_default_str();
  gen_rand->add_option("--vertices", rp.vertices, "Graphic vertices, 0 = random")->capture_default_str();
  gen_rand->add_option("--denominator", rp.denominator, "Witness denominator, 0 = random")->capture_default_str();
  gen_rand->add_option("--terms", rp.terms, "Witness terms, 0 = random")->capture_default_str();
  gen_rand->add_option("--seed", g.seed, "Seed")->capture_default_str();
  for (auto* sc : {gen_bin, gen_cube, gen_pair, gen_rand}) sc->add_option("-o,--output", g.output, "Output file");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Build a schedule for an instance");
  sched->require_subcommand(1);
  std::string mode = "efficient";
  double c = kDefaultSpeedC;
  std::int64_t days = 0;
  std::int64_t max_product = ExactOptions{}.max_product;
  auto* s_fun = sched->add_subcommand("fun", "Fuse-Unfuse (uniform and partition systems)");
  auto* s_color = sched->add_subcommand("color", "Rainbow coloring plus Fuse-Unfuse (graphic and laminar systems)");
  auto* s_exact = sched->add_subcommand("exact", "Matroid intersection schedule with discrepancy below 1");
  s_exact->add_option("--max-product", max_product, "Budget on |E| T")->capture_default_str();
  auto* s_gen = sched->add_subcommand("general", "Schedules for arbitrary set systems");
  s_gen->add_option("--mode", mode, "efficient, existential, greedy or reduce-max")
      ->check(CLI::IsMember({"efficient", "existential", "greedy", "reduce-max"}))
      ->capture_default_str();
  s_gen->add_option("--c", c, "Speed threshold constant (> 2)")->capture_default_str();
  s_gen->add_option("--seed", g.seed, "Seed for the existential mode")->capture_default_str();
  s_gen->add_option("--days", days, "Days to emit, default 20n");
  for (auto* sc : {s_fun, s_color, s_exact, s_gen}) {
    sc->add_option("-i,--input", g.input, "Instance file")->capture_default_str();
    sc->add_option("-o,--output", g.output, "Output file");
  }

  // simulate / verify
  std::string instance_path;
  std::int64_t horizon = 0;
  std::string bound = "height2";
  auto* sim = app.add_subcommand("simulate", "Replay a schedule and report heights and discrepancies");
  auto* ver = app.add_subcommand("verify", "Check a schedule against a height or discrepancy bound");
  ver->add_option("--bound", bound, "height2, height4, disc1 or log")
      ->check(CLI::IsMember({"height2", "height4", "disc1", "log"}))
      ->capture_default_str();
  for (auto* sc : {sim, ver}) {
    sc->add_option("-i,--input", g.input, "Schedule file")->capture_default_str();
    sc->add_option("--instance", instance_path, "Instance file, if the schedule does not embed one");
    sc->add_option("--horizon", horizon, "Days to replay, default two periods or the schedule length");
    sc->add_option("-o,--output", g.output, "Output file");
  }

  // pinwheel
  auto* pin = app.add_subcommand("pinwheel", "Pinwheel scheduling layer");
  pin->require_subcommand(1);
  std::string target = "2";
  std::string cps_path;
  bool force_lp = false;
  std::uint64_t max_states = 10'000'000;
  auto* p_reduce = pin->add_subcommand("reduce", "a(e) = floor(c / g(e)) for an instance");
  p_reduce->add_option("--c", target, "Target height")->capture_default_str();
  auto* p_verify = pin->add_subcommand("verify", "Check a schedule against pinwheel periods");
  p_verify->add_option("--cps", cps_path, "Pinwheel instance file")->required();
  auto* p_decide = pin->add_subcommand("decide", "Exhaustive schedulability search");
  p_decide->add_option("--max-states", max_states, "State budget")->capture_default_str();
  auto* p_density = pin->add_subcommand("density", "Fractional density and its certificate");
  p_density->add_flag("--force-lp", force_lp, "Solve the LP even where a closed form exists");
  for (auto* sc : {p_reduce, p_verify, p_decide, p_density}) {
    sc->add_option("-i,--input", g.input, "Input file")->capture_default_str();
    sc->add_option("-o,--output", g.output, "Output file");
  }

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run the acceptance corpus");
  bench::Options bopt;
  bool quick = false;
  bench_cmd->add_option("--seed", bopt.seed, "Corpus seed")->capture_default_str();
  bench_cmd->add_flag("--quick", quick, "One tenth of the random instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      CbgtInstance inst = [&] {
        if (*gen_bin) return gen_binomial_lb(gen_k);
        if (*gen_cube) return gen_hypercube_lb(gen_k);
        if (*gen_pair) return gen_tight_pair(parse_rational_arg(eps));
        return gen_random_normalized(parse_random_kind(kind), rp, g.seed);
      }();
      write_json(instance_to_json(inst), g.output);
      return kOk;
    }

    if (*sched) {
      auto inst = read_instance(g.input);
      Json info = Json::object();
      Schedule s;
      if (*s_fun) {
        auto stream = fun_schedule(inst);
        s = stream.one_period();
        info["algorithm"] = "fuse-unfuse";
        Json trees = Json::array();
        for (const auto& f : stream.forests()) {
          for (int r : f.roots()) trees.push_back({{"tree", f.describe(r, inst.labels())}, {"rate", rational_to_json(f.node(r).rate)}});
        }
        info["trees"] = trees;
      } else if (*s_color) {
        auto coloring = color_instance(inst);
        s = colored_schedule(inst, coloring).one_period();
        info["algorithm"] = "rainbow coloring + fuse-unfuse";
        Json classes = Json::array();
        for (std::size_t i = 0; i < coloring.classes.size(); ++i) {
          Json members = Json::array();
          for (ElementId e : coloring.classes[i]) members.push_back(inst.labels()[e]);
          classes.push_back({{"members", members}, {"growth", rational_to_json(coloring.class_growth[i])}});
        }
        info["classes"] = classes;
      } else if (*s_exact) {
        ExactOptions opt;
        opt.max_product = max_product;
        auto res = exact_schedule(inst, opt);
        s = res.schedule;
        info["algorithm"] = "matroid intersection";
        info["period"] = res.period;
        info["max_height"] = rational_to_json(res.report.max_height);
        info["max_discrepancy"] = rational_to_json(*res.normalized_report.max_discrepancy());
        info["bases_tried"] = res.attempts;
      } else {
        const auto n = static_cast<std::int64_t>(inst.size());
        const auto len = static_cast<std::size_t>(days > 0 ? days : 20 * std::max<std::int64_t>(n, 1));
        info["algorithm"] = mode;
        if (mode == "reduce-max") {
          auto stream = reduce_max_greedy(inst);
          s = take(stream, len);
        } else if (mode == "greedy") {
          auto split = split_by_speed(inst, c);
          auto state = initial_potential_state(inst);
          s.core.reserve(len);
          for (std::size_t i = 0; i < len; ++i) s.core.push_back(greedy_potential_step(inst, split, state));
          info["c"] = c;
        } else {
          auto stream = interleaved_schedule(
              inst, mode == "efficient" ? InterleaveMode::kEfficient : InterleaveMode::kExistential, c, g.seed);
          s = take(stream, len);
          info["c"] = c;
          info["fast"] = stream.split().fast.size();
          info["slow"] = stream.split().slow.size();
          if (mode == "existential") info["block_draws"] = stream.fast_block().draws;
        }
        s.periodic = false;
      }
      write_json(scheduled_doc(inst, s, std::move(info)), g.output);
      return kOk;
    }

    if (*sim) {
      auto [inst, s] = read_scheduled(g.input, instance_path);
      auto rep = simulate(inst, s, default_horizon(s, horizon));
      write_json(report_to_json(rep, inst.labels()), g.output);
      return rep.valid ? kOk : kViolation;
    }

    if (*ver) {
      auto [inst, s] = read_scheduled(g.input, instance_path);
      const auto h = default_horizon(s, horizon);
      auto rep = simulate(inst, s, h);
      Json out = Json::object();
      out["bound"] = bound;
      out["horizon"] = h;
      out["exact"] = rep.exact;
      out["max_height"] = rational_to_json(rep.max_height);
      auto d = rep.max_discrepancy();
      out["max_discrepancy"] = d ? rational_to_json(*d) : Json("unbounded");
      std::string failure;
      if (!rep.valid) {
        failure = "day " + std::to_string(*rep.first_invalid_step) + " cuts a dependent set";
      } else if (bound == "disc1") {
        if (!d || *d >= 1) {
          auto at = first_discrepancy_at_least_one(inst, s, h);
          failure = at ? "element " + inst.labels()[at->second] + " reaches discrepancy 1 on day " + std::to_string(at->first)
                       : "discrepancy is unbounded (cut counts drift each period)";
        }
      } else {
        const bool strict = bound != "log";
        double log_bound = 8 * std::log(static_cast<double>(std::max<std::size_t>(inst.size(), 1)));
        Rational limit = bound == "height2" ? Rational(2) : bound == "height4" ? Rational(4) : Rational(0);
        bool over = strict ? rep.max_height >= limit : to_double(rep.max_height) > log_bound;
        if (bound == "log") out["limit"] = log_bound;
        if (over) {
          // The first day the offending height occurs in the replay.
          Rational reach = strict ? limit : rep.max_height;
          auto at = first_height_at_least(inst, s, std::max<std::int64_t>(h, 2 * static_cast<std::int64_t>(s.length())), reach);
          failure = "height " + to_string(rep.max_height) + " violates " + bound;
          if (at) failure += ": element " + inst.labels()[at->second] + " on day " + std::to_string(at->first);
        }
      }
      out["pass"] = failure.empty();
      if (!failure.empty()) out["violation"] = failure;
      write_json(out, g.output);
      if (!failure.empty()) {
        std::cerr << "violation: " << failure << "\n";
        return kViolation;
      }
      return kOk;
    }

    if (*pin) {
      if (*p_reduce) {
        auto inst = read_instance(g.input);
        auto stripped = strip_zero_rate(inst);
        write_json(cps_to_json(cps_from_cbgt(stripped.instance, parse_rational_arg(target))), g.output);
        return kOk;
      }
      if (*p_verify) {
        Json j = read_json(g.input);
        Schedule s = j.contains("schedule") ? schedule_from_json(j.at("schedule")) : schedule_from_json(j);
        auto cps = cps_from_json(read_json(cps_path));
        auto v = verify_pinwheel(cps, s);
        Json out = {{"pass", v.ok}};
        if (!v.ok) out["violation"] = v.reason;
        write_json(out, g.output);
        if (!v.ok) std::cerr << "violation: " << v.reason << "\n";
        return v.ok ? kOk : kViolation;
      }
      auto cps = cps_from_json(read_json(g.input));
      if (*p_decide) {
        auto d = decide_schedulable(cps, max_states);
        Json out = {{"schedulable", d.schedulable}, {"states_explored", d.states_explored}};
        if (d.schedulable) out["witness"] = schedule_to_json(d.witness);
        write_json(out, g.output);
        return kOk;
      }
      DensityOptions opt;
      opt.force_lp = force_lp;
      auto res = density(cps, opt);
      Json out = {{"density", rational_to_json(res.rho)}, {"solved", res.solved}, {"certificate", terms_to_json(res.certificate)}};
      write_json(out, g.output);
      return kOk;
    }

    if (*bench_cmd) {
      if (quick) {
        bopt.exact_per_family = 10;
        bopt.fraction_pairs = 100;
        bopt.coloring_per_family = 20;
        bopt.potential_instances = 10;
        bopt.interleave_random = 4;
        bopt.density_instances = 5;
        bopt.oracle_trials = 20;
      }
      auto results = bench::run_all(bopt);
      int failed = 0;
      for (const auto& r : results) {
        std::cout << bench::format_line(r) << "\n";
        if (!r.pass) ++failed;
      }
      return failed == 0 ? kOk : kViolation;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
