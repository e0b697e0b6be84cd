// Command-line front end: sampling, rendering, verification and the
// bead-vs-GUE comparison.  Every command echoes its resolved configuration
// into its output and is deterministic given (config, seed).
//
// Exit codes: 0 success / all checks passed, 1 verification failure,
// 2 usage error, 3 resource budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sawtooth/render.hpp"
#include "sawtooth/rmt.hpp"
#include "sawtooth/tilings.hpp"
#include "sawtooth/verify.hpp"

namespace {

using namespace sawtooth;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_sample(const std::string& spec_path, int samples, std::uint64_t seed,
               const std::string& method, std::uint64_t glauber_steps, const std::string& out_path,
               bool render, int threads) {
  const SawtoothSpec spec = SawtoothSpec::load(spec_path);
  const bool exact = method == "exact";
  if (!exact && method != "glauber") throw CLI::ValidationError("--method must be exact or glauber");

  nlohmann::json config{{"command", "sample"},    {"spec", spec.to_json()},
                        {"samples", samples},     {"seed", seed},
                        {"method", method},       {"out", out_path},
                        {"render", render},       {"precision", exact ? (spec.N <= 40 ? "exact-rational" : "double") : "integer"}};

  std::vector<BeadArray> batch(static_cast<std::size_t>(samples));
  if (exact) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto worker = [&](int begin, int end) {
      for (int i = begin; i < end; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        batch[static_cast<std::size_t>(i)] = spec.N <= 40
                                                 ? detail::sample_pattern_typed<Rational>(spec, rng)
                                                 : detail::sample_pattern_typed<double>(spec, rng);
      }
    };
    std::vector<std::thread> pool;
    const int chunk = (samples + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int begin = w * chunk, end = std::min(samples, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  } else {
    // One chain: burn-in (default 10 N^3 proposals, --glauber-steps overrides)
    // then one sample every N^3 proposals.  Heuristic mixing scale; the exact
    // sampler is the one with distributional guarantees.
    const std::uint64_t n3 = static_cast<std::uint64_t>(spec.N) * spec.N * spec.N;
    const std::uint64_t burn = glauber_steps > 0 ? glauber_steps : 10 * n3;
    config["glauber_burn_in"] = burn;
    config["glauber_thinning"] = n3;
    CounterRng rng(seed);
    GlauberChain chain(spec);
    chain.step(burn, rng);
    for (int i = 0; i < samples; ++i) {
      if (i > 0) chain.step(std::max<std::uint64_t>(n3, 1), rng);
      batch[static_cast<std::size_t>(i)] = chain.state();
    }
  }

  std::ostringstream csv;
  csv << "# config: " << config.dump() << "\n";
  csv << "# columns: seed, then bead rows flattened thread 1..N (each row decreasing)\n";
  for (int i = 0; i < samples; ++i) {
    csv << i;
    for (const auto& row : batch[static_cast<std::size_t>(i)].rows)
      for (int b : row) csv << ',' << b;
    csv << '\n';
  }
  write_text(out_path, csv.str());

  if (render) {
    const std::filesystem::path base(out_path);
    for (int i = 0; i < samples; ++i) {
      auto svg_path = base;
      svg_path.replace_extension("");
      svg_path += "_" + std::to_string(i) + ".svg";
      write_text(svg_path.string(), render_svg(pattern_to_lozenges(batch[static_cast<std::size_t>(i)])));
    }
  }
  std::cout << config.dump(2) << "\n";
  return 0;
}

int run_render(const std::string& pattern_path, const std::string& out_path,
               const std::string& tiles_path) {
  std::ifstream in(pattern_path);
  if (!in) throw std::runtime_error("cannot read " + pattern_path);
  nlohmann::json j;
  in >> j;
  const BeadArray pattern = BeadArray::from_json(j);
  const auto tiles = pattern_to_lozenges(pattern);
  if (!out_path.empty()) write_text(out_path, render_svg(tiles));
  if (!tiles_path.empty()) {
    nlohmann::json tj{{"config", {{"command", "render"}, {"pattern", pattern_path}}},
                      {"tiles", tiles_to_json(tiles)}};
    write_text(tiles_path, tj.dump(1) + "\n");
  }
  std::cout << nlohmann::json{{"command", "render"},
                              {"tiles", tiles.size()},
                              {"svg", out_path},
                              {"tiles_out", tiles_path}}
                   .dump(2)
            << "\n";
  return 0;
}

int run_verify(const std::string& which, int n, int k, int d, int g_max, int samples,
               std::uint64_t seed, const std::string& out_path, const std::string& cache_path) {
  HurwitzTable table;
  if (!cache_path.empty() && std::filesystem::exists(cache_path))
    table = HurwitzTable::load(cache_path);

  std::vector<CheckResult> checks;
  if (which == "key-prop" || which == "all") checks.push_back(key_prop_check(n > 0 ? std::min(n, 6) : 4));
  if (which == "theorem2" || which == "all")
    checks.push_back(genus_expansion_check(n > 0 ? n : 10, d > 0 ? d : 3, g_max >= 0 ? g_max : 3,
                                           1e-6, &table));
  if (which == "cumulant-identity" || which == "all")
    checks.push_back(cumulant_identity_check(d > 0 ? std::min(d, 5) : 5, 20, seed, &table));
  if (which == "sampler-exactness" || which == "all")
    checks.push_back(sampler_exactness_check(20, k > 0 ? std::min(k, 5) : 5, seed,
                                             samples > 0 ? samples : 100000));
  if (checks.empty())
    throw CLI::ValidationError("--which must be key-prop|theorem2|cumulant-identity|sampler-exactness|all");

  if (!cache_path.empty()) table.save(cache_path);

  nlohmann::json report;
  report["config"] = {{"command", "verify"}, {"which", which}, {"N", n}, {"k", k}, {"d", d},
                      {"g_max", g_max},      {"samples", samples}, {"seed", seed}};
  nlohmann::json arr = nlohmann::json::array();
  bool any_fail = false;
  for (const auto& c : checks) {
    arr.push_back(c.to_json());
    any_fail = any_fail || c.failed();
  }
  report["checks"] = std::move(arr);
  report["pass"] = !any_fail;

  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return any_fail ? 1 : 0;
}

int run_gue_compare(const std::string& spec_path, int k, int samples, std::uint64_t seed,
                    const std::string& out_path, int threads) {
  const SawtoothSpec spec = SawtoothSpec::load(spec_path);
  auto outcome = gue_compare(spec, {k}, samples, seed, threads);
  outcome.report["config"] = {{"command", "gue-compare"}, {"spec_path", spec_path}, {"k", k},
                              {"samples", samples},       {"seed", seed},           {"threads", threads}};
  const std::string text = outcome.report.dump(2) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lozenge tilings of sawtooth domains: exact sampling, orbital transforms, "
               "walk-series verification, GUE comparison"};
  app.require_subcommand(1);

  std::string spec_path, out_path, tiles_path, pattern_path, method = "exact", which = "all";
  std::string cache_path;
  int samples = 1, k = 1, n = 0, d = 0, g_max = -1, threads = 0, precision = 30;
  std::uint64_t seed = 1, glauber_steps = 0;
  bool render = false;

  auto* cmd_sample = app.add_subcommand("sample", "Draw bead arrays and write a CSV batch");
  cmd_sample->add_option("--spec", spec_path, "spec JSON path")->required();
  cmd_sample->add_option("--samples", samples, "number of samples");
  cmd_sample->add_option("--seed", seed, "base seed");
  cmd_sample->add_option("--method", method, "exact|glauber");
  cmd_sample->add_option("--glauber-steps", glauber_steps, "burn-in proposals for glauber");
  cmd_sample->add_option("--out", out_path, "output CSV path")->required();
  cmd_sample->add_option("--threads", threads, "worker threads (exact method)");
  cmd_sample->add_flag("--render", render, "also write one SVG per sample");

  auto* cmd_render = app.add_subcommand("render", "Render a bead-array JSON file as SVG");
  cmd_render->add_option("--pattern", pattern_path, "pattern JSON path")->required();
  cmd_render->add_option("--out", out_path, "SVG output path");
  cmd_render->add_option("--tiles-out", tiles_path, "tile-list JSON output path");

  auto* cmd_verify = app.add_subcommand("verify", "Run verification checks");
  cmd_verify->add_option("--which", which, "key-prop|theorem2|cumulant-identity|sampler-exactness|all");
  cmd_verify->add_option("--n", n, "rank parameter");
  cmd_verify->add_option("--k", k, "thread / max rank parameter");
  cmd_verify->add_option("--d", d, "degree parameter");
  cmd_verify->add_option("--gmax", g_max, "genus truncation");
  cmd_verify->add_option("--samples", samples, "sample count for statistical checks");
  cmd_verify->add_option("--seed", seed, "seed");
  cmd_verify->add_option("--precision", precision, "requested decimal digits (<=16 double, else 50)");
  cmd_verify->add_option("--out", out_path, "report JSON path");
  cmd_verify->add_option("--hurwitz-cache", cache_path, "walk-count cache JSON path");

  auto* cmd_gue = app.add_subcommand("gue-compare", "Rescaled beads vs GUE eigenvalues");
  cmd_gue->add_option("--spec", spec_path, "spec JSON path")->required();
  cmd_gue->add_option("--k", k, "thread index");
  cmd_gue->add_option("--samples", samples, "number of samples");
  cmd_gue->add_option("--seed", seed, "base seed");
  cmd_gue->add_option("--out", out_path, "report JSON path");
  cmd_gue->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
    if (cmd_sample->parsed())
      return run_sample(spec_path, samples, seed, method, glauber_steps, out_path, render, threads);
    if (cmd_render->parsed()) return run_render(pattern_path, out_path, tiles_path);
    if (cmd_verify->parsed())
      return run_verify(which, n, k, d, g_max, samples, seed, out_path, cache_path);
    if (cmd_gue->parsed()) return run_gue_compare(spec_path, k, samples, seed, out_path, threads);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sawtooth::budget_error& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
