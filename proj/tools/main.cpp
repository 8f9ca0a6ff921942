// krtool: command-line front end for the sl(N) link homology engine.

#include "kr/krlink.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

struct RunConfig {
  std::string name, braid, pd;
  int N = 2;
  bool reduced = false;
  int mark = 0;
  std::string format = "text";
  std::string cache_dir;
  int threads = 1;
  double timeout_secs = 0;
};

nlohmann::json result_json(const std::string& link, const kr::KRResult& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (auto [k, c] : r.poincare.terms()) terms.push_back({{"t", k.first}, {"q", k.second}, {"dim", c}});
  return {{"link", link},       {"N", r.N},          {"reduced", r.reduced},
          {"parity", r.parity}, {"terms", terms},    {"wall_time_ms", r.wall_time_ms}};
}

// Runs fn with a watchdog that raises the cancel flag after the timeout.
template <class Fn>
auto with_timeout(double secs, std::atomic<bool>& cancel, Fn&& fn) {
  if (secs <= 0) return fn();
  std::mutex m;
  std::condition_variable cv;
  bool finished = false;
  std::thread watchdog([&] {
    std::unique_lock lock(m);
    if (!cv.wait_for(lock, std::chrono::duration<double>(secs), [&] { return finished; })) cancel = true;
  });
  auto stop = [&] {
    {
      std::lock_guard lock(m);
      finished = true;
    }
    cv.notify_all();
    watchdog.join();
  };
  try {
    auto out = fn();
    stop();
    return out;
  } catch (...) {
    stop();
    throw;
  }
}

int run_compute(const RunConfig& cfg) {
  kr::LinkDiagram diagram;
  std::string link;
  if (!cfg.name.empty()) {
    diagram = kr::builtin_diagram(cfg.name);
    link = cfg.name;
  } else if (!cfg.braid.empty()) {
    diagram = kr::parse_braid(cfg.braid);
    link = "braid:" + cfg.braid;
  } else {
    diagram = kr::parse_pd(cfg.pd);
    link = "pd:" + cfg.pd;
  }
  std::atomic<bool> cancel{false};
  kr::KROptions opts;
  opts.threads = cfg.threads;
  opts.cache_dir = cfg.cache_dir;
  opts.cancel = &cancel;
  std::optional<int> mark;
  if (cfg.reduced) mark = cfg.mark;
  kr::KRResult r;
  try {
    r = with_timeout(cfg.timeout_secs, cancel, [&] { return kr::kr_invariant(diagram, cfg.N, cfg.reduced, mark, opts); });
  } catch (const kr::Cancelled&) {
    std::cerr << "error: timed out after " << cfg.timeout_secs << " s\n";
    return 3;
  }
  if (cfg.format == "json") {
    std::cout << result_json(link, r).dump(2) << "\n";
  } else {
    std::cout << link << "  N=" << r.N << (r.reduced ? "  reduced (mark " + std::to_string(r.mark_label) + ")" : "")
              << "  parity=" << r.parity << "\n";
    std::cout << "  " << r.poincare.to_string() << "\n";
    for (auto [k, c] : r.poincare.terms()) std::cout << "  t^" << k.first << " q^" << k.second << " : " << c << "\n";
    std::cout << "  wall time " << r.wall_time_ms << " ms\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov-Rozansky sl(N) homology by web compilation"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* compute = app.add_subcommand("compute", "compute the Poincare polynomial of a link");
  auto* src = compute->add_option_group("link", "link input");
  src->add_option("--name", cfg.name, "built-in link name");
  src->add_option("--braid", cfg.braid, "braid word, e.g. \"s1 s1 S2\"");
  src->add_option("--pd", cfg.pd, "PD code, e.g. \"X[1,4,2,3] X[3,2,4,1]\"");
  src->require_option(1);
  compute->add_option("--n", cfg.N, "rank N of sl(N)")->check(CLI::PositiveNumber);
  auto* reduced = compute->add_flag("--reduced", cfg.reduced, "reduced homology");
  compute->add_option("--mark", cfg.mark, "edge label carrying the mark")->needs(reduced);
  compute->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  compute->add_option("--cache-dir", cfg.cache_dir, "directory for compiled webs");
  compute->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  compute->add_option("--timeout-secs", cfg.timeout_secs, "abort after this many seconds");

  std::string level = "quick";
  auto* selftest = app.add_subcommand("selftest", "check against embedded reference data");
  selftest->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  int st_threads = 1;
  selftest->add_option("--threads", st_threads, "worker threads")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "list the built-in links");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*compute) {
      if (cfg.reduced && cfg.mark == 0) {
        std::cerr << "error: --reduced requires --mark\n";
        return 2;
      }
      return run_compute(cfg);
    }
    if (*selftest) return krtool::run_selftest(level == "full", st_threads, std::cout) ? 0 : 1;
    if (*list) {
      for (const auto& b : kr::builtin_links())
        std::cout << b.name << "  (" << b.display << ")  braid: " << (b.braid.empty() ? "-" : b.braid)
                  << (b.reversed.empty() ? "" : "  with a component reversed") << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
