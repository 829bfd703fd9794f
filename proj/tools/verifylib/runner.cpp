#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include "stack.hpp"
#include "verify.hpp"

namespace lab {

std::uint64_t row_seed(std::uint64_t base, const std::string& id) {
  // FNV-1a over the row identity, folded into the base seed. Stable across
  // platforms; nothing here depends on hash randomization.
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return base ^ h;
}

CriterionOutcome finish(int index, std::string name, Recorder& rec,
                        std::chrono::steady_clock::time_point t0) {
  CriterionOutcome out;
  out.index = index;
  out.name = std::move(name);
  out.rows = rec.take();
  std::sort(out.rows.begin(), out.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.experiment != b.experiment) return a.experiment < b.experiment;
    return a.quantity < b.quantity;
  });
  out.pass = !out.rows.empty() &&
             std::all_of(out.rows.begin(), out.rows.end(), [](const ReportRow& r) { return r.pass; });
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<CriterionOutcome> run_suite(const VerifyOptions& opt) {
  const std::vector<std::function<CriterionOutcome()>> tasks = {
      [&] { return criterion_screening(opt); },
      [&] { return criterion_isometries(opt); },
      [&] { return criterion_composition(opt); },
      [&] { return criterion_rates(opt); },
      [&] { return criterion_generator(opt); },
      [&] { return criterion_decoupling(opt, opt.tier == Tier::full); },
      [&] { return criterion_oracle(opt); },
      [&] { return criterion_interior_decay(opt); },
      [&] { return criterion_repeatability(opt); },
  };

  std::vector<CriterionOutcome> out(tasks.size());
  const int workers = std::max(1, std::min<int>(opt.workers, (int)tasks.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
    return out;
  }

  // Each worker pulls the next criterion index; results land in fixed slots,
  // so the collected order (and every CSV byte) is schedule-independent. A
  // ConfigError thrown by any task is rethrown on the calling thread.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          out[i] = tasks[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace lab
