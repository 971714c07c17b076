#include "ocnn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "ocnn/errors.hpp"
#include "ocnn/rng.hpp"

namespace ocnn {

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 2 || lo <= 0.0 || hi <= lo) throw ValidationError("bad log spacing request");
    std::vector<double> out(count);
    const double llo = std::log10(lo);
    const double lhi = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        out[i] = std::pow(10.0, llo + (lhi - llo) * i / (count - 1));
    }
    return out;
}

std::vector<double> default_sweep_sigmas() { return log_spaced(1e-5, 0.3, 20); }

namespace {

struct Prediction {
    int cls = 0;
    std::vector<int> ties;
};

std::vector<Prediction> predict(const NetworkSpec& net, const std::vector<KernelMatrix>& w,
                                const Dataset& test, const std::vector<int>& indices) {
    const Mat scores = forward_scores(net, w, test, indices);
    std::vector<Prediction> out(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        Vec row = scores.row(static_cast<Eigen::Index>(i)).transpose();
        out[i] = {argmax_lowest(row), argmax_ties(row)};
    }
    return out;
}

}  // namespace

std::vector<AgreementRow> perturbation_experiment(const NetworkSpec& net,
                                                  const std::vector<KernelMatrix>& weights,
                                                  const Dataset& test, const SweepConfig& cfg) {
    if (cfg.sigmas.empty() || cfg.trials < 1) throw ValidationError("empty sweep configuration");
    for (double s : cfg.sigmas) {
        if (s < 0.0 || !std::isfinite(s)) throw ValidationError("sweep sigma must be >= 0");
    }

    const int subset = cfg.subset > 0 ? std::min(cfg.subset, test.count) : test.count;
    std::vector<int> indices(subset);
    std::iota(indices.begin(), indices.end(), 0);

    const std::vector<Prediction> reference = predict(net, weights, test, indices);

    std::vector<KernelFactors> factors;
    factors.reserve(weights.size());
    for (const KernelMatrix& m : weights) factors.push_back(factor_kernel(m));

    const int tasks = static_cast<int>(cfg.sigmas.size()) * cfg.trials;
    std::vector<AgreementRow> rows(tasks);

    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run_tasks = [&]() {
        for (int task = next.fetch_add(1); task < tasks; task = next.fetch_add(1)) {
            const int sigma_idx = task / cfg.trials;
            const int trial = task % cfg.trials;
            const double sigma = cfg.sigmas[sigma_idx];
            const std::uint64_t task_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(task));

            std::vector<KernelMatrix> noisy;
            noisy.reserve(factors.size());
            for (std::size_t l = 0; l < factors.size(); ++l) {
                noisy.push_back(
                    realize_kernel(factors[l], PhaseNoiseModel{sigma, derive_seed(task_seed, l)}));
            }

            const std::vector<Prediction> got = predict(net, noisy, test, indices);
            int agree = 0;
            for (std::size_t i = 0; i < got.size(); ++i) {
                if (got[i].cls == reference[i].cls && got[i].ties == reference[i].ties) ++agree;
            }
            rows[task] = {sigma, trial, static_cast<double>(agree) / subset};
        }
    };
    auto worker = [&]() noexcept {
        try {
            run_tasks();
        } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(tasks);  // drain remaining work
        }
    };

    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    return rows;
}

}  // namespace ocnn
