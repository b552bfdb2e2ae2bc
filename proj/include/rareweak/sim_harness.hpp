#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "rareweak/empirical_hc.hpp"
#include "rareweak/errors.hpp"
#include "rareweak/fdr.hpp"
#include "rareweak/population_thresholds.hpp"
#include "rareweak/rw_model.hpp"

// Monte-Carlo error study: draw rare-weak samples, threshold them with
// empirical HC and with local-fdr cutoffs (estimated or oracle), count
// the four error kinds against the ground-truth labels and aggregate
// over replications.

namespace rareweak {

enum class Method { hc, cb, fndr, cb_oracle, fndr_oracle, fdr02 };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::hc: return "HC";
        case Method::cb: return "CB";
        case Method::fndr: return "FNDR";
        case Method::cb_oracle: return "CB_oracle";
        case Method::fndr_oracle: return "FNDR_oracle";
        case Method::fdr02: return "fdr02";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
    if (name == "HC") return Method::hc;
    if (name == "CB") return Method::cb;
    if (name == "FNDR") return Method::fndr;
    if (name == "CB_oracle") return Method::cb_oracle;
    if (name == "FNDR_oracle") return Method::fndr_oracle;
    if (name == "fdr02") return Method::fdr02;
    return std::nullopt;
}

enum class FdrMode { oracle, estimated };

// local-fdr level each method cuts at (HC has none)
inline double method_fdr_level(Method m) {
    switch (m) {
        case Method::cb:
        case Method::cb_oracle: return 0.5;
        case Method::fndr:
        case Method::fndr_oracle: return 0.8;
        case Method::fdr02: return 0.2;
        case Method::hc: break;
    }
    return 0.0;
}

struct StudyConfig {
    double epsilon = 0.01;
    std::vector<double> tau_list = {3.0, 4.0, 5.0, 6.0};
    std::size_t d = 10000;
    std::size_t replications = 200;
    std::uint64_t master_seed = 42;
    std::vector<Method> methods = {Method::hc, Method::cb, Method::fndr};
    FdrMode fdr_mode = FdrMode::estimated;
};

struct ErrorCounts {
    std::size_t fp = 0, fn = 0, tp = 0, tn = 0;
    std::size_t total_error() const { return fp + fn; }
};

struct TrialResult {
    std::map<Method, ErrorCounts> counts;
    bool fit_attempted = false;
    bool fit_converged = true;
};

// Per-replication seed: a stable mix of the master seed and the
// replication index, so trials can run in any order or concurrently.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::size_t rep_index) {
    return detail::splitmix64(master_seed + 0x9e3779b97f4a7c15ULL * (rep_index + 1));
}

namespace detail {

inline ErrorCounts count_errors(const LabeledSample& ls, const std::vector<bool>& declared) {
    ErrorCounts c;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const bool truth = ls.is_alternative[i];
        if (declared[i]) {
            (truth ? c.tp : c.fp)++;
        } else {
            (truth ? c.fn : c.tn)++;
        }
    }
    return c;
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>((hi - lo) / step) + 2);
    for (double z = lo; z <= hi; z += step) grid.push_back(z);
    return grid;
}

}  // namespace detail

// One replication: sample, threshold with every configured method,
// tally errors. A feature is declared non-null when its z exceeds the
// method's z-scale cutoff (for HC, when its p-value falls below the
// empirical HC threshold, which is the same comparison through
// p = 1 - Phi(z)).
inline TrialResult run_trial(const RwModel& m, const StudyConfig& cfg, std::size_t rep_index) {
    if (cfg.d < 2) throw OutOfDomainError("run_trial: d must be >= 2");
    const LabeledSample ls = sample(m, cfg.d, derive_trial_seed(cfg.master_seed, rep_index));

    const bool want_estimated =
        cfg.fdr_mode == FdrMode::estimated &&
        std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method me) {
            return me == Method::cb || me == Method::fndr || me == Method::fdr02;
        });

    TrialResult trial;
    std::optional<FdrCurves> curves;
    if (want_estimated) {
        const MixtureFit fit = fit_mixture(ls.z);
        trial.fit_attempted = true;
        trial.fit_converged = fit.converged;
        // grid spans the data; cutoffs beyond it declare nothing either way
        curves = local_fdr_curve(
            fit, detail::uniform_grid(ls.z.front() - 1.0, ls.z.back() + 6.0, 0.002));
    }

    std::vector<bool> declared(ls.size());
    for (Method method : cfg.methods) {
        if (method == Method::hc) {
            std::vector<double> p(ls.size());
            for (std::size_t i = 0; i < ls.size(); ++i) p[i] = p_value(ls.z[i]);
            const HcResult hc = hc_threshold(PValueSample(p));
            for (std::size_t i = 0; i < ls.size(); ++i)
                declared[i] = p_value(ls.z[i]) < hc.threshold;
        } else {
            const double level = method_fdr_level(method);
            const bool oracle = (method == Method::cb_oracle ||
                                 method == Method::fndr_oracle || !curves.has_value());
            const double cut = oracle ? fdr_cutoff(m, level) : cutoff_from_curve(*curves, level);
            for (std::size_t i = 0; i < ls.size(); ++i) declared[i] = ls.z[i] > cut;
        }
        trial.counts[method] = detail::count_errors(ls, declared);
    }
    return trial;
}

struct ErrorStats {
    double mean = 0.0;
    double sd = 0.0;
};

struct MethodTauSummary {
    Method method = Method::hc;
    double tau = 0.0;
    ErrorStats fp, fn, tp, tn, total;
    std::size_t fit_failures = 0;  // trials whose mixture fit did not converge
};

struct StudySummary {
    StudyConfig config;
    std::vector<MethodTauSummary> rows;  // method-major, tau-minor
};

namespace detail {

inline ErrorStats stats_from(const std::vector<double>& xs) {
    ErrorStats s;
    const std::size_t n = xs.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

}  // namespace detail

// Runs the full study: replications 1..B for every tau in the list.
// Results are deterministic functions of the config alone; `jobs` only
// controls how many trials run concurrently.
inline StudySummary run_study(const StudyConfig& cfg, std::size_t jobs = 1) {
    if (cfg.tau_list.empty()) throw OutOfDomainError("run_study: tau_list must be nonempty");
    if (cfg.replications < 1) throw OutOfDomainError("run_study: need at least 1 replication");
    if (cfg.d < 2) throw OutOfDomainError("run_study: d must be >= 2");

    StudySummary summary;
    summary.config = cfg;

    const std::size_t B = cfg.replications;
    std::map<double, std::vector<TrialResult>> trials_by_tau;
    for (double tau : cfg.tau_list) {
        const RwModel m(cfg.epsilon, tau);
        std::vector<TrialResult> trials(B);
        if (jobs <= 1) {
            for (std::size_t rep = 0; rep < B; ++rep) trials[rep] = run_trial(m, cfg, rep + 1);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t rep = next.fetch_add(1); rep < B; rep = next.fetch_add(1))
                    trials[rep] = run_trial(m, cfg, rep + 1);
            };
            std::vector<std::thread> pool;
            const std::size_t n_threads = std::min(jobs, B);
            pool.reserve(n_threads);
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        trials_by_tau.emplace(tau, std::move(trials));
    }

    for (Method method : cfg.methods) {
        for (double tau : cfg.tau_list) {
            const auto& trials = trials_by_tau.at(tau);
            std::vector<double> fp, fn, tp, tn, total;
            fp.reserve(B); fn.reserve(B); tp.reserve(B); tn.reserve(B); total.reserve(B);
            std::size_t failures = 0;
            for (const TrialResult& t : trials) {
                const ErrorCounts& c = t.counts.at(method);
                fp.push_back(static_cast<double>(c.fp));
                fn.push_back(static_cast<double>(c.fn));
                tp.push_back(static_cast<double>(c.tp));
                tn.push_back(static_cast<double>(c.tn));
                total.push_back(static_cast<double>(c.total_error()));
                if (t.fit_attempted && !t.fit_converged) ++failures;
            }
            MethodTauSummary row;
            row.method = method;
            row.tau = tau;
            row.fp = detail::stats_from(fp);
            row.fn = detail::stats_from(fn);
            row.tp = detail::stats_from(tp);
            row.tn = detail::stats_from(tn);
            row.total = detail::stats_from(total);
            row.fit_failures = failures;
            summary.rows.push_back(row);
        }
    }
    return summary;
}

struct ErrorTableRow {
    std::string_view method;
    double tau = 0.0;
    std::string_view metric;  // fp, fn, tp, tn, total
    double mean = 0.0;
    double sd = 0.0;
};

// Long-format export, one row per (method, tau, error kind).
inline std::vector<ErrorTableRow> emit_error_table(const StudySummary& summary) {
    std::vector<ErrorTableRow> rows;
    rows.reserve(summary.rows.size() * 5);
    for (const MethodTauSummary& r : summary.rows) {
        const std::string_view name = method_name(r.method);
        rows.push_back({name, r.tau, "fp", r.fp.mean, r.fp.sd});
        rows.push_back({name, r.tau, "fn", r.fn.mean, r.fn.sd});
        rows.push_back({name, r.tau, "tp", r.tp.mean, r.tp.sd});
        rows.push_back({name, r.tau, "tn", r.tn.mean, r.tn.sd});
        rows.push_back({name, r.tau, "total", r.total.mean, r.total.sd});
    }
    return rows;
}

}  // namespace rareweak
