#include <algorithm>
#include <cmath>
#include <numeric>

#include "dwalk/chain.hpp"
#include "dwalk/error.hpp"
#include "dwalk/kernels.hpp"
#include "dwalk/rng.hpp"

namespace dwalk {

double default_mix_threshold(std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::min(1.0 / (nd * nd * nd), 1e-9);
}

MixReport mixing(const Chain& c, const Dist& pi, const MixOptions& opts) {
    if (!(opts.threshold > 0.0)) throw ValidationError("mixing threshold must be positive");
    const std::size_t n = c.n_states();
    if (pi.size() != n) throw ValidationError("stationary vector size does not match chain");

    MixReport report;
    report.threshold = opts.threshold;
    if (opts.sample_sources && *opts.sample_sources < n) {
        std::vector<Vertex> all(n);
        std::iota(all.begin(), all.end(), Vertex{0});
        Rng rng(opts.seed);
        const std::size_t k = std::max<std::size_t>(*opts.sample_sources, 1);
        for (std::size_t i = 0; i < k; ++i) {
            std::swap(all[i], all[i + rng.below(n - i)]);
        }
        all.resize(k);
        std::sort(all.begin(), all.end());
        report.sources = std::move(all);
        report.sampled = true;
    } else {
        report.sources.resize(n);
        std::iota(report.sources.begin(), report.sources.end(), Vertex{0});
    }

    const std::size_t k = report.sources.size();
    RowBlock cur(k, n), next(k, n);
    for (std::size_t i = 0; i < k; ++i) cur.row(i)[report.sources[i]] = 1.0;

    for (std::size_t t = 0;; ++t) {
        report.d_trace.push_back(kernels::max_abs_deviation(cur, pi.probs()));
        if (opts.record_dbar) report.dbar_trace.push_back(kernels::max_pairwise_tv(cur));
        if (report.d_trace.back() <= opts.threshold) {
            report.T = t;
            report.final_source_deviation = kernels::row_abs_deviation(cur, pi.probs());
            return report;
        }
        if (t == opts.step_cap) {
            throw MixingCapError("mixing threshold " + std::to_string(opts.threshold) + " not reached within " +
                                     std::to_string(opts.step_cap) + " steps",
                                 report.d_trace);
        }
        kernels::propagate_many(c, cur, next);
        std::swap(cur, next);
    }
}

std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const std::vector<double>& dbar,
                                                                               double slack, double abs_floor) {
    std::vector<std::pair<std::size_t, std::size_t>> bad;
    for (std::size_t s = 0; s < dbar.size(); ++s) {
        for (std::size_t t = s; s + t < dbar.size(); ++t) {
            if (dbar[s + t] > dbar[s] * dbar[t] * (1.0 + slack) + abs_floor) bad.emplace_back(s, t);
        }
    }
    return bad;
}

} // namespace dwalk
