#include "sepm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sepm/rng.hpp"

namespace sepm {

namespace {

// draw streams per round index
enum : std::uint64_t { kStreamSettings = 0, kStreamOutcome = 1, kStreamCheck = 2 };

RoundRecord sample_round(const CounterRng& rng, std::uint64_t index,
                         const ProtocolParams& params, double eta) {
    RoundRecord rec;

    const auto s = static_cast<unsigned>(rng.uniform(index, kStreamSettings) * 64.0);
    rec.settings.phi_a = kPhaseSet[s & 3];
    rec.settings.k_a = (s >> 2) & 1;
    rec.settings.phi_b = kPhaseSet[(s >> 3) & 3];
    rec.settings.k_b = (s >> 5) & 1;

    const CoincidenceTable table =
        coincidence_distribution(params.gamma, eta, rec.settings);
    const double u = rng.uniform(index, kStreamOutcome);
    double acc = 0.0;
    int slot = 3;
    for (int k = 0; k < 4; ++k) {
        acc += table.conditional[k];
        if (u < acc) {
            slot = k;
            break;
        }
    }
    rec.outcome.coincidence = true;
    rec.outcome.i = 1 + slot / 2;
    rec.outcome.j = 1 + slot % 2;

    const bool check_draw = rng.uniform(index, kStreamCheck) < 0.5;
    rec.sift = sift(rec.settings, rec.outcome, check_draw);
    return rec;
}

int chsh_pair_index(const Settings& s) {
    for (int p = 0; p < 4; ++p) {
        const auto& [a, b] = kChshPairs[p];
        if ((std::abs(s.phi_a - a) < 1e-9 && std::abs(s.phi_b - b) < 1e-9) ||
            (std::abs(s.phi_a - b) < 1e-9 && std::abs(s.phi_b - a) < 1e-9))
            return p;
    }
    return -1;
}

}  // namespace

std::vector<RoundRecord> run_session(const McConfig& cfg) {
    if (cfg.n_coincidences < 1)
        throw std::invalid_argument("run_session: n_coincidences must be >= 1");
    if (cfg.workers < 1)
        throw std::invalid_argument("run_session: workers must be >= 1");
    if (!(cfg.eta > 0.0) || cfg.eta > 1.0)
        throw std::invalid_argument("run_session: eta must be in (0, 1]");
    cfg.params.validate();

    const CounterRng rng(cfg.seed);
    std::vector<RoundRecord> records(static_cast<std::size_t>(cfg.n_coincidences));

    const int workers = cfg.workers;
    if (workers == 1) {
        for (std::size_t i = 0; i < records.size(); ++i)
            records[i] = sample_round(rng, i, cfg.params, cfg.eta);
        return records;
    }

    std::vector<std::thread> pool;
    const std::size_t n = records.size();
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i)
                records[i] = sample_round(rng, i, cfg.params, cfg.eta);
        });
    }
    for (auto& t : pool) t.join();
    return records;
}

McReport summarize(std::span<const RoundRecord> records) {
    if (records.empty()) throw std::runtime_error("summarize: no records");

    McReport rep;
    rep.rounds = static_cast<std::int64_t>(records.size());
    std::int64_t check_errors = 0;
    for (const auto& rec : records) {
        switch (rec.sift) {
            case SiftClass::kept:
                ++rep.kept;
                break;
            case SiftClass::check: {
                ++rep.check;
                const int bit_b = bob_bit_after_flip(rec.settings, rec.outcome);
                if (rec.settings.k_a != bit_b) ++check_errors;
                break;
            }
            case SiftClass::chsh_sample: {
                ++rep.chsh_samples;
                const int p = chsh_pair_index(rec.settings);
                if (p < 0) break;
                const int parity = (rec.outcome.i + rec.outcome.j + rec.settings.k_a +
                                    rec.settings.k_b) % 2;
                ++rep.chsh_counts.counts[p][parity];
                break;
            }
            case SiftClass::discarded:
                ++rep.discarded;
                break;
        }
    }

    if (rep.check > 0)
        rep.qber = static_cast<double>(check_errors) / static_cast<double>(rep.check);
    rep.qber_stderr = rep.check > 1
                          ? std::sqrt(rep.qber * (1.0 - rep.qber) /
                                      static_cast<double>(rep.check))
                          : 0.0;

    double s_var = 0.0;
    bool all_pairs = true;
    for (int p = 0; p < 4; ++p) {
        const std::int64_t n = rep.chsh_counts.counts[p][0] + rep.chsh_counts.counts[p][1];
        rep.pair_counts[p] = n;
        if (n == 0) {
            all_pairs = false;
            continue;
        }
        const double e =
            static_cast<double>(rep.chsh_counts.counts[p][0] - rep.chsh_counts.counts[p][1]) /
            static_cast<double>(n);
        rep.correlations[p] = e;
        rep.correlation_stderr[p] = std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n));
        s_var += rep.correlation_stderr[p] * rep.correlation_stderr[p];
    }
    if (all_pairs) {
        rep.chsh_S = chsh_from_counts(rep.chsh_counts);
        rep.chsh_S_stderr = std::sqrt(s_var);
    }
    return rep;
}

ComparisonResult compare_to_analytic(const McReport& report, const ProtocolParams& params,
                                     double eta) {
    const SessionStats expect = session_expectations(params, eta);

    auto check = [](double empirical, double analytic, double stderr_) {
        StatisticCheck c;
        c.empirical = empirical;
        c.analytic = analytic;
        if (stderr_ > 0.0)
            c.z = (empirical - analytic) / stderr_;
        else
            c.z = (empirical == analytic) ? 0.0 : std::numeric_limits<double>::infinity();
        c.pass = std::abs(c.z) <= 3.0;
        return c;
    };

    ComparisonResult res;
    const double qber_se =
        report.check > 0
            ? std::sqrt(std::max(expect.qber * (1.0 - expect.qber), 1e-300) /
                        static_cast<double>(report.check))
            : 0.0;
    res.qber = check(report.qber, expect.qber, qber_se);

    double s_var = 0.0;
    for (int p = 0; p < 4; ++p) {
        const double ea = expect.correlations[p];
        const double se =
            report.pair_counts[p] > 0
                ? std::sqrt(std::max(1.0 - ea * ea, 1e-300) /
                            static_cast<double>(report.pair_counts[p]))
                : 0.0;
        res.correlations[p] = check(report.correlations[p], ea, se);
        s_var += se * se;
    }
    res.chsh_S = check(report.chsh_S, expect.chsh_S, std::sqrt(s_var));

    res.all_pass = res.qber.pass && res.chsh_S.pass;
    for (const auto& c : res.correlations) res.all_pass = res.all_pass && c.pass;
    return res;
}

std::string McReport::to_json() const {
    static const char* kPairNames[4] = {"E(0,pi/4)", "E(0,-pi/4)", "E(pi/2,pi/4)",
                                        "E(pi/2,-pi/4)"};
    std::ostringstream os;
    os.precision(12);
    os << "{\"rounds\":" << rounds << ",\"coincidences\":" << rounds
       << ",\"sifted\":" << (kept + check) << ",\"kept\":" << kept
       << ",\"check\":" << check << ",\"chsh_samples\":" << chsh_samples
       << ",\"discarded\":" << discarded << ",\"qber\":" << qber
       << ",\"qber_stderr\":" << qber_stderr << ",\"S\":" << chsh_S
       << ",\"S_stderr\":" << chsh_S_stderr << ",\"correlations\":{";
    for (int p = 0; p < 4; ++p) {
        if (p) os << ",";
        os << "\"" << kPairNames[p] << "\":" << correlations[p];
    }
    os << "}}";
    return os.str();
}

void write_rounds_csv(std::ostream& os, std::span<const RoundRecord> records) {
    static const char* kClassNames[] = {"kept", "check", "chsh", "discarded"};
    os << "index,phi_a,k_a,phi_b,k_b,i,j,sift_class\n";
    const auto flags = os.flags();
    os << std::setprecision(17);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << i << ',' << r.settings.phi_a << ',' << r.settings.k_a << ','
           << r.settings.phi_b << ',' << r.settings.k_b << ',' << r.outcome.i << ','
           << r.outcome.j << ',' << kClassNames[static_cast<int>(r.sift)] << '\n';
    }
    os.flags(flags);
}

}  // namespace sepm
