#include "pwschatten/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "pwschatten/besov.hpp"
#include "pwschatten/commutators.hpp"
#include "pwschatten/decomposition.hpp"
#include "pwschatten/quadrature.hpp"

namespace pws {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string num(double x) { return std::isfinite(x) ? format_double(x) : std::string("nan"); }

std::vector<double> a_values(const ExperimentConfig& cfg) {
    std::vector<double> as{cfg.a};
    if (cfg.also_a1 && cfg.a != 1.0) as.push_back(1.0);
    return as;
}

std::string band_name(double a, double p) { return "a=" + num(a) + ",p=" + num(p); }

cplx gaussian_c(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const double re = g(rng);
    return {re, g(rng)};
}

Band& band_for(ExperimentReport& rep, const std::string& name) {
    for (auto& [n, b] : rep.bands)
        if (n == name) return b;
    rep.bands.emplace_back(name, Band{});
    return rep.bands.back().second;
}

void check_spread(ExperimentReport& rep, const std::string& name, const Band& b, double limit) {
    if (b.count == 0) {
        rep.failures.push_back(name + ": no admissible cells");
    } else if (!(b.min > 0.0) || !std::isfinite(b.max) || b.spread() > limit) {
        rep.failures.push_back(name + ": band [" + num(b.min) + ", " + num(b.max) + "] exceeds spread " + num(limit));
    }
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = std::log(xs[i]), y = std::log(ys[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void Band::add(double v) {
    if (!std::isfinite(v)) {
        ++excluded;
        return;
    }
    if (count == 0) {
        min = max = v;
    } else {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    ++count;
}

json ExperimentReport::summary() const {
    json bands_j = json::object();
    for (const auto& [name, b] : bands)
        bands_j[name] = {{"min", b.min}, {"max", b.max}, {"count", b.count}, {"excluded", b.excluded}};
    return {{"experiment", experiment}, {"band", bands_j},     {"failures", failures},
            {"details", details},       {"runtime", runtime_seconds}};
}

std::mt19937_64 cell_rng(std::uint64_t seed, const std::string& experiment, std::uint64_t cell) {
    const std::uint64_t s = splitmix(splitmix(seed) ^ fnv1a(experiment)) ^ splitmix(cell + 0x632be59bd9b4e019ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::string> experiment_names() {
    return {"thm1_comparability", "prop_p3_growth", "thm2_suite", "lemma_l2_check"};
}

ExperimentConfig config_from_json(const json& j, const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    c.a = j.value("a", c.a);
    c.seed = j.value("seed", c.seed);
    c.symbols_per_cell = j.value("symbols_per_cell", c.symbols_per_cell);
    c.atoms_per_symbol = j.value("atoms_per_symbol", c.atoms_per_symbol);
    c.besov_tolerance = j.value("besov_tolerance", c.besov_tolerance);
    c.atom_window = j.value("atom_window", c.atom_window);
    c.sweep_points = j.value("sweep_points", c.sweep_points);
    c.hankel_window = j.value("hankel_window", c.hankel_window);
    c.also_a1 = j.value("also_a1", c.also_a1);
    c.out_dir = j.value("out_dir", c.out_dir);
    if (j.contains("p_list")) {
        c.p_list = j["p_list"].get<std::vector<double>>();
    } else if (experiment == "thm1_comparability") {
        c.p_list = {0.5, 1.0, 1.5, 2.0};
    } else if (experiment == "prop_p3_growth") {
        c.p_list = {0.5, 0.75};
    } else if (experiment == "thm2_suite") {
        c.p_list = {0.5, 1.0};
    } else {
        c.p_list = {1.0, 1.5, 2.0};
    }
    if (!(c.a > 0.0)) throw Error("config: a must be positive");
    if (!(c.besov_tolerance > 0.0)) throw Error("config: besov_tolerance must be positive");
    if (!(c.atom_window > 0.0)) throw Error("config: atom_window must be positive");
    if (c.symbols_per_cell < 1 || c.atoms_per_symbol < 1) throw Error("config: counts must be positive");
    if (c.sweep_points < 2) throw Error("config: sweep_points must be at least 2");
    for (double p : c.p_list)
        if (!(p > 0.0)) throw Error("config: every p must be positive");
    return c;
}

ExperimentReport run_thm1_comparability(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "thm1_comparability";
    CsvWriter csv(cfg.out_dir + "/thm1_comparability.csv",
                  {"a", "p", "cell", "atoms", "schatten", "besov", "besov_certified", "besov_window", "ratio",
                   "dilation_rel_diff", "status"});
    std::uint64_t cell = 0;
    for (double a : a_values(cfg)) {
        const double sp = 2.0 * pi / a;
        const auto pool = generate_lambda_set(0.5, 2.0, a, {cfg.atom_window * sp, 2.0 / a});
        for (double p : cfg.p_list) {
            const std::string name = band_name(a, p);
            Band& band = band_for(rep, name);
            double worst_dilation = 0.0;
            for (int s = 0; s < cfg.symbols_per_cell; ++s, ++cell) {
                auto rng = cell_rng(cfg.seed, rep.experiment, cell);
                std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
                AtomicSymbol sym{a, {}}, half{a / 2.0, {}};
                for (int k = 0; k < cfg.atoms_per_symbol; ++k) {
                    const cplx lam = pool[pick(rng)].z;
                    const cplx c = gaussian_c(rng);
                    sym.atoms.push_back({lam, c});
                    half.atoms.push_back({2.0 * lam, c});
                }
                const BesovParams bp(p, cfg.besov_tolerance);
                const double S = schatten_quasinorm(singular_values(toeplitz_from_atoms(sym)), p);
                std::string status = "ok";
                double ratio = kNaN, dil = kNaN;
                BesovNorm B;
                try {
                    B = besov_norm(sample_symbol_sequence(sym), bp);
                    ratio = S / B.norm;
                    const double S2 = schatten_quasinorm(singular_values(toeplitz_from_atoms(half)), p);
                    const double B2 = besov_norm(sample_symbol_sequence(half), bp).norm;
                    dil = std::abs(S2 / B2 - ratio) / ratio;
                    worst_dilation = std::max(worst_dilation, dil);
                    if (!(B.norm > 0.0) || !(S > 0.0)) status = "zero";
                } catch (const Error& e) {
                    status = std::string("besov_error: ") + e.what();
                    ratio = kNaN;
                }
                if (status == "ok") band.add(ratio);
                else ++band.excluded;
                csv.row({num(a), num(p), std::to_string(cell), std::to_string(sym.atoms.size()), num(S), num(B.norm),
                         B.certified ? "1" : "0", std::to_string(B.window), num(ratio), num(dil), "\"" + status + "\""});
            }
            check_spread(rep, name, band, 1e3);
            if (worst_dilation > 1e-9)
                rep.failures.push_back(name + ": dilation changed the ratio by " + num(worst_dilation));
            rep.details["max_dilation_rel_diff"][name] = worst_dilation;
        }
    }
    return rep;
}

ExperimentReport run_prop_p3_growth(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "prop_p3_growth";
    CsvWriter csv(cfg.out_dir + "/prop_p3_growth.csv",
                  {"a", "p", "im_lambda", "m_p_sum", "m_uncertainty", "m_status", "rank_one_k", "trunc_window",
                   "trunc_lower_p_sum", "trunc_upper_p_sum", "besov", "besov_window"});
    const int n = cfg.sweep_points;
    for (double a : a_values(cfg)) {
        const double sp = 2.0 * pi / a;
        for (double p : cfg.p_list) {
            const std::string name = band_name(a, p);
            std::vector<double> ys, ms, ks, bs;
            bool diverged = false;
            TruncatedCommutator first{}, last{};
            for (int i = 0; i < n; ++i) {
                const double Y = (10.0 / a) * std::pow(1000.0, static_cast<double>(i) / (n - 1));
                const cplx lam(0.0, Y);
                LatticeSeries m{kNaN, kNaN, kNaN};
                std::string m_status = "ok";
                try {
                    m = multiplication_schatten(MultiplierKind::First, lam, a, p);
                } catch (const Error& e) {
                    m_status = e.what();
                    diverged = true;
                }
                const double K = rank_one_K(lam, a);
                const auto R = std::max<index_t>(8, static_cast<index_t>(std::ceil(4.0 * Y / sp)));
                const auto tr = truncated_commutator_schatten(lam, a, p, R);
                if (i == 0) first = tr;
                last = tr;
                const auto B = besov_norm(counterexample_symbol(SymbolOrder::First, lam, a), BesovParams(p, cfg.besov_tolerance));
                ys.push_back(Y);
                ms.push_back(m.p_sum);
                ks.push_back(K);
                bs.push_back(B.norm);
                csv.row({num(a), num(p), num(Y), num(m.p_sum), num(m.uncertainty), "\"" + m_status + "\"", num(K),
                         std::to_string(R), num(tr.lower_p_sum), num(tr.upper_p_sum), num(B.norm),
                         std::to_string(B.window)});
            }
            json d;
            if (diverged) {
                d["m_slope"] = nullptr;
                rep.failures.push_back(name + ": ‖M_λ‖_{S^p}^p diverges, no growth slope");
            } else {
                const double s = slope(ys, ms);
                d["m_slope"] = s;
                if (std::abs(s - (1.0 - p)) > 0.05)
                    rep.failures.push_back(name + ": slope " + num(s) + " differs from 1-p by more than 0.05");
            }
            const auto [kmin, kmax] = std::minmax_element(ks.begin(), ks.end());
            const auto [bmin, bmax] = std::minmax_element(bs.begin(), bs.end());
            const double growth = last.lower_p_sum / first.upper_p_sum;
            d["rank_one_k_spread"] = *kmax / *kmin;
            d["besov_spread"] = *bmax / *bmin;
            d["truncated_commutator_growth"] = growth;
            rep.details[name] = d;
            Band& band = band_for(rep, name + ",besov");
            for (double b : bs) band.add(b);
            // boundedness of K and B against growth of C is the p <= 1/2 claim
            if (p > 0.5) continue;
            if (*kmax / *kmin > 10.0) rep.failures.push_back(name + ": rank-one K not bounded");
            if (growth <= 10.0) rep.failures.push_back(name + ": truncated commutator growth " + num(growth) + " <= 10");
            if (*bmax / *bmin >= 10.0) rep.failures.push_back(name + ": Besov norm of psi_lambda varies by >= 10");
        }
    }
    return rep;
}

ExperimentReport run_thm2_suite(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "thm2_suite";
    CsvWriter csv(cfg.out_dir + "/thm2_suite.csv",
                  {"a", "part", "p", "cell", "support", "schatten", "besov", "ratio", "diff_minus_i", "diff_half_i",
                   "tail_bound", "status"});
    std::uint64_t cell = 0;
    for (double a : a_values(cfg)) {
        const Lattice lat(a);
        const auto random_psi = [&](std::mt19937_64& rng, bool kernel_sampled) {
            if (!kernel_sampled) {
                std::uniform_int_distribution<int> len(2, 12), start(-5, 5);
                const int L = len(rng);
                const index_t k0 = start(rng);
                std::vector<cplx> v;
                for (int i = 0; i < L; ++i) v.push_back(gaussian_c(rng));
                return LatticeFunction(lat, k0, v);
            }
            // Σ c·K^-_{a,μ} on Z_a, truncated to |k| <= 32
            std::uniform_real_distribution<double> re(-10.0, 10.0), im(-1.0, 1.0);
            std::vector<HankelAtom> atoms;
            for (int i = 0; i < 2; ++i) atoms.push_back({cplx(re(rng) * lat.spacing(), im(rng) / a), gaussian_c(rng)});
            std::vector<cplx> v;
            for (index_t k = -32; k <= 32; ++k) {
                cplx s = 0.0;
                for (const auto& at : atoms) s += at.c * kernel_eval({KernelFamily::NegativeHalfBand, a, at.mu}, lat.point(k));
                v.push_back(s);
            }
            return LatticeFunction(lat, -32, v);
        };
        const auto run_band = [&](const std::string& part, CommutatorVariant variant, double p) {
            const std::string name = band_name(a, p) + "," + part;
            Band& band = band_for(rep, name);
            for (int s = 0; s < cfg.symbols_per_cell; ++s, ++cell) {
                auto rng = cell_rng(cfg.seed, rep.experiment, cell);
                const bool kernel = s % 4 == 3;
                const auto psi = random_psi(rng, kernel);
                const double S = schatten_quasinorm(commutator_singular_values(psi, variant), p);
                const double B = besov_norm(psi, BesovParams(p, cfg.besov_tolerance)).norm;
                const double ratio = S / B;
                std::string status = kernel ? "kernel_sampled" : "random_support";
                if (B == 0.0 && S == 0.0) {
                    status = "zero";
                    ++band.excluded;
                } else {
                    band.add(ratio);
                }
                csv.row({num(a), part, num(p), std::to_string(cell), std::to_string(psi.values().size()), num(S),
                         num(B), num(ratio), "", "", "", status});
            }
            check_spread(rep, name, band, 1e3);
        };
        for (double p : cfg.p_list) run_band("rectangular", CommutatorVariant::Rectangular, p);
        run_band("square", CommutatorVariant::Square, 1.0);

        // Hankel identity on rows and columns −N..N
        double worst_literal = 0.0, worst_derived = 0.0;
        const index_t N = cfg.hankel_window;
        for (int s = 0; s < 10; ++s, ++cell) {
            auto rng = cell_rng(cfg.seed, rep.experiment, cell);
            std::uniform_int_distribution<int> count(1, 3);
            std::uniform_real_distribution<double> re(-20.0, 20.0), im(-2.0, 2.0);
            std::vector<HankelAtom> atoms;
            const int m = count(rng);
            double c_psi = 0.0;
            for (int i = 0; i < m; ++i) {
                atoms.push_back({cplx(re(rng) * lat.spacing(), im(rng) / a), gaussian_c(rng)});
                c_psi += std::abs(atoms.back().c) * (1.0 + std::exp(a * std::abs(atoms.back().mu.imag())));
            }
            // half-length with 8C/(aπ²L(L−T)) <= 1e-9
            const double T = (2.0 * static_cast<double>(N) + 1.0) * lat.spacing();
            const double L = 0.5 * T + std::sqrt(0.25 * T * T + 8.0 * c_psi / (a * pi * pi * 1e-9)) + lat.spacing();
            const auto r = hankel_commutator_identity(atoms, a, N, L);
            worst_literal = std::max(worst_literal, r.diff_minus_i);
            worst_derived = std::max(worst_derived, r.diff_half_i);
            csv.row({num(a), "hankel", "", std::to_string(cell), std::to_string(2 * N + 1), "", "", "",
                     num(r.diff_minus_i), num(r.diff_half_i), num(r.tail_bound), "identity"});
        }
        const std::string name = "a=" + num(a) + ",hankel";
        rep.details[name] = {{"max_diff_minus_i", worst_literal}, {"max_diff_half_i", worst_derived}};
        if (worst_literal > 1e-6)
            rep.failures.push_back(name + ": Γ vs −i·C̃ differs by " + num(worst_literal) +
                                   " (vs (i/2)·C̃: " + num(worst_derived) + ")");
        if (worst_derived > 1e-6) rep.failures.push_back(name + ": Γ vs (i/2)·C̃ differs by " + num(worst_derived));
    }
    return rep;
}

ExperimentReport run_lemma_l2_check(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "lemma_l2_check";
    CsvWriter csv(cfg.out_dir + "/lemma_l2_check.csv",
                  {"a", "p", "cell", "atoms", "schatten_truncated", "lp_norm", "lp_tail_bound", "ratio", "status"});
    constexpr index_t N = 48;
    std::uint64_t cell = 0;
    for (double a : a_values(cfg)) {
        const double h = pi / a;
        const double L = 400.0 * h;
        const auto rule = composite_gauss_legendre(-L, L, h, 16);
        for (double p : cfg.p_list) {
            const std::string name = band_name(a, p);
            Band& band = band_for(rep, name);
            for (int s = 0; s < cfg.symbols_per_cell; ++s, ++cell) {
                auto rng = cell_rng(cfg.seed, rep.experiment, cell);
                std::uniform_int_distribution<int> pos(-6, 6), cnt(2, 4);
                std::vector<std::pair<index_t, cplx>> atoms;
                const int m = s == 0 ? 1 : cnt(rng);
                for (int i = 0; i < m; ++i) atoms.emplace_back(pos(rng), gaussian_c(rng));
                // p <= 1 needs the 1/x tails to cancel: Σ(−1)^k c_k = 0
                const bool cancel = p <= 1.0;
                if (cancel) {
                    cplx alt = 0.0;
                    for (const auto& [k, c] : atoms) alt += (k % 2 == 0 ? 1.0 : -1.0) * c;
                    auto& [k_last, c_last] = atoms.back();
                    c_last -= (k_last % 2 == 0 ? 1.0 : -1.0) * alt;
                }
                const auto phi = [&](double x) {
                    cplx v = 0.0;
                    for (const auto& [k, c] : atoms)
                        v += c * kernel_eval({KernelFamily::FullBand, a, cplx(h * static_cast<double>(k), 0.0)}, x);
                    return v;
                };
                double sum = 0.0;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) sum += rule.weights[q] * std::pow(std::abs(phi(rule.nodes[q])), p);
                // |φ(x)| <= B/(|x| − X)^r beyond the atoms; r = 2 once the tails cancel
                double B = 0.0, X = 0.0;
                for (const auto& [k, c] : atoms) X = std::max(X, h * std::abs(static_cast<double>(k)));
                for (const auto& [k, c] : atoms) B += std::abs(c) * (cancel ? h * std::abs(static_cast<double>(k)) : 1.0) / pi;
                const double r = cancel ? 2.0 : 1.0;
                std::string status = "ok";
                double tail = kNaN;
                if (r * p > 1.0) {
                    tail = 2.0 * std::pow(B, p) * std::pow(L - X, 1.0 - r * p) / (r * p - 1.0);
                } else {
                    status = "lp_tail_not_bounded";
                }
                const double lp = std::pow(sum, 1.0 / p);
                const auto dense = dense_toeplitz_sinc(phi, a, N, {L, 16, std::nullopt});
                const double S = schatten_quasinorm(dense_singular_values(dense.matrix), p);
                double ratio = kNaN;
                if (lp == 0.0 && S == 0.0) {
                    status = "zero";
                    ++band.excluded;
                } else if (status == "ok") {
                    ratio = S / lp;
                    band.add(ratio);
                } else {
                    ++band.excluded;
                }
                csv.row({num(a), num(p), std::to_string(cell), std::to_string(atoms.size()), num(S), num(lp), num(tail),
                         num(ratio), status});
            }
            check_spread(rep, name, band, 1e3);
        }
    }
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    if (cfg.experiment == "thm1_comparability") rep = run_thm1_comparability(cfg);
    else if (cfg.experiment == "prop_p3_growth") rep = run_prop_p3_growth(cfg);
    else if (cfg.experiment == "thm2_suite") rep = run_thm2_suite(cfg);
    else if (cfg.experiment == "lemma_l2_check") rep = run_lemma_l2_check(cfg);
    else throw Error("unknown experiment '" + cfg.experiment + "'");
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream(cfg.out_dir + "/" + cfg.experiment + "_summary.json") << rep.summary().dump(2) << '\n';
    return rep;
}

}  // namespace pws
