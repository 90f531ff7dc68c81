#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "corrperc/analytics.hpp"
#include "corrperc/joint_dist.hpp"
#include "corrperc/mc_sim.hpp"
#include "corrperc/validate.hpp"

namespace {

constexpr const char *kCsvVersion = "# corrperc-csv v1\n";
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

// Numbers are printed through printf-style formatting so re-runs are
// byte-identical; "%.17g" round-trips doubles exactly, "%.12g" keeps curve
// files readable.
std::string fmt(double v, const char *spec) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Output {
    std::ofstream file;
    std::ostream *os = &std::cout;

    explicit Output(const std::string &path) {
        if (path != "-") {
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream &stream() { return *os; }
};

// Shared distribution-source flags: either a parametric family or a custom
// triplet CSV, always with an explicit maximum degree.
struct DistSource {
    std::string family;
    std::string input;
    double eps = 0.0;
    double tau = 2.5;
    double t = 0.0;
    int N = 0;

    void attach(CLI::App *cmd, bool family_only = false) {
        auto *fam = cmd->add_option("--family", family,
                                    "Parametric family: bimodal, exponential or powerlaw");
        cmd->add_option("--eps", eps, "Bimodal high-degree weight");
        cmd->add_option("--tau", tau, "Power-law tail exponent");
        cmd->add_option("--t", t, "Diagonal coupling strength in [0,1]");
        if (family_only) {
            fam->required();
        } else {
            auto *in = cmd->add_option("--in", input, "Custom distribution CSV (j,k,weight rows)");
            cmd->add_option("--N", N, "Maximum degree")->required();
            fam->excludes(in);
        }
    }

    corrperc::Family parsed_family() const {
        if (family == "bimodal") return corrperc::Family::bimodal;
        if (family == "exponential") return corrperc::Family::exponential;
        if (family == "powerlaw") return corrperc::Family::powerlaw;
        throw std::invalid_argument("unknown family: " + family);
    }

    double family_param() const {
        return parsed_family() == corrperc::Family::bimodal ? eps : tau;
    }

    corrperc::JointDistribution build(int degree) const {
        if (!input.empty()) return corrperc::load_custom_file(input, degree);
        if (family.empty())
            throw std::invalid_argument("either --family or --in must be given");
        return corrperc::build_family(parsed_family(), family_param(), t, degree);
    }
    corrperc::JointDistribution build() const { return build(N); }
};

std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    if (grid.empty()) throw std::invalid_argument("empty grid list");
    return grid;
}

int cmd_dist(const DistSource &src, std::optional<double> percolate, const std::string &out_path) {
    corrperc::JointDistribution e = src.build();
    if (percolate) e = e.percolated(*percolate);
    Output out(out_path);
    out.stream() << kCsvVersion << "j,k,weight\n";
    const int N = e.max_degree();
    for (int j = 1; j <= N; ++j)
        for (int k = j; k <= N; ++k) {
            const double w = (j == k) ? e(j, k) : 2.0 * e(j, k);
            if (w == 0.0) continue;
            out.stream() << j << "," << k << "," << fmt(w, "%.17g") << "\n";
        }
    return 0;
}

int cmd_analyze(const DistSource &src, double pi_start, double pi_stop, double pi_step,
                double tol, long max_iter, const std::string &out_path) {
    if (!(pi_start > 0.0) || !(pi_start <= pi_stop) || !(pi_stop <= 1.0) || !(pi_step > 0.0))
        throw std::invalid_argument("grid must satisfy 0 < start <= stop <= 1 with positive step");
    const corrperc::JointDistribution e = src.build();
    const corrperc::PearsonDecay decay = corrperc::pearson_decay(e);
    const std::vector<double> p = e.node_distribution();

    Output out(out_path);
    out.stream() << kCsvVersion << "pi,s,w,r,p0,supercritical\n";
    long failures = 0;
    long rows = 0;
    bool have_prev = false;
    bool prev_supercritical = false;
    const long steps = static_cast<long>(std::floor((pi_stop - pi_start) / pi_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double clamped = std::min(pi_start + static_cast<double>(i) * pi_step, 1.0);
        ++rows;
        double s = std::nan("");
        double w = std::nan("");
        try {
            const corrperc::GiantSolution giant = corrperc::giant_component(e, clamped, tol, max_iter);
            s = giant.s;
            w = corrperc::finite_component_size(e, clamped, giant);
        } catch (const std::exception &ex) {
            ++failures;
            std::cerr << "row pi=" << fmt(clamped, "%.12g") << " failed: " << ex.what() << "\n";
        }
        // The giant fraction converges to s = 0 up to solver tolerance below
        // the threshold, so a small absolute cut separates the phases.
        const bool supercritical = !std::isnan(s) && s > 1e-9;
        if (!std::isnan(s)) {
            // An onset between neighbouring rows brackets the divergence of w
            // even when no grid point lands close enough to trip the
            // condition-number detector.
            if (have_prev && supercritical != prev_supercritical && !std::isnan(w))
                w = std::numeric_limits<double>::infinity();
            prev_supercritical = supercritical;
            have_prev = true;
        }

        const double p0 = corrperc::thinned_node_distribution(p, clamped)[0];
        const double r = decay.defined ? decay.at(clamped) : std::nan("");
        out.stream() << fmt(clamped, "%.12g") << "," << fmt(s, "%.12g") << ","
                     << fmt(w, "%.12g") << "," << fmt(r, "%.12g") << ","
                     << fmt(p0, "%.12g") << "," << (supercritical ? 1 : 0) << "\n";
    }
    if (failures == rows) {
        std::cerr << "every grid row failed\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_threshold(const DistSource &src, const std::string &n_list, const std::string &t_list,
                  double pi_step, const std::string &out_path) {
    std::vector<int> sizes;
    for (double v : parse_grid(n_list)) sizes.push_back(static_cast<int>(v));
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("--N-list must be strictly ascending");
    const std::vector<double> ts =
        t_list.empty() ? std::vector<double>{src.t} : parse_grid(t_list);

    Output out(out_path);
    out.stream() << kCsvVersion << "N,t,pi_c\n";
    long failures = 0;
    long rows = 0;
    for (int n : sizes)
        for (double t : ts) {
            ++rows;
            try {
                DistSource row = src;
                row.t = t;
                const corrperc::ThresholdResult res =
                    corrperc::find_threshold(row.build(n), pi_step);
                out.stream() << n << "," << fmt(t, "%.12g") << ","
                             << (res.pi_c ? fmt(*res.pi_c, "%.12g") : std::string()) << "\n";
            } catch (const std::exception &ex) {
                ++failures;
                std::cerr << "row N=" << n << " t=" << fmt(t, "%.12g")
                          << " failed: " << ex.what() << "\n";
            }
        }
    if (failures == rows) {
        std::cerr << "every threshold row failed\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_simulate(const DistSource &src, long nodes, const std::string &pi_grid, int replicas,
                 std::uint64_t seed, const std::string &out_path) {
    const corrperc::JointDistribution e = src.build();
    const std::vector<double> grid = parse_grid(pi_grid);
    const std::vector<corrperc::mc::EnsembleRow> rows =
        corrperc::mc::run_ensemble(e, nodes, grid, replicas, seed);

    Output out(out_path);
    out.stream() << kCsvVersion
                 << "pi,s_mean,s_stderr,w_mean,w_stderr,r_mean,replicas,n,seed\n";
    for (const corrperc::mc::EnsembleRow &row : rows)
        out.stream() << fmt(row.pi, "%.12g") << "," << fmt(row.s_mean, "%.12g") << ","
                     << fmt(row.s_stderr, "%.12g") << "," << fmt(row.w_mean, "%.12g") << ","
                     << fmt(row.w_stderr, "%.12g") << "," << fmt(row.r_mean, "%.12g") << ","
                     << replicas << "," << nodes << "," << seed << "\n";
    return 0;
}

int cmd_validate(const std::string &suite) {
    const std::vector<corrperc::validate::Check> checks = corrperc::validate::run_suite(suite);
    int failed = 0;
    for (const corrperc::validate::Check &c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << ": " << c.detail;
        std::cout << "\n";
        if (!c.pass) ++failed;
    }
    std::cout << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed == 0 ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
    if (const char *threads = std::getenv("CORRPERC_THREADS")) {
        const int n = std::atoi(threads);
#ifdef _OPENMP
        if (n > 0) omp_set_num_threads(n);
#else
        (void)n;
#endif
    }

    CLI::App app{"Analytic and Monte Carlo bond percolation on degree-correlated networks"};
    app.require_subcommand(1);

    DistSource dist_src;
    std::optional<double> percolate;
    std::string dist_out = "-";
    CLI::App *dist = app.add_subcommand("dist", "Emit a joint end-degree distribution as CSV");
    dist_src.attach(dist);
    dist->add_option("--percolate", percolate, "Apply bond retention before emitting");
    dist->add_option("--out", dist_out, "Output path, - for stdout");

    DistSource analyze_src;
    double pi_start = 1e-3;
    double pi_stop = 1.0;
    double pi_step = 1e-3;
    double tol = 1e-12;
    long max_iter = 1000000;
    std::string analyze_out = "-";
    CLI::App *analyze = app.add_subcommand("analyze", "Sweep analytic s, w and r over retention");
    analyze_src.attach(analyze);
    analyze->add_option("--pi-start", pi_start, "First retention value");
    analyze->add_option("--pi-stop", pi_stop, "Last retention value");
    analyze->add_option("--pi-step", pi_step, "Grid step");
    analyze->add_option("--tol", tol, "Fixed-point tolerance");
    analyze->add_option("--max-iter", max_iter, "Fixed-point iteration cap");
    analyze->add_option("--out", analyze_out, "Output path, - for stdout");

    DistSource threshold_src;
    std::string n_list;
    std::string t_list;
    double threshold_step = 1e-3;
    std::string threshold_out = "-";
    CLI::App *threshold =
        app.add_subcommand("threshold", "Percolation threshold over a size and coupling grid");
    threshold_src.attach(threshold, /*family_only=*/true);
    threshold->add_option("--N-list", n_list, "Ascending comma-separated maximum degrees")
        ->required();
    threshold->add_option("--t-list", t_list, "Comma-separated coupling strengths");
    threshold->add_option("--pi-step", threshold_step, "Scan grid step");
    threshold->add_option("--out", threshold_out, "Output path, - for stdout");

    DistSource sim_src;
    long nodes = 100000;
    std::string pi_grid;
    int replicas = 16;
    std::uint64_t seed = 1;
    std::string sim_out = "-";
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo ensemble over retention values");
    sim_src.attach(simulate);
    simulate->add_option("--nodes", nodes, "Nodes per sampled graph");
    auto *pi_single = simulate->add_option("--pi", pi_grid, "Retention value");
    simulate->add_option("--pi-grid", pi_grid, "Comma-separated retention values")
        ->excludes(pi_single);
    simulate->add_option("--replicas", replicas, "Independent replicas per value");
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--out", sim_out, "Output path, - for stdout");

    std::string suite = "all";
    CLI::App *validate = app.add_subcommand("validate", "Run the self-validation suites");
    validate->add_option("--suite", suite, "moments, oracle, mc or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (dist->parsed()) return cmd_dist(dist_src, percolate, dist_out);
        if (analyze->parsed())
            return cmd_analyze(analyze_src, pi_start, pi_stop, pi_step, tol, max_iter, analyze_out);
        if (threshold->parsed())
            return cmd_threshold(threshold_src, n_list, t_list, threshold_step, threshold_out);
        if (simulate->parsed())
            return cmd_simulate(sim_src, nodes, pi_grid, replicas, seed, sim_out);
        if (validate->parsed()) return cmd_validate(suite);
    } catch (const std::invalid_argument &ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::exception &ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
