// Copyright 2026 The zerot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// zerot: command-line front end.
//
//   zerot sweep        P_fail over a (model, L, p) grid -> CSV + manifest
//   zerot fit          finite-size-scaling fit of a sweep CSV -> JSON report
//   zerot trial        one decoded sample, dumped as JSON
//   zerot oracle-check blossom vs exhaustive matching on random instances
//   zerot nishimori    K_p and T/J on the Nishimori line
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage or input error.
// Relative output paths are placed under $ZEROT_OUTPUT_DIR when it is set.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zerot/decoder.hpp"
#include "zerot/disorder.hpp"
#include "zerot/errors.hpp"
#include "zerot/lattice.hpp"
#include "zerot/matcher.hpp"
#include "zerot/montecarlo.hpp"
#include "zerot/scaling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zerot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kReportSchemaVersion = 1;

// Thrown for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path output_path(const std::string& name) {
    fs::path p(name);
    if (p.is_absolute())
        return p;
    if (const char* dir = std::getenv("ZEROT_OUTPUT_DIR"); dir && *dir) {
        fs::create_directories(dir);
        return fs::path(dir) / p;
    }
    return p;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed)
        return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump(2) << '\n';
        if (!out.flush())
            throw IoError("cannot write " + tmp.string(), 0);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot replace " + path.string() + ": " + ec.message(), 0);
}

json run_manifest(const std::string& kind, json config) {
    return json{{"schema_version", kReportSchemaVersion}, {"kind", kind}, {"config", std::move(config)}};
}

// "8,12,16" and ranges "9..14", mixed freely.
std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size())
            throw InputError("bad lattice size '" + s + "' in --sizes");
        return v;
    };
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            throw InputError("empty entry in --sizes '" + text + "'");
        if (auto dots = tok.find(".."); dots != std::string::npos) {
            const int lo = to_int(tok.substr(0, dots));
            const int hi = to_int(tok.substr(dots + 2));
            if (hi < lo)
                throw InputError("descending size range '" + tok + "'");
            for (int L = lo; L <= hi; ++L)
                out.push_back(L);
        } else {
            out.push_back(to_int(tok));
        }
    }
    if (out.empty())
        throw InputError("--sizes is empty");
    return out;
}

std::string fmt(double v, int digits = 6) {
    if (!std::isfinite(v))
        return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

json site_json(const Site& s, const LatticeSpec& spec) {
    json t = json::array();
    for (int i = 0; i < spec.dimension(); ++i)
        t.push_back(s[i]);
    return t;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string model;
    std::string sizes;
    std::string grid;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out;
    std::string from_manifest;
    bool dry_run = false;
    std::optional<int> prune;
};

int cmd_sweep(const SweepArgs& a) {
    SweepPlan plan;
    fs::path csv;
    fs::path manifest;
    bool seed_drawn = false;
    if (!a.from_manifest.empty()) {
        if (!a.model.empty() || !a.sizes.empty() || !a.grid.empty() || a.samples || a.seed || a.prune)
            throw UsageError("--from-manifest takes the plan from the manifest; drop the plan options");
        plan = plan_from_manifest(a.from_manifest);
        if (a.out.empty()) {
            std::ifstream in(a.from_manifest);
            const json j = json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.contains("csv"))
                throw InputError("manifest " + a.from_manifest + " names no CSV");
            manifest = a.from_manifest;
            csv = manifest.parent_path() / j["csv"].get<std::string>();
        }
    } else {
        if (a.model.empty() || a.sizes.empty() || a.grid.empty() || !a.samples)
            throw UsageError("sweep needs --model, --sizes, --p and --samples (or --from-manifest)");
        plan.model = parse_model(a.model);
        plan.sizes = parse_sizes(a.sizes);
        plan.grid = PGrid::parse(a.grid);
        plan.samples = *a.samples;
        seed_drawn = !a.seed;
        plan.master_seed = resolve_seed(a.seed);
        plan.nearest_neighbors = a.prune;
    }
    plan.threads = a.threads;
    if (csv.empty()) {
        csv = output_path(a.out.empty() ? "pfail_" + std::string(model_name(plan.model)) + ".csv" : a.out);
        manifest = fs::path(csv).replace_extension(".manifest.json");
    }

    const SweepEstimate est = plan.estimate();
    std::cerr << "plan: " << est.points << " points, " << est.trials << " trials, ~" << fmt(est.mean_defects_largest, 4)
              << " defects per trial at the largest size\n";
    if (a.dry_run) {
        std::cout << json{{"schema_version", kManifestSchemaVersion},
                          {"kind", "sweep-plan"},
                          {"plan", json::parse(plan_to_json(plan))},
                          {"estimate",
                           {{"points", est.points},
                            {"trials", est.trials},
                            {"mean_defects_largest", est.mean_defects_largest}}},
                          {"csv", csv.string()},
                          {"manifest", manifest.string()}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    if (plan.nearest_neighbors)
        std::cerr << "warning: nearest-neighbor pruning (m=" << *plan.nearest_neighbors
                  << ") makes matching approximate\n";

    const json config{{"subcommand", "sweep"},
                      {"model", model_name(plan.model)},
                      {"sizes", plan.sizes},
                      {"p", plan.grid.str()},
                      {"samples", plan.samples},
                      {"seed", plan.master_seed},
                      {"seed_drawn", seed_drawn},
                      {"threads", plan.threads},
                      {"prune", plan.nearest_neighbors ? json(*plan.nearest_neighbors) : json(nullptr)},
                      {"from_manifest", a.from_manifest.empty() ? json(nullptr) : json(a.from_manifest)},
                      {"csv", csv.string()},
                      {"manifest", manifest.string()}};
    FileSink sink(csv, manifest, plan, config.dump());
    const std::size_t resumed = sink.completed().size();
    if (resumed > 0)
        std::cerr << "resuming: " << resumed << " of " << est.points << " points already done\n";
    std::size_t done = resumed;
    const auto points = run_sweep(plan, sink, [&](const PfailPoint& pt) {
        ++done;
        std::cerr << "[" << done << "/" << est.points << "] " << model_name(pt.model) << " L=" << pt.size
                  << " p=" << pt.p.str() << " pfail=" << fmt(pt.pfail, 5) << " +- " << fmt(pt.std_error, 2) << " ("
                  << fmt(pt.wall_seconds, 3) << " s)\n";
        return true;
    });
    std::cout << "wrote " << points.size() << " rows to " << csv.string() << " (manifest " << manifest.string()
              << ", seed " << plan.master_seed << ")\n";
    return kExitOk;
}

// --- fit -------------------------------------------------------------------

struct FitArgs {
    std::string in;
    std::string parity;
    std::string ansatz = "quadratic";
    int min_size = 0;
    int bootstrap = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> p_ref;
    std::string out = "fit_report.json";
    bool selftest = false;
};

json fit_json(const ScalingFit& fit) {
    json params = json::array();
    for (const auto& p : fit.parameters)
        params.push_back({{"name", p.name},
                          {"value", p.value},
                          {"error", number(p.error)},
                          {"bootstrap_error", number(p.bootstrap_error)}});
    return json{{"model", model_name(fit.model)},
                {"ansatz", ansatz_name(fit.ansatz)},
                {"parity", parity_name(fit.parity)},
                {"parameters", params},
                {"chi2", fit.chi2},
                {"dof", fit.dof},
                {"chi2_per_dof", fit.chi2 / fit.dof},
                {"points_used", fit.points_used},
                {"sizes_used", fit.sizes_used},
                {"optimizer",
                 {{"starts", fit.starts}, {"starts_converged", fit.starts_converged}, {"iterations", fit.iterations}}},
                {"bootstrap_replicas", fit.bootstrap_replicas},
                {"warnings", fit.warnings}};
}

int cmd_fit(const FitArgs& a) {
    if (a.selftest == !a.in.empty())
        throw UsageError("fit needs exactly one of --in or --selftest");
    if (!a.selftest && a.parity.empty())
        throw UsageError("fit needs --parity even|odd|all");
    const Parity parity = parse_parity(a.parity.empty() ? "all" : a.parity);
    const Ansatz ansatz = parse_ansatz(a.ansatz);
    if (a.bootstrap < 0)
        throw InputError("--bootstrap must be >= 0");

    std::optional<SyntheticTruth> truth;
    fs::path csv_path = a.in;
    if (a.selftest) {
        SyntheticTruth t;
        std::vector<int> sizes = {8, 12, 16, 24};
        if (ansatz == Ansatz::corrected) {
            t.D_even = 0.165;
            t.mu_even = 0.71;
            t.D_odd = -0.12;
            t.mu_odd = 0.9;
            sizes = {8, 9, 12, 13, 16, 17, 24, 25};
        }
        const auto pts = synthetic_points(Model::rbim2d, t, sizes, PGrid::parse("0.095:0.115:0.002"), 10000);
        csv_path = output_path("selftest_" + std::string(ansatz_name(ansatz)) + ".csv");
        std::ofstream out(csv_path, std::ios::trunc);
        out << kCsvHeader << '\n';
        for (const auto& pt : pts)
            out << csv_row(pt) << '\n';
        if (!out.flush())
            throw IoError("cannot write " + csv_path.string(), 0);
        truth = t;
        std::cerr << "selftest: wrote " << pts.size() << " synthetic rows to " << csv_path.string() << '\n';
    }

    const auto rows = read_pfail_csv(csv_path);
    const auto used = select_points(rows, parity, a.min_size);
    std::cerr << "using " << used.size() << " of " << rows.size() << " rows (parity " << parity_name(parity)
              << ", L >= " << a.min_size << ")\n";

    FitOptions opts;
    opts.min_size = a.min_size;
    opts.bootstrap_replicas = a.bootstrap;
    opts.bootstrap_seed = resolve_seed(a.seed);
    const ScalingFit fit = ansatz == Ansatz::quadratic ? fit_quadratic(rows, parity, opts)
                                                       : fit_corrected(rows, parity, opts);

    json report = run_manifest("fit", {{"subcommand", "fit"},
                                       {"in", csv_path.string()},
                                       {"parity", parity_name(parity)},
                                       {"ansatz", ansatz_name(ansatz)},
                                       {"min_size", a.min_size},
                                       {"bootstrap", a.bootstrap},
                                       {"seed", opts.bootstrap_seed},
                                       {"seed_drawn", !a.seed},
                                       {"selftest", a.selftest}});
    report["rows_in_file"] = rows.size();
    report["fit"] = fit_json(fit);

    try {
        const CrossingEstimate c = crossing_estimate(used);
        json pairs = json::array();
        for (const auto& pc : c.pairs)
            pairs.push_back({{"L_a", pc.size_a}, {"L_b", pc.size_b}, {"p", pc.p ? json(*pc.p) : json(nullptr)}});
        report["crossing"] = {{"p_c0", c.p_c0 ? json(*c.p_c0) : json(nullptr)},
                              {"spread", c.spread},
                              {"pairs", pairs},
                              {"warnings", c.warnings}};
    } catch (const InputError& e) {
        report["crossing"] = {{"error", e.what()}};
    }
    const double p_ref = a.p_ref.value_or(fit.p_c0());
    try {
        const SlopeExponent s = slope_exponent(used, p_ref);
        json slopes = json::array();
        for (const auto& ss : s.slopes)
            slopes.push_back({{"L", ss.size},
                              {"slope", ss.slope},
                              {"error", ss.error},
                              {"points", ss.points},
                              {"used", ss.used}});
        report["slope_exponent"] = {{"p_ref", p_ref},
                                    {"nu0", s.nu0},
                                    {"error", number(s.error)},
                                    {"slopes", slopes},
                                    {"warnings", s.warnings}};
    } catch (const InputError& e) {
        report["slope_exponent"] = {{"p_ref", p_ref}, {"error", e.what()}};
    }

    bool ok = true;
    if (truth) {
        const std::vector<std::pair<std::string, double>> expected = {
            {"A", truth->A},         {"B", truth->B},           {"C", truth->C},
            {"p_c0", truth->p_c0},   {"nu0", truth->nu0},       {"D_even", truth->D_even},
            {"mu_even", truth->mu_even}, {"D_odd", truth->D_odd}, {"mu_odd", truth->mu_odd}};
        double worst = 0.0;
        json per = json::object();
        for (const auto& [name, value] : expected) {
            if (!fit.has(name))
                continue;
            const double rel = std::abs(fit.value(name) - value) / std::abs(value);
            per[name] = rel;
            worst = std::max(worst, rel);
        }
        ok = worst <= 1e-3;
        report["selftest"] = {{"relative_errors", per}, {"max_relative_error", worst}, {"passed", ok}};
    }

    const fs::path out = output_path(a.out);
    write_json(out, report);

    std::cout << model_name(fit.model) << " " << ansatz_name(fit.ansatz) << " fit, parity " << parity_name(parity)
              << ", " << fit.points_used << " points, sizes";
    for (int L : fit.sizes_used)
        std::cout << ' ' << L;
    std::cout << '\n';
    for (const auto& p : fit.parameters)
        std::cout << "  " << std::left << std::setw(8) << p.name << " = " << fmt(p.value, 8) << " +- "
                  << fmt(p.error, 3) << (std::isnan(p.bootstrap_error) ? "" : " (bootstrap " + fmt(p.bootstrap_error, 3) + ")")
                  << '\n';
    std::cout << "  chi2/dof = " << fmt(fit.chi2, 6) << "/" << fit.dof << '\n';
    if (report["slope_exponent"].contains("nu0"))
        std::cout << "  log-slope nu0 = " << fmt(report["slope_exponent"]["nu0"].get<double>(), 5) << '\n';
    for (const auto& w : fit.warnings)
        std::cerr << "warning: " << w << '\n';
    std::cout << "report: " << out.string() << '\n';
    if (truth)
        std::cout << "selftest " << (ok ? "passed" : "FAILED") << ": max relative error "
                  << fmt(report["selftest"]["max_relative_error"].get<double>(), 3) << '\n';
    return ok ? kExitOk : kExitRuntime;
}

// --- trial -----------------------------------------------------------------

struct TrialArgs {
    std::string model;
    int size = 0;
    std::string p;
    std::uint64_t sample_index = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> tie_seed;
    std::optional<int> prune;
    std::string dump = "trial.json";
};

int cmd_trial(const TrialArgs& a) {
    const Model model = parse_model(a.model);
    const LatticeSpec spec(model_dimension(model), a.size);
    const Decimal p = Decimal::parse(a.p);
    const RngPolicy rng{resolve_seed(a.seed)};
    const std::uint64_t tie = a.tie_seed.value_or(rng.tie_seed(model, a.size, p, a.sample_index));
    MatchOptions opts;
    opts.nearest_neighbors = a.prune;

    const DisorderSample sample = generate_sample(spec, model, p, a.sample_index, rng);
    const TrialRecord rec = decode(sample.error_chain, spec, tie, opts);

    json pairs = json::array();
    for (const auto& [u, v] : rec.matching.pairs)
        pairs.push_back({site_json(u, spec), site_json(v, spec)});
    json winding = json::array();
    for (int i = 0; i < spec.dimension(); ++i)
        winding.push_back(rec.outcome.cycle_class.winding[i]);

    json j = run_manifest("trial", {{"subcommand", "trial"},
                                    {"model", model_name(model)},
                                    {"L", a.size},
                                    {"p", p.str()},
                                    {"sample_index", a.sample_index},
                                    {"seed", rng.master_seed},
                                    {"seed_drawn", !a.seed},
                                    {"tie_seed", tie},
                                    {"prune", a.prune ? json(*a.prune) : json(nullptr)}});
    j["error_chain"] = json::parse(chain_json(rec.error_chain, spec));
    j["defects"] = json::parse(defects_json(rec.defects, spec));
    j["matching"] = {{"pairs", pairs},
                     {"total_weight", rec.matching.total_weight},
                     {"jittered_weight", rec.matching.jittered_weight},
                     {"approximate", rec.matching.approximate}};
    j["recovery_chain"] = json::parse(chain_json(rec.recovery_chain, spec));
    j["cycle_class"] = {{"winding", winding}, {"trivial", rec.outcome.cycle_class.trivial()}};
    j["success"] = rec.outcome.success;
    j["error_weight"] = rec.outcome.error_weight;
    j["recovery_weight"] = rec.outcome.recovery_weight;

    if (a.dump == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        const fs::path out = output_path(a.dump);
        write_json(out, j);
        std::cout << (rec.outcome.success ? "success" : "failure") << ": |E|=" << rec.outcome.error_weight
                  << " defects=" << rec.defects.size() << " matching weight=" << rec.matching.total_weight
                  << " |E'|=" << rec.outcome.recovery_weight << " class=" << winding.dump() << " (dump "
                  << out.string() << ")\n";
    }
    return kExitOk;
}

// --- oracle-check ----------------------------------------------------------

struct OracleArgs {
    std::uint64_t instances = 500;
    int max_defects = 12;
    std::optional<std::uint64_t> seed;
    std::optional<int> dimension;
    std::string manifest = "oracle_check.json";
};

int cmd_oracle_check(const OracleArgs& a) {
    if (a.max_defects > static_cast<int>(kBruteForceLimit))
        throw UsageError("--max-defects " + std::to_string(a.max_defects) + " refused: the exhaustive oracle is limited to " +
                         std::to_string(kBruteForceLimit) + " defects");
    const std::uint64_t seed = resolve_seed(a.seed);
    if (a.instances == 0)
        std::cerr << "warning: --instances 0 checks nothing; passing vacuously\n";
    const auto t0 = std::chrono::steady_clock::now();
    const OracleSummary s = run_oracle_check(a.instances, a.max_defects, seed, a.dimension);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j = run_manifest("oracle-check", {{"subcommand", "oracle-check"},
                                           {"instances", a.instances},
                                           {"max_defects", a.max_defects},
                                           {"dimension", a.dimension ? json(*a.dimension) : json(nullptr)},
                                           {"seed", seed},
                                           {"seed_drawn", !a.seed}});
    j["result"] = {{"instances", s.instances},
                   {"instances_2d", s.instances_2d},
                   {"instances_3d", s.instances_3d},
                   {"largest_instance", s.largest_instance},
                   {"mismatches", s.mismatches},
                   {"passed", s.mismatches == 0},
                   {"wall_seconds", secs}};
    write_json(output_path(a.manifest), j);
    std::cout << "oracle-check: " << s.instances << " instances (" << s.instances_2d << " 2D, " << s.instances_3d
              << " 3D, up to " << s.largest_instance << " defects), " << s.mismatches << " mismatches, seed " << seed
              << '\n';
    return s.mismatches == 0 ? kExitOk : kExitRuntime;
}

// --- nishimori -------------------------------------------------------------

struct NishimoriArgs {
    double p = 0.0;
    std::string manifest = "nishimori.json";
};

int cmd_nishimori(const NishimoriArgs& a) {
    const double k = nishimori_coupling(a.p);
    const double t = 1.0 / k;
    std::cout << "p = " << fmt(a.p, 10) << '\n'
              << "K_p = " << fmt(k, 10) << '\n'
              << "T/J = " << fmt(t, 10) << '\n';
    json j = run_manifest("nishimori", {{"subcommand", "nishimori"}, {"p", a.p}});
    j["result"] = {{"K_p", k}, {"T_over_J", std::isfinite(t) ? json(t) : json("inf")}};
    write_json(output_path(a.manifest), j);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zerot: zero-temperature threshold simulator for the 2D random-bond Ising model and the 3D "
                 "random-plaquette gauge model"};
    app.require_subcommand(1);

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Estimate P_fail over a (model, L, p) grid");
    sweep->add_option("--model", sw.model, "rbim2d or rpgm3d");
    sweep->add_option("--sizes", sw.sizes, "Lattice sizes, e.g. 8,12,16 or 9..14");
    sweep->add_option("--p", sw.grid, "p grid min:max:step or a single p (exact to 1e-6)");
    sweep->add_option("--samples", sw.samples, "Trials per point");
    sweep->add_option("--seed", sw.seed, "Master seed (drawn from system entropy if omitted)");
    sweep->add_option("--threads", sw.threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sw.out, "CSV path; the manifest goes next to it");
    sweep->add_option("--from-manifest", sw.from_manifest, "Resume (or with --out, re-run) a recorded sweep");
    sweep->add_flag("--dry-run", sw.dry_run, "Validate and size-estimate the plan without running it");
    sweep->add_option("--prune", sw.prune, "Match each defect only to its m nearest neighbors (approximate)");

    FitArgs ft;
    auto* fit = app.add_subcommand("fit", "Finite-size-scaling fit of a sweep CSV");
    fit->add_option("--in", ft.in, "Sweep CSV");
    fit->add_option("--parity", ft.parity, "even, odd or all");
    fit->add_option("--ansatz", ft.ansatz, "quadratic or corrected")->capture_default_str();
    fit->add_option("--min-size", ft.min_size, "Drop sizes below this")->capture_default_str();
    fit->add_option("--bootstrap", ft.bootstrap, "Gaussian bootstrap replicas (200 is typical)")->capture_default_str();
    fit->add_option("--seed", ft.seed, "Bootstrap seed");
    fit->add_option("--p-ref", ft.p_ref, "Reference p for the log-slope exponent (default: fitted p_c0)");
    fit->add_option("--out", ft.out, "JSON report path")->capture_default_str();
    fit->add_flag("--selftest", ft.selftest, "Fit synthetic ansatz data and check parameter recovery");

    TrialArgs tr;
    auto* trial = app.add_subcommand("trial", "Decode one sample and dump E, defects, matching, E' and class");
    trial->add_option("--model", tr.model, "rbim2d or rpgm3d")->required();
    trial->add_option("--size", tr.size, "Lattice size L")->required();
    trial->add_option("--p", tr.p, "Disorder concentration")->required();
    trial->add_option("--sample-index", tr.sample_index, "Sample index")->capture_default_str();
    trial->add_option("--seed", tr.seed, "Master seed");
    trial->add_option("--tie-seed", tr.tie_seed, "Override the derived tie-breaking seed");
    trial->add_option("--prune", tr.prune, "Nearest-neighbor pruning m (approximate)");
    trial->add_option("--dump", tr.dump, "JSON output path, '-' for stdout")->capture_default_str();

    OracleArgs oc;
    auto* oracle = app.add_subcommand("oracle-check", "Compare blossom matching with exhaustive enumeration");
    oracle->add_option("--instances", oc.instances, "Random instances")->capture_default_str();
    oracle->add_option("--max-defects", oc.max_defects, "Largest defect count (<= 14)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    oracle->add_option("--seed", oc.seed, "Instance seed");
    oracle->add_option("--dimension", oc.dimension, "Only 2D or only 3D instances")->check(CLI::IsMember({2, 3}));
    oracle->add_option("--manifest", oc.manifest, "Run manifest path")->capture_default_str();

    NishimoriArgs ni;
    auto* nishi = app.add_subcommand("nishimori", "Nishimori-line coupling K_p and temperature T/J");
    nishi->add_option("--p", ni.p, "Disorder concentration in (0, 1)")->required();
    nishi->add_option("--manifest", ni.manifest, "Run manifest path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sweep->parsed())
            return cmd_sweep(sw);
        if (fit->parsed())
            return cmd_fit(ft);
        if (trial->parsed())
            return cmd_trial(tr);
        if (oracle->parsed())
            return cmd_oracle_check(oc);
        return cmd_nishimori(ni);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FitFailure& e) {
        std::cerr << "fit failure: " << e.what() << " (best chi2 " << fmt(e.best_chi2()) << ")\n";
        return kExitRuntime;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
