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

#include "zerot/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "zerot/decoder.hpp"
#include "zerot/errors.hpp"

namespace zerot {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T value{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError(std::string("malformed ") + what + " '" + std::string(s) + "'");
    return value;
}

double parse_double(std::string_view s, const char* what) {
    // from_chars for double is available but strtod accepts the same output.
    std::string tmp(s);
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size())
        throw InputError(std::string("malformed ") + what + " '" + tmp + "'");
    return v;
}

void check_probability(Decimal p) {
    if (p < Decimal{} || p > Decimal::from_micros(Decimal::kScale))
        throw InputError("p must lie in [0, 1], got " + p.str());
}

json point_to_json(const PfailPoint& pt) {
    return json{{"L", pt.size},
                {"p", pt.p.str()},
                {"parity", pt.even() ? "even" : "odd"},
                {"n_samples", pt.n_samples},
                {"n_fail", pt.n_fail},
                {"pfail", pt.pfail},
                {"stderr", pt.std_error},
                {"wall_seconds", pt.wall_seconds}};
}

json plan_json(const SweepPlan& plan) {
    json j{{"model", model_name(plan.model)},
           {"sizes", plan.sizes},
           {"p_grid", plan.grid.str()},
           {"samples", plan.samples},
           {"master_seed", plan.master_seed},
           {"threads", plan.threads},
           {"approximate", plan.nearest_neighbors.has_value()}};
    j["nearest_neighbors"] = plan.nearest_neighbors ? json(*plan.nearest_neighbors) : json(nullptr);
    return j;
}

SweepPlan plan_from_json(const json& j) {
    SweepPlan plan;
    plan.model = parse_model(j.at("model").get<std::string>());
    plan.sizes = j.at("sizes").get<std::vector<int>>();
    plan.grid = PGrid::parse(j.at("p_grid").get<std::string>());
    plan.samples = j.at("samples").get<std::uint64_t>();
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    plan.threads = j.value("threads", 1u);
    if (j.contains("nearest_neighbors") && !j["nearest_neighbors"].is_null())
        plan.nearest_neighbors = j["nearest_neighbors"].get<int>();
    return plan;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace

double smoothed_std_error(std::uint64_t n_fail, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double q = (static_cast<double>(n_fail) + 1.0) / (nn + 2.0);
    return std::sqrt(q * (1.0 - q) / nn);
}

PfailPoint estimate_pfail(Model model, int size, Decimal p, std::uint64_t n, std::uint64_t master_seed,
                          unsigned threads, const MatchOptions& options) {
    if (n < 1)
        throw InputError("need at least one sample per point");
    check_probability(p);
    const LatticeSpec spec(model_dimension(model), size);
    const RngPolicy rng{master_seed};
    const auto start = std::chrono::steady_clock::now();

    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> failures{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        try {
            std::uint64_t local = 0;
            while (true) {
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= n)
                    break;
                const std::uint64_t end = std::min(n, begin + kChunk);
                for (std::uint64_t i = begin; i < end; ++i)
                    local += run_trial(spec, model, p, i, rng, options).success ? 0 : 1;
            }
            failures += local;
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next = n;
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (error)
        std::rethrow_exception(error);

    PfailPoint pt;
    pt.model = model;
    pt.size = size;
    pt.p = p;
    pt.n_samples = n;
    pt.n_fail = failures.load();
    pt.pfail = static_cast<double>(pt.n_fail) / static_cast<double>(n);
    pt.std_error = smoothed_std_error(pt.n_fail, n);
    pt.master_seed = master_seed;
    pt.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return pt;
}

PGrid PGrid::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos)
            break;
        pos = colon + 1;
    }
    PGrid g;
    if (parts.size() == 1) {
        g.min = g.max = Decimal::parse(parts[0]);
        g.step = Decimal{};
    } else if (parts.size() == 3) {
        g.min = Decimal::parse(parts[0]);
        g.max = Decimal::parse(parts[1]);
        g.step = Decimal::parse(parts[2]);
        if (g.max < g.min)
            throw InputError("p-grid max is below min in '" + std::string(text) + "'");
        if (g.max != g.min) {
            if (g.step <= Decimal{})
                throw InputError("p-grid step must be positive in '" + std::string(text) + "'");
            if ((g.max - g.min).micros() % g.step.micros() != 0)
                throw InputError("p-grid step does not divide max - min in '" + std::string(text) + "'");
        }
    } else {
        throw InputError("p-grid must be 'p' or 'min:max:step', got '" + std::string(text) + "'");
    }
    check_probability(g.min);
    check_probability(g.max);
    return g;
}

std::vector<Decimal> PGrid::values() const {
    std::vector<Decimal> out;
    if (max == min || step.micros() <= 0) {
        out.push_back(min);
        return out;
    }
    const std::int64_t count = (max - min).micros() / step.micros();
    for (std::int64_t i = 0; i <= count; ++i)
        out.push_back(Decimal::from_micros(min.micros() + i * step.micros()));
    return out;
}

std::string PGrid::str() const {
    if (max == min)
        return min.str();
    return min.str() + ":" + max.str() + ":" + step.str();
}

void SweepPlan::validate() const {
    if (sizes.empty())
        throw InputError("sweep needs at least one lattice size");
    std::set<int> seen;
    for (int L : sizes) {
        LatticeSpec spec(model_dimension(model), L);
        if (!seen.insert(L).second)
            throw InputError("duplicate lattice size " + std::to_string(L));
    }
    for (Decimal p : grid.values())
        check_probability(p);
    if (samples < 1)
        throw InputError("samples per point must be >= 1");
    if (threads < 1)
        throw InputError("threads must be >= 1");
    if (nearest_neighbors && *nearest_neighbors < 1)
        throw InputError("nearest-neighbor pruning needs m >= 1");
}

SweepEstimate SweepPlan::estimate() const {
    validate();
    SweepEstimate e;
    const auto ps = grid.values();
    e.points = sizes.size() * ps.size();
    e.trials = static_cast<std::uint64_t>(e.points) * samples;
    const double p_mid = 0.5 * (grid.min.value() + grid.max.value());
    const int d = model_dimension(model);
    const int Lmax = *std::max_element(sizes.begin(), sizes.end());
    const double sites = std::pow(static_cast<double>(Lmax), d);
    e.mean_defects_largest = sites * 0.5 * (1.0 - std::pow(1.0 - 2.0 * p_mid, 2 * d));
    return e;
}

std::vector<std::pair<int, Decimal>> SweepPlan::points() const {
    std::vector<std::pair<int, Decimal>> out;
    const auto ps = grid.values();
    for (int L : sizes)
        for (Decimal p : ps)
            out.emplace_back(L, p);
    return out;
}

bool SweepPlan::same_data(const SweepPlan& o) const {
    return model == o.model && sizes == o.sizes && grid == o.grid && samples == o.samples &&
           master_seed == o.master_seed && nearest_neighbors == o.nearest_neighbors;
}

std::string plan_to_json(const SweepPlan& plan) { return plan_json(plan).dump(); }

SweepPlan plan_from_manifest(const std::filesystem::path& manifest_path) {
    json j = read_json_file(manifest_path);
    try {
        return plan_from_json(j.at("plan"));
    } catch (const json::exception& e) {
        throw InputError("manifest " + manifest_path.string() + " has no usable plan: " + e.what());
    }
}

FileSink::FileSink(std::filesystem::path csv_path, std::filesystem::path manifest_path, SweepPlan plan,
                   std::string config_json)
    : csv_path_(std::move(csv_path)),
      manifest_path_(std::move(manifest_path)),
      plan_(std::move(plan)),
      config_json_(std::move(config_json)) {
    if (std::filesystem::exists(manifest_path_)) {
        json j = read_json_file(manifest_path_);
        SweepPlan previous;
        try {
            previous = plan_from_json(j.at("plan"));
        } catch (const json::exception& e) {
            throw InputError("manifest " + manifest_path_.string() + " has no usable plan: " + e.what());
        }
        if (!previous.same_data(plan_))
            throw InputError("existing manifest " + manifest_path_.string() +
                             " describes a different sweep; refusing to resume");
        for (const auto& c : j.at("completed")) {
            PfailPoint pt;
            pt.model = plan_.model;
            pt.size = c.at("L").get<int>();
            pt.p = Decimal::parse(c.at("p").get<std::string>());
            pt.n_samples = c.at("n_samples").get<std::uint64_t>();
            pt.n_fail = c.at("n_fail").get<std::uint64_t>();
            pt.pfail = c.at("pfail").get<double>();
            pt.std_error = c.at("stderr").get<double>();
            pt.master_seed = plan_.master_seed;
            pt.wall_seconds = c.value("wall_seconds", 0.0);
            points_.push_back(pt);
        }
    }
    std::ofstream out(csv_path_, std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + csv_path_.string(), points_.size());
    out << kCsvHeader << '\n';
    for (const auto& pt : points_)
        out << csv_row(pt) << '\n';
    if (!out.flush())
        throw IoError("write failed for " + csv_path_.string(), points_.size());
    flush_manifest();
}

void FileSink::write(const PfailPoint& point) {
    std::ofstream out(csv_path_, std::ios::app);
    out << csv_row(point) << '\n';
    if (!out.flush())
        throw IoError("write failed for " + csv_path_.string(), points_.size());
    points_.push_back(point);
    flush_manifest();
}

void FileSink::flush_manifest() const {
    json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["kind"] = "sweep";
    j["plan"] = plan_json(plan_);
    j["config"] = json::parse(config_json_, nullptr, false);
    if (j["config"].is_discarded())
        j["config"] = json::object();
    j["csv"] = csv_path_.filename().string();
    j["completed"] = json::array();
    std::set<int> even;
    std::set<int> odd;
    for (const auto& pt : points_) {
        j["completed"].push_back(point_to_json(pt));
        (pt.even() ? even : odd).insert(pt.size);
    }
    j["sizes_by_parity"] = {{"even", even}, {"odd", odd}};

    auto tmp = manifest_path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump(2) << '\n';
        if (!out.flush())
            throw IoError("write failed for " + tmp.string(), points_.size());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, manifest_path_, ec);
    if (ec)
        throw IoError("cannot replace " + manifest_path_.string() + ": " + ec.message(), points_.size());
}

std::vector<PfailPoint> run_sweep(const SweepPlan& plan, SweepSink& sink, const SweepProgress& progress) {
    plan.validate();
    std::vector<PfailPoint> done = sink.completed();
    auto find_done = [&](int L, Decimal p) -> const PfailPoint* {
        for (const auto& pt : done)
            if (pt.size == L && pt.p == p)
                return &pt;
        return nullptr;
    };
    MatchOptions options;
    options.nearest_neighbors = plan.nearest_neighbors;

    std::vector<PfailPoint> out;
    for (const auto& [L, p] : plan.points()) {
        if (const PfailPoint* prev = find_done(L, p)) {
            out.push_back(*prev);
            continue;
        }
        PfailPoint pt = estimate_pfail(plan.model, L, p, plan.samples, plan.master_seed, plan.threads, options);
        try {
            sink.write(pt);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            throw IoError(e.what(), sink.completed().size());
        }
        done.push_back(pt);
        out.push_back(pt);
        if (progress && !progress(pt))
            break;
    }
    return out;
}

std::string csv_row(const PfailPoint& pt) {
    std::ostringstream os;
    os << model_name(pt.model) << ',' << pt.size << ',' << pt.p.str() << ',' << pt.n_samples << ',' << pt.n_fail
       << ',' << format_double(pt.pfail) << ',' << format_double(pt.std_error) << ',' << pt.master_seed;
    return os.str();
}

std::vector<PfailPoint> parse_pfail_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw InputError("empty CSV");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw InputError("CSV header mismatch: expected '" + std::string(kCsvHeader) + "', got '" + line + "'");
    std::vector<PfailPoint> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        while (true) {
            auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 8)
            throw InputError("CSV row " + std::to_string(row) + ": expected 8 fields, got " + std::to_string(f.size()));
        PfailPoint pt;
        pt.model = parse_model(f[0]);
        pt.size = parse_number<int>(f[1], "L");
        pt.p = Decimal::parse(f[2]);
        pt.n_samples = parse_number<std::uint64_t>(f[3], "n_samples");
        pt.n_fail = parse_number<std::uint64_t>(f[4], "n_fail");
        pt.pfail = parse_double(f[5], "pfail");
        pt.std_error = parse_double(f[6], "stderr");
        pt.master_seed = parse_number<std::uint64_t>(f[7], "master_seed");
        if (pt.n_fail > pt.n_samples || pt.n_samples == 0)
            throw InputError("CSV row " + std::to_string(row) + ": inconsistent counts");
        if (!(pt.std_error > 0.0))
            throw InputError("CSV row " + std::to_string(row) + ": stderr must be positive");
        out.push_back(pt);
    }
    return out;
}

std::vector<PfailPoint> read_pfail_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    return parse_pfail_csv(in);
}

}  // namespace zerot
