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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "zerot/errors.hpp"
#include "zerot/montecarlo.hpp"

using namespace zerot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("zerot_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SweepPlan small_plan() {
    SweepPlan plan;
    plan.model = Model::rbim2d;
    plan.sizes = {4, 5};
    plan.grid = PGrid::parse("0.1:0.12:0.01");
    plan.samples = 40;
    plan.master_seed = 12;
    return plan;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = 0.5 * static_cast<double>(i + j);
        i = j + 1;
    }
    return r;
}

}  // namespace

TEST_CASE("smoothed standard error") {
    CHECK(smoothed_std_error(0, 1000) > 0.0);
    CHECK(smoothed_std_error(1000, 1000) > 0.0);
    const double q = 31.0 / 102.0;
    CHECK(smoothed_std_error(30, 100) == doctest::Approx(std::sqrt(q * (1 - q) / 100.0)).epsilon(1e-14));
}

TEST_CASE("estimate at p = 0 has no failures") {
    for (Model m : {Model::rbim2d, Model::rpgm3d}) {
        const PfailPoint pt = estimate_pfail(m, 6, Decimal{}, 1000, 3);
        CHECK(pt.n_fail == 0);
        CHECK(pt.pfail == 0.0);
        CHECK(pt.std_error > 0.0);
        CHECK(pt.n_samples == 1000);
    }
    CHECK_THROWS_AS(estimate_pfail(Model::rbim2d, 6, Decimal{}, 0, 3), InputError);
    CHECK_THROWS_AS(estimate_pfail(Model::rbim2d, 6, Decimal::parse("1.5"), 10, 3), InputError);
}

TEST_CASE("estimates do not depend on the thread count") {
    const Decimal p = Decimal::parse("0.103");
    const PfailPoint one = estimate_pfail(Model::rbim2d, 8, p, 3000, 77, 1);
    for (unsigned t : {2u, 3u, 7u}) {
        const PfailPoint many = estimate_pfail(Model::rbim2d, 8, p, 3000, 77, t);
        CHECK(many.n_fail == one.n_fail);
    }
    CHECK(one.n_fail > 0);
}

TEST_CASE("failure rate grows with p") {
    std::vector<double> ps;
    std::vector<double> fails;
    for (const char* p : {"0.08", "0.09", "0.1", "0.11", "0.12", "0.13", "0.14"}) {
        const PfailPoint pt = estimate_pfail(Model::rbim2d, 12, Decimal::parse(p), 10000, 5);
        ps.push_back(pt.p.value());
        fails.push_back(pt.pfail);
    }
    const auto rp = ranks(ps);
    const auto rf = ranks(fails);
    double num = 0, dp = 0, df = 0;
    const double mp = std::accumulate(rp.begin(), rp.end(), 0.0) / static_cast<double>(rp.size());
    const double mf = std::accumulate(rf.begin(), rf.end(), 0.0) / static_cast<double>(rf.size());
    for (std::size_t i = 0; i < rp.size(); ++i) {
        num += (rp[i] - mp) * (rf[i] - mf);
        dp += (rp[i] - mp) * (rp[i] - mp);
        df += (rf[i] - mf) * (rf[i] - mf);
    }
    CHECK(num / std::sqrt(dp * df) > 0.0);
}

TEST_CASE("p grids are exact") {
    const PGrid g = PGrid::parse("0.10:0.107:0.001");
    const auto v = g.values();
    REQUIRE(v.size() == 8);
    CHECK(v.front() == Decimal::parse("0.1"));
    CHECK(v.back() == Decimal::parse("0.107"));
    CHECK(v[3].str() == "0.103");
    CHECK(g.str() == "0.1:0.107:0.001");
    CHECK(PGrid::parse("0.0293").values().size() == 1);
    CHECK(PGrid::parse("0.02805:0.03005:0.0004").values().size() == 6);
    CHECK(PGrid::parse("0.095:0.115:0.002").values().size() == 11);
    CHECK_THROWS_AS(PGrid::parse("0.1:0.2:0.03"), InputError);
    CHECK_THROWS_AS(PGrid::parse("0.2:0.1:0.01"), InputError);
    CHECK_THROWS_AS(PGrid::parse("0.1:0.2:0"), InputError);
    CHECK_THROWS_AS(PGrid::parse("0.1:0.2"), InputError);
    CHECK_THROWS_AS(PGrid::parse("1.5"), InputError);
    CHECK_THROWS_AS(PGrid::parse("x"), InputError);
}

TEST_CASE("plans validate and size-estimate") {
    SweepPlan plan = small_plan();
    CHECK_NOTHROW(plan.validate());
    CHECK(plan.points().size() == 6);

    SweepPlan bad = plan;
    bad.sizes = {};
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad.sizes = {4, 4};
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad.sizes = {1};
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = plan;
    bad.samples = 0;
    CHECK_THROWS_AS(bad.validate(), InputError);

    SweepPlan production;
    production.model = Model::rbim2d;
    for (int L = 2; L <= 36; ++L)
        production.sizes.push_back(L);
    production.grid = PGrid::parse("0.100:0.107:0.001");
    production.samples = 1000000;
    const SweepEstimate e = production.estimate();
    CHECK(e.points == 35 * 8);
    CHECK(e.trials == 280000000ULL);
    CHECK(e.mean_defects_largest > 100.0);
}

TEST_CASE("single-point sweep") {
    SweepPlan plan;
    plan.sizes = {8};
    plan.grid = PGrid::parse("0.1");
    plan.samples = 10;
    MemorySink sink;
    const auto pts = run_sweep(plan, sink);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].n_samples == 10);
    CHECK(sink.completed().size() == 1);
}

TEST_CASE("interrupted sweeps resume with exactly the missing points") {
    TempDir dir("resume");
    SweepPlan plan;
    plan.sizes = {6};
    plan.grid = PGrid::parse("0.08:0.1:0.01");
    plan.samples = 50;
    plan.master_seed = 4;
    const fs::path csv = dir.path / "a.csv";
    const fs::path manifest = dir.path / "a.manifest.json";
    {
        FileSink sink(csv, manifest, plan);
        int seen = 0;
        const auto partial = run_sweep(plan, sink, [&](const PfailPoint&) { return ++seen < 2; });
        CHECK(partial.size() == 2);
    }
    CHECK(read_lines(csv).size() == 3);

    int computed = 0;
    FileSink resumed(csv, manifest, plan);
    CHECK(resumed.completed().size() == 2);
    const auto all = run_sweep(plan, resumed, [&](const PfailPoint&) {
        ++computed;
        return true;
    });
    CHECK(computed == 1);
    CHECK(all.size() == 3);

    MemorySink fresh;
    const auto direct = run_sweep(plan, fresh);
    const auto lines = read_lines(csv);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == kCsvHeader);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(lines[i + 1] == csv_row(direct[i]));

    SweepPlan other = plan;
    other.master_seed = 5;
    CHECK_THROWS_AS(FileSink(csv, manifest, other), InputError);

    const SweepPlan back = plan_from_manifest(manifest);
    CHECK(back.same_data(plan));
    std::ifstream in(manifest);
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("schema_version") == kManifestSchemaVersion);
    CHECK(j.at("completed").size() == 3);
    CHECK(j.at("completed")[0].contains("wall_seconds"));
    CHECK(j.at("sizes_by_parity").at("even") == nlohmann::json::array({6}));
}

TEST_CASE("sink I/O failures carry the completed count") {
    SweepPlan plan = small_plan();
    const fs::path nowhere = fs::temp_directory_path() / "zerot_no_such_dir" / "x" / "a.csv";
    CHECK_THROWS_AS(FileSink(nowhere, nowhere.parent_path() / "m.json", plan), IoError);

    struct FailingSink : SweepSink {
        std::vector<PfailPoint> done;
        std::vector<PfailPoint> completed() const override { return done; }
        void write(const PfailPoint& pt) override {
            if (done.size() == 2)
                throw std::runtime_error("disk full");
            done.push_back(pt);
        }
    } failing;
    try {
        run_sweep(plan, failing);
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(e.completed_points() == 2);
    }
}

TEST_CASE("csv rows round trip") {
    SweepPlan plan = small_plan();
    MemorySink sink;
    const auto pts = run_sweep(plan, sink);
    std::stringstream ss;
    ss << kCsvHeader << '\n';
    for (const auto& pt : pts)
        ss << csv_row(pt) << '\n';
    const auto back = parse_pfail_csv(ss);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].size == pts[i].size);
        CHECK(back[i].p == pts[i].p);
        CHECK(back[i].n_fail == pts[i].n_fail);
        CHECK(back[i].pfail == pts[i].pfail);
        CHECK(back[i].std_error == pts[i].std_error);
        CHECK(back[i].master_seed == pts[i].master_seed);
    }

    std::stringstream bad_header("model,L,p,n,n_fail,pfail,stderr,master_seed\n");
    CHECK_THROWS_AS(parse_pfail_csv(bad_header), InputError);
    std::stringstream short_row(std::string(kCsvHeader) + "\nrbim2d,8,0.1,10\n");
    CHECK_THROWS_AS(parse_pfail_csv(short_row), InputError);
    std::stringstream counts(std::string(kCsvHeader) + "\nrbim2d,8,0.1,10,11,1.1,0.1,1\n");
    CHECK_THROWS_AS(parse_pfail_csv(counts), InputError);
}
