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

// Runs the zerot executable end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "zerot_cli_test";

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run zerot(const std::string& args) {
    fs::create_directories(kDir);
    const fs::path out = kDir / "stdout.txt";
    const fs::path err = kDir / "stderr.txt";
    const std::string cmd = "ZEROT_OUTPUT_DIR='" + kDir.string() + "' '" + ZEROT_CLI + "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream o(out), e(err);
    std::stringstream so, se;
    so << o.rdbuf();
    se << e.rdbuf();
    r.out = so.str();
    r.err = se.str();
    return r;
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

json load(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("sweep writes CSV and manifest") {
    fs::remove_all(kDir);
    const Run r = zerot("sweep --model rbim2d --sizes 8,12 --p 0.10:0.107:0.001 --samples 1000 --seed 7 --out a.csv");
    REQUIRE(r.code == 0);
    const auto rows = lines(kDir / "a.csv");
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == "model,L,p,n_samples,n_fail,pfail,stderr,master_seed");
    CHECK(rows[1].rfind("rbim2d,8,0.1,1000,", 0) == 0);
    const json m = load(kDir / "a.manifest.json");
    CHECK(m["schema_version"] == 1);
    CHECK(m["completed"].size() == 16);
    CHECK(m["config"]["seed"] == 7);
    CHECK(m["config"]["seed_drawn"] == false);

    SUBCASE("re-running the manifest reproduces the rows") {
        const Run again = zerot("sweep --from-manifest '" + (kDir / "a.manifest.json").string() + "' --out b.csv");
        REQUIRE(again.code == 0);
        CHECK(lines(kDir / "b.csv") == rows);
    }
    SUBCASE("resuming a finished sweep computes nothing") {
        const Run again = zerot("sweep --from-manifest '" + (kDir / "a.manifest.json").string() + "'");
        REQUIRE(again.code == 0);
        CHECK(contains(again.err, "16 of 16 points already done"));
        CHECK(lines(kDir / "a.csv") == rows);
    }
    SUBCASE("thread count does not change the data") {
        const Run t3 = zerot("sweep --model rbim2d --sizes 8,12 --p 0.10:0.107:0.001 --samples 1000 --seed 7 "
                             "--threads 3 --out c.csv");
        REQUIRE(t3.code == 0);
        CHECK(lines(kDir / "c.csv") == rows);
    }
}

TEST_CASE("sweep variants") {
    const Run one = zerot("sweep --model rpgm3d --sizes 6 --p 0.0293 --samples 100 --seed 1 --out one.csv");
    REQUIRE(one.code == 0);
    CHECK(lines(kDir / "one.csv").size() == 2);

    const Run dry = zerot("sweep --model rpgm3d --sizes 9..14 --p 0.02805:0.03005:0.0004 --samples 1000000 --dry-run");
    REQUIRE(dry.code == 0);
    const json plan = json::parse(dry.out);
    CHECK(plan["estimate"]["points"] == 36);
    CHECK(plan["estimate"]["trials"] == 36000000);
    CHECK(plan["plan"]["sizes"] == json::array({9, 10, 11, 12, 13, 14}));

    const Run drawn = zerot("sweep --model rbim2d --sizes 4 --p 0.1 --samples 20 --out drawn.csv");
    REQUIRE(drawn.code == 0);
    const json m = load(kDir / "drawn.manifest.json");
    CHECK(m["config"]["seed_drawn"] == true);
    CHECK(m["plan"]["master_seed"] == m["config"]["seed"]);

    CHECK(zerot("sweep --model rbim2d --sizes 8 --p 0.1:0.2:0.03 --samples 10").code == 2);
    CHECK(zerot("sweep --model ising --sizes 8 --p 0.1 --samples 10").code == 2);
    CHECK(zerot("sweep --model rbim2d --sizes 8").code == 2);
    CHECK(zerot("sweep --model rbim2d --sizes 1 --p 0.1 --samples 10").code == 2);
    CHECK(zerot("sweep --model rbim2d --sizes 8 --p 0.1 --samples 10 --out /nonexistent/dir/x.csv").code == 1);
    CHECK(zerot("").code == 2);
    CHECK(zerot("--help").code == 0);
}

TEST_CASE("fit") {
    const Run q = zerot("fit --selftest --out q.json");
    CHECK(q.code == 0);
    CHECK(contains(q.out, "selftest passed"));
    const json report = load(kDir / "q.json");
    CHECK(report["schema_version"] == 1);
    CHECK(report["fit"]["parameters"].size() == 5);
    CHECK(report["selftest"]["passed"] == true);
    CHECK(report.contains("crossing"));
    CHECK(report.contains("slope_exponent"));

    const Run c = zerot("fit --selftest --ansatz corrected --out c.json");
    CHECK(c.code == 0);
    CHECK(load(kDir / "c.json")["fit"]["parameters"].size() == 9);

    // The corrected selftest CSV mixes parities; an even-only fit must report its row count.
    const std::string mixed = (kDir / "selftest_corrected.csv").string();
    const Run even = zerot("fit --in '" + mixed + "' --parity even --out even.json");
    CHECK(even.code == 0);
    CHECK(contains(even.err, "using 44 of 88 rows"));
    CHECK(load(kDir / "even.json")["fit"]["sizes_used"] == json::array({8, 12, 16, 24}));

    {
        std::ofstream three(kDir / "three.csv");
        three << "model,L,p,n_samples,n_fail,pfail,stderr,master_seed\n";
        for (int L : {8, 12, 16})
            for (const char* p : {"0.1", "0.102", "0.104", "0.106"})
                three << "rbim2d," << L << ',' << p << ",100,20,0.2,0.04,1\n";
    }
    const Run corr3 = zerot("fit --in '" + (kDir / "three.csv").string() + "' --parity all --ansatz corrected");
    CHECK(corr3.code == 2);
    CHECK(contains(corr3.err, "at least 4 distinct sizes"));

    {
        std::ofstream bad(kDir / "bad.csv");
        bad << "model,L,p,pfail\nrbim2d,8,0.1,0.2\n";
    }
    CHECK(zerot("fit --in '" + (kDir / "bad.csv").string() + "' --parity all").code == 2);
    CHECK(zerot("fit --in '" + (kDir / "three.csv").string() + "'").code == 2);
    CHECK(zerot("fit --in '" + (kDir / "three.csv").string() + "' --parity sideways").code == 2);
}

TEST_CASE("oracle-check") {
    const Run ok = zerot("oracle-check --instances 500 --max-defects 12 --seed 3");
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "0 mismatches"));
    const json m = load(kDir / "oracle_check.json");
    CHECK(m["result"]["instances"] == 500);
    CHECK(m["result"]["passed"] == true);

    const Run refused = zerot("oracle-check --max-defects 16");
    CHECK(refused.code == 2);
    CHECK(contains(refused.err, "refused"));

    const Run vacuous = zerot("oracle-check --instances 0");
    CHECK(vacuous.code == 0);
    CHECK(contains(vacuous.err, "warning"));
}

TEST_CASE("nishimori") {
    const Run half = zerot("nishimori --p 0.5");
    CHECK(half.code == 0);
    CHECK(contains(half.out, "K_p = 0\n"));
    CHECK(contains(half.out, "T/J = inf"));
    const Run p = zerot("nishimori --p 0.1031");
    CHECK(p.code == 0);
    CHECK(contains(p.out, "K_p = 1.0816"));
    CHECK(zerot("nishimori --p 1.2").code == 2);
    CHECK(zerot("nishimori --p 0").code == 2);
}

TEST_CASE("trial dump") {
    const Run r = zerot("trial --model rbim2d --size 6 --p 0.15 --seed 4 --sample-index 2 --dump t.json");
    REQUIRE(r.code == 0);
    const json t = load(kDir / "t.json");
    for (const char* key : {"error_chain", "defects", "matching", "recovery_chain", "cycle_class", "success", "config"})
        CHECK(t.contains(key));
    CHECK(t["success"] == t["cycle_class"]["trivial"]);
    CHECK(t["error_weight"] == t["error_chain"].size());
    CHECK(t["defects"].size() % 2 == 0);
    CHECK(t["matching"]["pairs"].size() * 2 == t["defects"].size());
    if (!t["error_chain"].empty())
        CHECK(t["error_chain"][0][0].size() == 2);

    const Run again = zerot("trial --model rbim2d --size 6 --p 0.15 --seed 4 --sample-index 2 --dump -");
    REQUIRE(again.code == 0);
    CHECK(json::parse(again.out) == t);

    CHECK(zerot("trial --model rpgm3d --size 1 --p 0.1").code == 2);
}
