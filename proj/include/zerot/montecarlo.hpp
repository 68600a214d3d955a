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

#ifndef ZEROT_MONTECARLO_HPP
#define ZEROT_MONTECARLO_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "zerot/decimal.hpp"
#include "zerot/disorder.hpp"
#include "zerot/matcher.hpp"

namespace zerot {

/// Failure-probability estimate at one (model, L, p).
struct PfailPoint {
    Model model = Model::rbim2d;
    int size = 0;
    Decimal p;
    std::uint64_t n_samples = 0;
    std::uint64_t n_fail = 0;
    double pfail = 0.0;
    double std_error = 0.0;
    std::uint64_t master_seed = 0;
    double wall_seconds = 0.0;  // not part of the CSV row

    bool even() const { return size % 2 == 0; }
};

/// Wald error of the add-one smoothed proportion (n_fail+1)/(n+2). Always > 0.
double smoothed_std_error(std::uint64_t n_fail, std::uint64_t n);

/// Runs n trials with sample indices 0..n-1. The failure count is a sum of
/// per-trial outcomes that depend only on their own seeds, so the result is
/// identical for every thread count.
PfailPoint estimate_pfail(Model model, int size, Decimal p, std::uint64_t n, std::uint64_t master_seed,
                          unsigned threads = 1, const MatchOptions& options = {});

/// Inclusive exact-decimal grid min, min+step, ..., max.
struct PGrid {
    Decimal min;
    Decimal max;
    Decimal step;

    /// "min:max:step" or a single value "p".
    static PGrid parse(std::string_view text);
    std::vector<Decimal> values() const;
    std::string str() const;
    friend bool operator==(const PGrid&, const PGrid&) = default;
};

struct SweepEstimate {
    std::size_t points = 0;
    std::uint64_t trials = 0;
    /// Expected defect count per trial at the grid midpoint, largest size.
    double mean_defects_largest = 0.0;
};

struct SweepPlan {
    Model model = Model::rbim2d;
    std::vector<int> sizes;
    PGrid grid;
    std::uint64_t samples = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    std::optional<int> nearest_neighbors;  // approximate matching when set

    /// InputError when sizes, grid, or samples are unusable.
    void validate() const;
    SweepEstimate estimate() const;
    /// Ordered (L, p) points: sizes in plan order, p ascending.
    std::vector<std::pair<int, Decimal>> points() const;
    /// Whether two plans describe the same data (threads excluded).
    bool same_data(const SweepPlan& other) const;
};

/// Destination for sweep results. completed() reports points already present
/// so an interrupted sweep can resume.
class SweepSink {
  public:
    virtual ~SweepSink() = default;
    virtual std::vector<PfailPoint> completed() const = 0;
    virtual void write(const PfailPoint& point) = 0;
};

class MemorySink : public SweepSink {
  public:
    std::vector<PfailPoint> completed() const override { return points_; }
    void write(const PfailPoint& point) override { points_.push_back(point); }

  private:
    std::vector<PfailPoint> points_;
};

/// CSV rows plus a JSON manifest (plan echo, completed points, wall-clock per
/// point). Opening an existing manifest for the same plan resumes it; the CSV
/// is rebuilt from the manifest so a crash between the two writes cannot
/// duplicate rows.
class FileSink : public SweepSink {
  public:
    FileSink(std::filesystem::path csv_path, std::filesystem::path manifest_path, SweepPlan plan,
             std::string config_json = "{}");

    std::vector<PfailPoint> completed() const override { return points_; }
    void write(const PfailPoint& point) override;

    const std::filesystem::path& csv_path() const { return csv_path_; }
    const std::filesystem::path& manifest_path() const { return manifest_path_; }

  private:
    void flush_manifest() const;

    std::filesystem::path csv_path_;
    std::filesystem::path manifest_path_;
    SweepPlan plan_;
    std::string config_json_;
    std::vector<PfailPoint> points_;
};

/// Called after each new point; return false to stop early.
using SweepProgress = std::function<bool(const PfailPoint&)>;

/// Estimates every plan point not yet in the sink, in plan order, writing each
/// as soon as it is done. Returns all points of the plan that are complete.
/// Sink I/O failures surface as IoError carrying the completed count.
std::vector<PfailPoint> run_sweep(const SweepPlan& plan, SweepSink& sink, const SweepProgress& progress = {});

// CSV interface. Header is exactly:
//   model,L,p,n_samples,n_fail,pfail,stderr,master_seed
inline constexpr const char* kCsvHeader = "model,L,p,n_samples,n_fail,pfail,stderr,master_seed";
std::string csv_row(const PfailPoint& point);
/// InputError on a header or row that does not match the schema.
std::vector<PfailPoint> read_pfail_csv(const std::filesystem::path& path);
std::vector<PfailPoint> parse_pfail_csv(std::istream& in);

/// Manifest schema version written by FileSink.
inline constexpr int kManifestSchemaVersion = 1;
std::string plan_to_json(const SweepPlan& plan);
SweepPlan plan_from_manifest(const std::filesystem::path& manifest_path);

}  // namespace zerot

#endif
