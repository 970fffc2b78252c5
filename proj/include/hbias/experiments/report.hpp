// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbias/eval/evaluator.hpp"
#include "json.hpp"

namespace hbias {

/// Metric columns in report order.
const std::vector<std::string>& metric_names();
std::optional<double> metric_value(const MetricsReport& m, std::string_view name);

/// Median of a non-empty list (mean of the middle pair for even sizes).
double median(std::vector<double> values);

struct ReportRow {
    std::string config;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportFailure {
    std::string config;
    std::uint64_t seed = 0;
    std::string reason;
    friend bool operator==(const ReportFailure&, const ReportFailure&) = default;
};

struct Aggregate {
    std::string config;
    std::size_t runs = 0;
    std::map<std::string, double> median, min, max;  // metrics present in at least one run
};

struct ReportTable {
    std::string experiment;
    std::vector<std::string> configs;  // grid order
    std::vector<ReportRow> rows;
    std::vector<ReportFailure> failures;

    /// Per-config aggregates over completed runs, in grid order.
    std::vector<Aggregate> aggregates() const;
    std::optional<Aggregate> aggregate(std::string_view config) const;

    nlohmann::json to_json() const;
    static ReportTable from_json(const nlohmann::json& j);
    friend bool operator==(const ReportTable&, const ReportTable&) = default;
};

/// Reads a sweep directory (spec.json plus run directories).
ReportTable load_results(const std::filesystem::path& sweep_dir);
/// A sweep directory, or a directory whose children are sweep directories.
std::vector<ReportTable> load_result_tree(const std::filesystem::path& dir);

enum class ReportFormat { Csv, Json, Markdown };
ReportFormat report_format_from_string(std::string_view s);

/// csv: one row per (config, seed) then one "median" row per config.
/// json: the tables with aggregates. markdown: per experiment a table of
/// medians with a test column and a generalization column.
std::string render_report(const std::vector<ReportTable>& tables, ReportFormat format);

}  // namespace hbias
