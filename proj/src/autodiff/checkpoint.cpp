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

#include "hbias/autodiff/checkpoint.hpp"

#include <fstream>

#include "hbias/errors.hpp"

namespace hbias {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path manifest_path(const fs::path& file) { return fs::path(file.string() + ".json"); }

void save_checkpoint(const ParameterSet& params, const fs::path& file, const json& extra) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    json tensors = json::array();
    std::size_t offset = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Parameter& p = params[i];
        // Eigen storage is column-major and contiguous.
        out.write(reinterpret_cast<const char*>(p.value.data()), static_cast<std::streamsize>(p.value.size() * sizeof(Real)));
        tensors.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}, {"offset", offset}});
        offset += static_cast<std::size_t>(p.value.size());
    }
    if (!out) throw Error("failed writing " + file.string());
    json manifest = extra.is_object() ? extra : json::object();
    manifest["dtype"] = std::string(kRealName);
    manifest["layout"] = "column-major";
    manifest["tensors"] = tensors;
    std::ofstream m(manifest_path(file));
    if (!m) throw Error("cannot write " + manifest_path(file).string());
    m << manifest.dump(2) << "\n";
}

json read_manifest(const fs::path& file) {
    std::ifstream in(manifest_path(file));
    if (!in) throw ParseError("missing checkpoint manifest " + manifest_path(file).string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(manifest_path(file).string() + ": " + e.what());
    }
}

namespace {

template <typename Stored>
void read_into(std::ifstream& in, Parameter& p, std::size_t offset) {
    std::vector<Stored> buf(static_cast<std::size_t>(p.value.size()));
    in.seekg(static_cast<std::streamoff>(offset * sizeof(Stored)));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(Stored)));
    if (!in) throw ParseError("checkpoint truncated at " + p.name);
    for (std::size_t k = 0; k < buf.size(); ++k) p.value.data()[k] = static_cast<Real>(buf[k]);
}

}  // namespace

json load_checkpoint(ParameterSet& params, const fs::path& file) {
    const json manifest = read_manifest(file);
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open checkpoint " + file.string());
    try {
        const std::string dtype = manifest.at("dtype").get<std::string>();
        if (dtype != "float64" && dtype != "float32") throw ParseError("unsupported checkpoint dtype " + dtype);
        std::size_t found = 0;
        for (const auto& t : manifest.at("tensors")) {
            const std::string name = t.at("name").get<std::string>();
            if (!params.contains(name)) throw ContractViolation("checkpoint tensor " + name + " not in model");
            Parameter& p = params.get(name);
            if (t.at("rows").get<Eigen::Index>() != p.value.rows() || t.at("cols").get<Eigen::Index>() != p.value.cols())
                throw ContractViolation("checkpoint tensor " + name + " has a different shape");
            const auto offset = t.at("offset").get<std::size_t>();
            if (dtype == "float64")
                read_into<double>(in, p, offset);
            else
                read_into<float>(in, p, offset);
            ++found;
        }
        if (found != params.size()) throw ContractViolation("checkpoint lacks some model parameters");
    } catch (const json::exception& e) {
        throw ParseError(manifest_path(file).string() + ": " + e.what());
    }
    return manifest;
}

}  // namespace hbias
