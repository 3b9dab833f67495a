// Copyright 2026 The shadowkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dataset manifest: a single JSON file listing image pairs.
//
//   {"entries": [{"id": "0001",
//                 "input_path": "input/0001.png",
//                 "gt_path": "gt/0001.png",
//                 "aligned_gt_path": "aligned/0001.png",     (optional)
//                 "mask_path": "masks/0001.png",             (optional)
//                 "homography_path": "homography/0001.json", (optional)
//                 "selection": {"lower": 0.2, "upper": 0.6, "source": "human-adjusted"}}]}
//
// Relative paths resolve against the manifest's directory.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowkit/io.hpp"
#include "shadowkit/sasma.hpp"

namespace shadowkit {

namespace fs = std::filesystem;

struct ManifestEntry {
    std::string id;
    fs::path input_path;
    fs::path gt_path;
    std::optional<fs::path> aligned_gt_path;
    std::optional<fs::path> mask_path;
    std::optional<fs::path> homography_path;
    std::optional<ThresholdSelection> selection;

    /// The GT to compare against: aligned when available.
    const fs::path& target_gt_path() const noexcept { return aligned_gt_path ? *aligned_gt_path : gt_path; }
};

class DatasetManifest {
public:
    std::vector<ManifestEntry> entries;
    fs::path root;  ///< directory relative paths resolve against

    /// Parses and checks id uniqueness. File existence is reported by missing_files().
    static DatasetManifest from_json(const nlohmann::json& j, const fs::path& root) {
        DatasetManifest m;
        m.root = root;
        if (!j.contains("entries") || !j["entries"].is_array()) throw ValidationError("manifest: missing 'entries' array");
        std::set<std::string> ids;
        for (const auto& e : j["entries"]) {
            ManifestEntry me;
            me.id = e.at("id").get<std::string>();
            if (me.id.empty() || me.id.find('/') != std::string::npos || me.id.find("..") != std::string::npos)
                throw ValidationError("manifest: invalid id '" + me.id + "'");
            if (!ids.insert(me.id).second) throw ValidationError("manifest: duplicate id '" + me.id + "'");
            me.input_path = m.resolve(e.at("input_path").get<std::string>());
            me.gt_path = m.resolve(e.at("gt_path").get<std::string>());
            if (e.contains("aligned_gt_path")) me.aligned_gt_path = m.resolve(e["aligned_gt_path"].get<std::string>());
            if (e.contains("mask_path")) me.mask_path = m.resolve(e["mask_path"].get<std::string>());
            if (e.contains("homography_path")) me.homography_path = m.resolve(e["homography_path"].get<std::string>());
            if (e.contains("selection")) {
                const auto& s = e["selection"];
                me.selection = ThresholdSelection::make(
                    s.at("lower").get<double>(), s.at("upper").get<double>(),
                    parse_selection_source(s.value("source", std::string("human-adjusted"))));
            }
            m.entries.push_back(std::move(me));
        }
        return m;
    }

    static DatasetManifest load(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open manifest " + path.string());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw IoError("manifest " + path.string() + ": " + e.what());
        }
        return from_json(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
    }

    /// Paths are written relative to `base` (the directory the file will live in).
    nlohmann::json to_json(const fs::path& base) const {
        nlohmann::json arr = nlohmann::json::array();
        auto rel = [&](const fs::path& p) { return relative_to(p, base).generic_string(); };
        for (const auto& e : entries) {
            nlohmann::json j;
            j["id"] = e.id;
            j["input_path"] = rel(e.input_path);
            j["gt_path"] = rel(e.gt_path);
            if (e.aligned_gt_path) j["aligned_gt_path"] = rel(*e.aligned_gt_path);
            if (e.mask_path) j["mask_path"] = rel(*e.mask_path);
            if (e.homography_path) j["homography_path"] = rel(*e.homography_path);
            if (e.selection)
                j["selection"] = {{"lower", e.selection->lower},
                                  {"upper", e.selection->upper},
                                  {"source", to_string(e.selection->source)}};
            arr.push_back(std::move(j));
        }
        return {{"entries", arr}};
    }

    void save(const fs::path& path) const {
        const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
        const std::string text = to_json(base).dump(2) + "\n";
        write_file(path, Bytes(text.begin(), text.end()));
    }

    /// "id: path" for every referenced file that does not exist.
    std::vector<std::string> missing_files() const {
        std::vector<std::string> out;
        auto check = [&](const std::string& id, const fs::path& p) {
            if (!fs::exists(p)) out.push_back(id + ": " + p.string());
        };
        for (const auto& e : entries) {
            check(e.id, e.input_path);
            check(e.id, e.gt_path);
            if (e.aligned_gt_path) check(e.id, *e.aligned_gt_path);
            if (e.mask_path) check(e.id, *e.mask_path);
            if (e.homography_path) check(e.id, *e.homography_path);
        }
        return out;
    }

    const ManifestEntry* find(const std::string& id) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.id == id; });
        return it == entries.end() ? nullptr : &*it;
    }

    fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : (root / p).lexically_normal(); }

    static fs::path relative_to(const fs::path& p, const fs::path& base) {
        const fs::path abs_p = fs::weakly_canonical(fs::absolute(p));
        const fs::path abs_b = fs::weakly_canonical(fs::absolute(base));
        const fs::path r = abs_p.lexically_relative(abs_b);
        return r.empty() ? abs_p : r;
    }
};

/// Builds a manifest by pairing same-stem image files of two directories (sorted by id).
inline DatasetManifest manifest_from_dirs(const fs::path& input_dir, const fs::path& gt_dir) {
    auto is_image = [](const fs::path& p) {
        auto ext = p.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
    };
    auto list = [&](const fs::path& dir) {
        std::map<std::string, fs::path> out;
        if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
        for (const auto& de : fs::directory_iterator(dir))
            if (de.is_regular_file() && is_image(de.path())) out[de.path().stem().string()] = de.path();
        return out;
    };
    const auto inputs = list(input_dir);
    const auto gts = list(gt_dir);
    DatasetManifest m;
    m.root = fs::current_path();
    for (const auto& [id, path] : inputs) {
        auto it = gts.find(id);
        if (it == gts.end()) continue;
        ManifestEntry e;
        e.id = id;
        e.input_path = path;
        e.gt_path = it->second;
        m.entries.push_back(std::move(e));
    }
    return m;
}

/// $SHADOWKIT_DATA_ROOT/manifest.json, if the variable is set.
inline std::optional<fs::path> default_manifest_path() {
    if (const char* root = std::getenv("SHADOWKIT_DATA_ROOT"); root && *root) return fs::path(root) / "manifest.json";
    return std::nullopt;
}

}  // namespace shadowkit
