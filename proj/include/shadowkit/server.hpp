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

// HTTP service backing the interactive annotation UI.
//
//   GET  /api/images                       {"images": [{"id", "saved"}]}
//   GET  /api/images/{id}/histogram        {"bins":[256], "peak", "proposed_lower", "proposed_upper", "selection"}
//   GET  /api/images/{id}/pair             {"input": "data:image/png;base64,...", "gt": ...}
//   GET  /api/images/{id}/input.png        input image
//   GET  /api/images/{id}/gt.png           aligned GT image
//   GET  /api/images/{id}/selection        current selection or 404
//   POST /api/images/{id}/selection        {"lower", "upper"} -> session selection; 422 if invalid
//   GET  /api/images/{id}/mask[?lower=&upper=]   PNG mask preview
//   POST /api/images/{id}/save             persist the current selection to the store
//
// Errors are JSON: {"error": "..."}. Masks are produced by the same
// binarize + PNG encoder as the batch CLI, so the bytes are identical for
// the same selection.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <openssl/evp.h>

// resolv.h (pulled in by httplib) defines _res, which breaks Eigen headers included after it.
#include <Eigen/Dense>

#include <httplib.h>
#include <json.hpp>

#include "shadowkit/io.hpp"
#include "shadowkit/manifest.hpp"
#include "shadowkit/sasma.hpp"

namespace shadowkit {

inline std::string base64_encode(const Bytes& in) {
    std::string out(4 * ((in.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), in.data(), int(in.size()));
    out.resize(size_t(n));
    return out;
}

struct ServerOptions {
    fs::path store_path;              ///< selections JSON written by /save
    AnnotateOptions annotate;
    std::optional<fs::path> static_dir;  ///< UI assets mounted at "/"
    std::function<void(const std::string&)> log;
};

class AnnotationServer {
public:
    AnnotationServer(DatasetManifest manifest, ServerOptions opts)
        : manifest_(std::move(manifest)), opts_(std::move(opts)) {
        store_ = SelectionStore::load(opts_.store_path);
        routes();
    }

    AnnotationServer(const AnnotationServer&) = delete;
    AnnotationServer& operator=(const AnnotationServer&) = delete;

    /// Binds host:port (port 0 picks a free port); returns the bound port or throws.
    int bind(const std::string& host, int port) {
        const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (bound <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
        return bound;
    }

    /// Blocks until stop().
    bool run() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }

    const SelectionStore& store() const { return store_; }

private:
    struct Cached {
        Image input;
        Image gt;
        Plane error;
        Histogram histogram;
    };

    static void json_reply(httplib::Response& res, int status, const nlohmann::json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void error_reply(httplib::Response& res, int status, const std::string& msg) {
        json_reply(res, status, {{"error", msg}});
    }

    void log(const std::string& msg) const {
        if (opts_.log) opts_.log(msg);
    }

    std::shared_ptr<const Cached> load(const std::string& id) {
        {
            std::lock_guard lk(cache_mu_);
            if (auto it = cache_.find(id); it != cache_.end()) return it->second;
        }
        const ManifestEntry* e = manifest_.find(id);
        if (!e) return nullptr;
        auto c = std::make_shared<Cached>();
        c->input = read_image(e->input_path);
        c->gt = read_image(e->target_gt_path());
        c->error = error_map(c->input, c->gt);
        c->histogram = build_histogram(c->error, opts_.annotate.proposal);
        std::lock_guard lk(cache_mu_);
        return cache_.emplace(id, std::move(c)).first->second;
    }

    // Session selection, else saved, else manifest, else proposal.
    std::optional<ThresholdSelection> current(const std::string& id, const Histogram& h) {
        std::lock_guard lk(sel_mu_);
        if (auto it = pending_.find(id); it != pending_.end()) return it->second;
        if (auto s = store_.find(id)) return s;
        if (const auto* e = manifest_.find(id); e && e->selection) return e->selection;
        return proposed_selection(h);
    }

    template <class Handler>
    auto with_image(Handler h) {
        return [this, h](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.path_params.at("id");
            try {
                auto c = load(id);
                if (!c) return error_reply(res, 404, "unknown image id '" + id + "'");
                h(id, *c, req, res);
            } catch (const ValidationError& e) {
                error_reply(res, 422, e.what());
            } catch (const std::exception& e) {
                error_reply(res, 500, e.what());
            }
        };
    }

    static ThresholdSelection parse_selection(const std::string& lower, const std::string& upper) {
        double lo = 0, hi = 0;
        try {
            size_t p1 = 0, p2 = 0;
            lo = std::stod(lower, &p1);
            hi = std::stod(upper, &p2);
            if (p1 != lower.size() || p2 != upper.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ValidationError("lower and upper must be numbers");
        }
        return ThresholdSelection::make(lo, hi, SelectionSource::HumanAdjusted);
    }

    static ThresholdSelection parse_selection_body(const std::string& body) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception&) {
            throw ValidationError("body must be JSON {\"lower\": x, \"upper\": y}");
        }
        if (!j.is_object() || !j.contains("lower") || !j.contains("upper") || !j["lower"].is_number() ||
            !j["upper"].is_number())
            throw ValidationError("body must be JSON {\"lower\": x, \"upper\": y}");
        return ThresholdSelection::make(j["lower"].get<double>(), j["upper"].get<double>(),
                                        SelectionSource::HumanAdjusted);
    }

    static nlohmann::json selection_json(const ThresholdSelection& s) {
        return {{"lower", s.lower}, {"upper", s.upper}, {"source", to_string(s.source)}};
    }

    void routes() {
        server_.Get("/api/images", [this](const httplib::Request&, httplib::Response& res) {
            nlohmann::json arr = nlohmann::json::array();
            std::lock_guard lk(sel_mu_);
            for (const auto& e : manifest_.entries) arr.push_back({{"id", e.id}, {"saved", bool(store_.find(e.id))}});
            json_reply(res, 200, {{"images", arr}});
        });

        server_.Get("/api/images/:id/histogram", with_image([this](const std::string& id, const Cached& c,
                                                                   const httplib::Request&, httplib::Response& res) {
            nlohmann::json j = histogram_json(c.histogram);
            const auto sel = current(id, c.histogram);
            j["selection"] = sel ? selection_json(*sel) : nlohmann::json(nullptr);
            json_reply(res, 200, j);
        }));

        server_.Get("/api/images/:id/pair", with_image([](const std::string& id, const Cached& c,
                                                          const httplib::Request&, httplib::Response& res) {
            json_reply(res, 200,
                       {{"id", id},
                        {"input", "data:image/png;base64," + base64_encode(encode_png(c.input))},
                        {"gt", "data:image/png;base64," + base64_encode(encode_png(c.gt))}});
        }));

        auto png_reply = [](httplib::Response& res, const Bytes& b) {
            res.status = 200;
            res.set_content(std::string(b.begin(), b.end()), "image/png");
        };

        server_.Get("/api/images/:id/input.png", with_image([png_reply](const std::string&, const Cached& c,
                                                                        const httplib::Request&, httplib::Response& res) {
            png_reply(res, encode_png(c.input));
        }));
        server_.Get("/api/images/:id/gt.png", with_image([png_reply](const std::string&, const Cached& c,
                                                                     const httplib::Request&, httplib::Response& res) {
            png_reply(res, encode_png(c.gt));
        }));

        server_.Get("/api/images/:id/selection", with_image([this](const std::string& id, const Cached& c,
                                                                   const httplib::Request&, httplib::Response& res) {
            const auto sel = current(id, c.histogram);
            if (!sel) return error_reply(res, 404, "no selection and no automatic proposal for '" + id + "'");
            json_reply(res, 200, selection_json(*sel));
        }));

        server_.Post("/api/images/:id/selection", with_image([this](const std::string& id, const Cached&,
                                                                    const httplib::Request& req, httplib::Response& res) {
            const ThresholdSelection sel = parse_selection_body(req.body);
            {
                std::lock_guard lk(sel_mu_);
                pending_[id] = sel;
            }
            log("selection " + id + " [" + std::to_string(sel.lower) + ", " + std::to_string(sel.upper) + "]");
            json_reply(res, 200, selection_json(sel));
        }));

        server_.Get("/api/images/:id/mask", with_image([this, png_reply](const std::string& id, const Cached& c,
                                                                         const httplib::Request& req,
                                                                         httplib::Response& res) {
            std::optional<ThresholdSelection> sel;
            const bool has_lo = req.has_param("lower"), has_hi = req.has_param("upper");
            if (has_lo != has_hi) throw ValidationError("pass both lower and upper, or neither");
            if (has_lo)
                sel = parse_selection(req.get_param_value("lower"), req.get_param_value("upper"));
            else
                sel = current(id, c.histogram);
            const ShadowMask mask =
                sel ? binarize(c.error, *sel, opts_.annotate.cleanup) : ShadowMask(c.error.width(), c.error.height());
            png_reply(res, encode_png(mask));
        }));

        server_.Post("/api/images/:id/save", with_image([this](const std::string& id, const Cached& c,
                                                               const httplib::Request& req, httplib::Response& res) {
            std::optional<ThresholdSelection> sel;
            if (!req.body.empty()) sel = parse_selection_body(req.body);
            if (!sel) sel = current(id, c.histogram);
            if (!sel) return error_reply(res, 409, "nothing to save for '" + id + "'");
            {
                std::lock_guard lk(sel_mu_);
                store_.put(id, *sel);
                pending_.erase(id);
                store_.save(opts_.store_path);
            }
            log("saved " + id + " [" + std::to_string(sel->lower) + ", " + std::to_string(sel->upper) + "]");
            json_reply(res, 200, {{"id", id}, {"saved", true}, {"selection", selection_json(*sel)}});
        }));

        if (opts_.static_dir) server_.set_mount_point("/", opts_.static_dir->string());
    }

    DatasetManifest manifest_;
    ServerOptions opts_;
    httplib::Server server_;
    std::mutex cache_mu_;
    std::map<std::string, std::shared_ptr<const Cached>> cache_;
    std::mutex sel_mu_;
    std::map<std::string, ThresholdSelection> pending_;
    SelectionStore store_;
};

}  // namespace shadowkit
