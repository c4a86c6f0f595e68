#include "loe/service.hpp"

#include <charconv>
#include <cmath>
#include <variant>
#include <filesystem>
#include <iostream>
#include <random>

#include <httplib.h>

#include "loe/error.hpp"

namespace loe {

using nlohmann::json;

void ServiceConfig::validate() const {
    if (max_k < 1) throw InvalidArgument("max_k must be >= 1");
    if (!index_path.empty() && !std::filesystem::exists(index_path)) {
        throw InvalidArgument("index file does not exist: " + index_path);
    }
    if (!model_path.empty() && !std::filesystem::exists(model_path)) {
        throw InvalidArgument("model file does not exist: " + model_path);
    }
}

ServiceModel ServiceModel::from_baseline(std::shared_ptr<const BaselineClassifier> model) {
    ServiceModel m;
    m.id = model->model_id();
    m.tokenizer = model->tokenizer();
    m.confidences = [model](const TermSequence& terms) { return model->confidences(terms); };
    return m;
}

Service::Service(ServiceConfig config, std::shared_ptr<const Index> index, std::optional<ServiceModel> model)
    : config_(std::move(config)), index_(std::move(index)), model_(std::move(model)) {
    if (config_.max_k < 1) throw InvalidArgument("max_k must be >= 1");
}

namespace {

Response error(int status, const std::string& message) { return {status, json{{"error", message}}}; }

json confidences_json(const BandArray& conf) {
    json out = json::object();
    for (std::size_t i = 0; i < kNumBands; ++i) out[std::string(band_name(static_cast<Band>(i)))] = conf[i];
    return out;
}

std::string snippet(const std::string& text, std::size_t limit = 200) {
    if (text.size() <= limit) return text;
    auto cut = text.rfind(' ', limit);
    if (cut == std::string::npos || cut < limit / 2) cut = limit;
    // Do not split a UTF-8 sequence.
    while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
    return text.substr(0, cut) + "...";
}

struct DocRequest {
    std::string title;
    std::string abstract;
    json raw;
};

std::variant<DocRequest, Response> parse_doc_request(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception&) {
        return error(400, "request body is not valid JSON");
    }
    if (!j.is_object()) return error(400, "request body must be a JSON object");
    DocRequest req;
    for (const char* key : {"title", "abstract"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_string()) return error(400, std::string("'") + key + "' must be a string");
    }
    req.title = j.value("title", std::string());
    req.abstract = j.value("abstract", std::string());
    if (req.title.find_first_not_of(" \t\r\n") == std::string::npos &&
        req.abstract.find_first_not_of(" \t\r\n") == std::string::npos) {
        return error(400, "title and abstract are both empty");
    }
    req.raw = std::move(j);
    return req;
}

}  // namespace

Response Service::handle_search(const std::map<std::string, std::string>& params) const {
    auto q = params.find("q");
    if (q == params.end() || q->second.find_first_not_of(" \t\r\n") == std::string::npos) {
        return error(400, "query parameter 'q' is required");
    }
    FilterBand band = config_.default_band;
    if (auto b = params.find("band"); b != params.end()) {
        auto parsed = try_parse_filter_band(b->second);
        if (!parsed) return error(400, "unknown band '" + b->second + "' (expected all, loe3, loe2, loe1)");
        band = *parsed;
    }
    std::size_t k = 10;
    if (auto kp = params.find("k"); kp != params.end()) {
        long value = 0;
        const auto& s = kp->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size()) return error(400, "k must be an integer");
        if (value < 1) return error(400, "k must be >= 1");
        if (static_cast<std::size_t>(value) > config_.max_k) {
            return error(400, "k must be <= " + std::to_string(config_.max_k));
        }
        k = static_cast<std::size_t>(value);
    }
    json results = json::array();
    for (const auto& hit : search(*index_, q->second, band, k)) {
        const auto& doc = index_->doc(hit.doc);
        results.push_back({{"doc_id", hit.doc_id},
                           {"title", doc.title},
                           {"snippet", snippet(doc.abstract)},
                           {"score", hit.score},
                           {"loe", std::string(hit.loe.name())}});
    }
    return {200, results};
}

Response Service::handle_classify(const std::string& body) const {
    if (!model_) return error(503, "no classification model loaded");
    auto parsed = parse_doc_request(body);
    if (auto* r = std::get_if<Response>(&parsed)) return *r;
    const auto& req = std::get<DocRequest>(parsed);
    const auto terms = model_->tokenizer.tokenize(req.title + " " + req.abstract);
    const BandArray conf = model_->confidences(terms);
    const LoELabel chosen = argmax_label(conf);
    return {200, json{{"band", std::string(chosen.name())},
                      {"ordinal", chosen.ordinal()},
                      {"confidences", confidences_json(conf)},
                      {"model_id", model_->id}}};
}

Response Service::handle_explain(const std::string& body) const {
    if (!model_) return error(503, "no classification model loaded");
    auto parsed = parse_doc_request(body);
    if (auto* r = std::get_if<Response>(&parsed)) return *r;
    const auto& req = std::get<DocRequest>(parsed);

    ExplainParams params;
    std::size_t top_k = 10;
    try {
        if (req.raw.contains("n_samples")) params.n_samples = req.raw.at("n_samples").get<std::size_t>();
        if (req.raw.contains("top_k")) top_k = req.raw.at("top_k").get<std::size_t>();
        if (req.raw.contains("seed") && !req.raw.at("seed").is_null()) {
            params.seed = req.raw.at("seed").get<std::uint64_t>();
        } else {
            std::random_device rd;
            params.seed = (static_cast<std::uint64_t>(rd()) << 32 | rd()) & ((1ULL << 53) - 1);
        }
    } catch (const json::exception&) {
        return error(400, "n_samples, top_k and seed must be non-negative integers");
    }
    if (params.n_samples < 2 || params.n_samples > 20000) return error(400, "n_samples must lie in [2, 20000]");

    const auto terms = model_->tokenizer.tokenize(req.title + " " + req.abstract);
    if (terms.empty()) return error(400, "document has no indexable terms");
    const auto ex = explain(model_->confidences, req.raw.value("doc_id", std::string()), terms, params);

    json classes = json::object();
    for (const auto& [band, weights] : ex.weights) {
        json list = json::array();
        for (const auto& [term, w] : weights) {
            if (list.size() >= top_k) break;
            if (std::abs(w) <= 1e-9) continue;
            list.push_back({{"term", term}, {"weight", w}});
        }
        classes[std::string(band_name(band))] = std::move(list);
    }
    return {200, json{{"seed", params.seed},
                      {"n_samples", params.n_samples},
                      {"predicted", std::string(ex.predicted.name())},
                      {"model_id", model_->id},
                      {"classes", std::move(classes)}}};
}

Response Service::handle_health() const {
    return {200, json{{"status", "ok"},
                      {"index_docs", index_ ? index_->n_docs() : 0},
                      {"model_id", model_ ? json(model_->id) : json(nullptr)}}};
}

void Service::install(httplib::Server& server) const {
    auto reply = [this](const httplib::Request& req, httplib::Response& res, const Response& r) {
        const auto origin = req.get_header_value("Origin");
        for (const auto& allowed : config_.cors_allow) {
            if (allowed == "*" || allowed == origin) {
                res.set_header("Access-Control-Allow-Origin", allowed == "*" ? "*" : origin);
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
                break;
            }
        }
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    server.Get("/search", [this, reply](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> params;
        for (const auto& [key, value] : req.params) params.emplace(key, value);
        reply(req, res, handle_search(params));
    });
    server.Post("/classify", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(req, res, handle_classify(req.body));
    });
    server.Post("/explain", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(req, res, handle_explain(req.body));
    });
    server.Get("/healthz", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(req, res, handle_health());
    });
    server.Options(R"(/.*)", [reply](const httplib::Request& req, httplib::Response& res) {
        reply(req, res, Response{204, json::object()});
    });
}

int serve(const ServiceConfig& config) {
    config.validate();
    if (config.index_path.empty()) throw InvalidArgument("serve needs an index");
    auto index = std::make_shared<const Index>(Index::load(config.index_path));
    std::optional<ServiceModel> model;
    if (!config.model_path.empty()) {
        model = ServiceModel::from_baseline(
            std::make_shared<const BaselineClassifier>(BaselineClassifier::load(config.model_path)));
    }
    Service service(config, index, std::move(model));
    httplib::Server server;
    service.install(server);
    std::cerr << "serving " << index->n_docs() << " documents on http://" << config.host << ':' << config.port << '\n';
    if (!server.listen(config.host, config.port)) {
        std::cerr << "error: cannot listen on " << config.host << ':' << config.port << '\n';
        return 2;
    }
    return 0;
}

}  // namespace loe
