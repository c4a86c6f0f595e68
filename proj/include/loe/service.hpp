#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loe/classifier.hpp"
#include "loe/explain.hpp"
#include "loe/index.hpp"

namespace httplib {
class Server;
}

namespace loe {

struct ServiceConfig {
    std::string index_path;
    std::string model_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    FilterBand default_band = FilterBand::All;
    std::size_t max_k = 100;
    std::vector<std::string> cors_allow;

    /// Throws InvalidArgument when max_k < 1 or a configured path is missing.
    void validate() const;
};

/// Classifier as seen by the service: an id, the tokenizer its features
/// expect, and the confidence function.
struct ServiceModel {
    std::string id;
    Tokenizer tokenizer;
    ConfidenceFn confidences;

    static ServiceModel from_baseline(std::shared_ptr<const BaselineClassifier> model);
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Stateless request handlers over an immutable index and model. Every
/// handler is safe to call concurrently.
class Service {
public:
    Service(ServiceConfig config, std::shared_ptr<const Index> index, std::optional<ServiceModel> model);

    /// GET /search?q&band&k
    Response handle_search(const std::map<std::string, std::string>& params) const;
    /// POST /classify {"title", "abstract"}
    Response handle_classify(const std::string& body) const;
    /// POST /explain {"title", "abstract", "n_samples"?, "seed"?, "top_k"?}
    Response handle_explain(const std::string& body) const;
    /// GET /healthz
    Response handle_health() const;

    /// Registers the routes (and CORS headers) on an httplib server.
    void install(httplib::Server& server) const;

    const ServiceConfig& config() const { return config_; }

private:
    ServiceConfig config_;
    std::shared_ptr<const Index> index_;
    std::optional<ServiceModel> model_;
};

/// Loads the configured index and model, then blocks serving HTTP.
int serve(const ServiceConfig& config);

}  // namespace loe
