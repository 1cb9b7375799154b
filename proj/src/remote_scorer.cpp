#include <thread>

#include "httplib.h"
#include "kbplugin/error.hpp"
#include "kbplugin/scorer.hpp"

namespace kbplugin {

struct RemoteScorer::Impl {
    std::string origin;  // scheme://host:port
    std::string path;    // base path + "/score"
    RemoteScorerOptions options;
    std::unique_ptr<httplib::Client> client;
};

RemoteScorer::RemoteScorer(std::string endpoint, RemoteScorerOptions options)
    : impl_(std::make_unique<Impl>()) {
    constexpr std::string_view scheme = "http://";
    if (!endpoint.starts_with(scheme))
        throw Error(ErrorKind::Argument, "scorer endpoint must start with http://, got '" + endpoint + "'");
    auto slash = endpoint.find('/', scheme.size());
    impl_->origin = endpoint.substr(0, slash);
    std::string base = slash == std::string::npos ? "" : endpoint.substr(slash);
    while (!base.empty() && base.back() == '/') base.pop_back();
    impl_->path = base + "/score";
    impl_->options = options;
    impl_->client = std::make_unique<httplib::Client>(impl_->origin);
    auto to_sec = [](std::chrono::milliseconds ms) {
        return std::pair<time_t, time_t>(ms.count() / 1000, (ms.count() % 1000) * 1000);
    };
    auto [cs, cus] = to_sec(options.connect_timeout);
    auto [rs, rus] = to_sec(options.read_timeout);
    impl_->client->set_connection_timeout(cs, cus);
    impl_->client->set_read_timeout(rs, rus);
    impl_->client->set_write_timeout(rs, rus);
}

RemoteScorer::~RemoteScorer() = default;

std::vector<std::vector<double>> RemoteScorer::score(std::span<const ScoreRequest> batch) {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    for (const auto& req : batch) {
        const auto body = score_request_to_json(req).dump();
        std::string last_error;
        const int attempts = 1 + std::max(0, impl_->options.retries);
        bool done = false;
        for (int attempt = 0; attempt < attempts && !done; ++attempt) {
            if (attempt) std::this_thread::sleep_for(impl_->options.backoff * attempt);
            auto res = impl_->client->Post(impl_->path, body, "application/json");
            if (!res) {
                last_error = httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP " + std::to_string(res->status);
                if (res->status < 500) break;
                continue;
            }
            out.push_back(parse_score_response(res->body, req.candidates.size()));
            done = true;
        }
        if (!done)
            throw Error(ErrorKind::Transport, "POST " + impl_->origin + impl_->path + " failed after " +
                                                  std::to_string(attempts) + " attempt(s) (" +
                                                  std::to_string(impl_->options.retries) +
                                                  " retries): " + last_error);
    }
    return out;
}

std::unique_ptr<Scorer> remote_scorer(std::string endpoint, RemoteScorerOptions options) {
    return std::make_unique<RemoteScorer>(std::move(endpoint), options);
}

} // namespace kbplugin
