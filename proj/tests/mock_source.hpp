#pragma once

// In-process HTTP stand-in for a Scopus-shaped literature API. Serves a fixed
// five-record result over three pages (page size 2) and answers the first
// request for page 2 with a 429 + Retry-After: 0. Counts every request.

#include <atomic>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mocksource {

class ScopusLikeServer {
public:
    static constexpr const char* kApiKey = "test-key-1";

    ScopusLikeServer() {
        server_.Get("/content/search/scopus",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        ++requests_;
                        if (req.get_header_value("X-ApiKey") != kApiKey) {
                            res.status = 401;
                            return;
                        }
                        int start = std::stoi(req.get_param_value("start"));
                        int count = std::stoi(req.get_param_value("count"));
                        if (req.get_param_value("query").find("no such topic") !=
                            std::string::npos) {
                            res.set_content(empty_body(), "application/json");
                            return;
                        }
                        if (start == 2 && rate_limit_once_.exchange(false)) {
                            ++throttled_;
                            res.status = 429;
                            res.set_header("Retry-After", "0");
                            return;
                        }
                        res.set_content(page_body(start, count), "application/json");
                    });
        server_.Get(R"(/content/abstract/doi/(.+))",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        ++requests_;
                        if (req.get_header_value("X-ApiKey") != kApiKey) {
                            res.status = 401;
                            return;
                        }
                        std::string doi = req.matches[1].str();
                        auto q = doi.find('?');
                        if (q != std::string::npos) doi = doi.substr(0, q);
                        if (doi == "10.7/unresolvable") {
                            res.status = 404;
                            return;
                        }
                        nlohmann::json body = {
                            {"abstracts-retrieval-response",
                             {{"references",
                               {{"reference", {{{"ce:doi", "10.7/ref1"}},
                                               {{"ce:doi", "10.7/ref2"}},
                                               {{"ce:doi", "10.7/ref3"}}}}}}}}};
                        res.set_content(body.dump(), "application/json");
                    });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~ScopusLikeServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int requests() const { return requests_.load(); }
    int throttled() const { return throttled_.load(); }
    void rearm_rate_limit() { rate_limit_once_ = true; }

    static constexpr int kTotalRecords = 5;

private:
    static std::string page_body(int start, int count) {
        nlohmann::json entries = nlohmann::json::array();
        for (int i = start; i < std::min(start + count, kTotalRecords); ++i) {
            entries.push_back({{"prism:doi", "10.7/rec" + std::to_string(i)},
                               {"dc:title", "Record " + std::to_string(i)},
                               {"dc:description", "Abstract " + std::to_string(i)},
                               {"prism:coverDate", "2022-0" + std::to_string(i % 9 + 1) + "-01"},
                               {"prism:publicationName", "Mock Journal"},
                               {"prism:aggregationType", "Journal"},
                               {"author", {{{"authid", "au" + std::to_string(i)},
                                            {"authname", "Author " + std::to_string(i)}}}}});
        }
        nlohmann::json body = {
            {"search-results",
             {{"opensearch:totalResults", std::to_string(kTotalRecords)}, {"entry", entries}}}};
        return body.dump();
    }

    static std::string empty_body() {
        nlohmann::json body = {
            {"search-results",
             {{"opensearch:totalResults", "0"}, {"entry", nlohmann::json::array()}}}};
        return body.dump();
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    std::atomic<int> throttled_{0};
    std::atomic<bool> rate_limit_once_{true};
};

}  // namespace mocksource
