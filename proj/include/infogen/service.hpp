#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "infogen/dataset.hpp"
#include "infogen/recommend.hpp"

namespace httplib {
class Server;
}

namespace infogen {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Content-addressed store for uploaded pivot graphics, LRU-evicted.
class UploadStore {
 public:
  explicit UploadStore(std::size_t capacity = 100) : capacity_(capacity) {}

  /// Returns the content id (hex digest of the bytes).
  std::string put(std::string svg);
  std::optional<std::string> get(const std::string& id);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<std::string> order_;  // most recent first
  std::unordered_map<std::string, std::pair<std::string, std::list<std::string>::iterator>> items_;
};

inline constexpr std::size_t kMaxSketchPoints = 10000;

/// Stateless JSON facade over the engine. The dataset is read-only after
/// construction; only the upload store mutates.
class Service {
 public:
  explicit Service(DatasetManifest dataset) : dataset_(std::move(dataset)) {}

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Blocks serving HTTP/1.1 until stop() is called from another thread.
  void listen(const std::string& host, int port);
  void stop();

  const DatasetManifest& dataset() const { return dataset_; }
  UploadStore& uploads() { return uploads_; }

 private:
  HttpResponse recommend(const nlohmann::json& req);
  HttpResponse compose(const nlohmann::json& req);
  HttpResponse rank_layouts(const nlohmann::json& req);
  HttpResponse rank_vgs(const nlohmann::json& req);
  HttpResponse rank_connections(const nlohmann::json& req);
  HttpResponse summary() const;
  HttpResponse asset(std::string_view kind, std::string_view id) const;

  DatasetManifest dataset_;
  UploadStore uploads_;
  std::mutex server_mu_;
  std::shared_ptr<httplib::Server> server_;
};

/// {stage, code, message} error body.
HttpResponse error_response(int status, std::string_view stage, std::string_view code, std::string_view message);

}  // namespace infogen
