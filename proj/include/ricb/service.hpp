#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ricb/bank.hpp"

namespace ricb {

/// HTTP front end over one read-only bank.
///
///   GET  /health      {"status":"ok"}
///   GET  /bank/info   record count, dim, label count, descriptor, estimator
///   POST /query       multipart field `image`; query params k, metric, use_oad
///   GET  /image/{id}  the record's source image as PNG
///
/// Errors are JSON {"error": <code>, "detail": <text>} with a 4xx/5xx status.
/// Handlers only read shared state, so requests are served concurrently.
class QueryService {
 public:
  struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
  };

  explicit QueryService(FeatureBank bank,
                        std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~QueryService();
  QueryService(const QueryService&) = delete;
  QueryService& operator=(const QueryService&) = delete;

  // Route handlers, callable without a socket.
  Response health() const;
  Response bank_info() const;
  Response query(const std::string& image_bytes,
                 const std::map<std::string, std::string>& params) const;
  Response image(const std::string& id) const;

  // port 0 picks a free port. Returns the bound port; throws BindFailure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();
  void wait_until_ready() const;

  const FeatureBank& bank() const noexcept { return bank_; }

 private:
  struct Server;

  FeatureBank bank_;
  std::optional<DescriptorConfig> descriptor_;
  std::size_t label_count_ = 0;
  std::unique_ptr<Server> server_;
};

// "host:port" (host may be empty for 0.0.0.0). Throws InvalidArgument.
std::pair<std::string, int> parse_listen_address(const std::string& address);

// Loads the bank (BankLoadFailure on any load error), binds (BindFailure) and
// serves until the process is terminated.
void serve(const std::filesystem::path& bank_path, const std::string& listen_address,
           const std::optional<std::filesystem::path>& static_dir);

}  // namespace ricb
