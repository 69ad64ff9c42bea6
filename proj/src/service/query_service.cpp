#include "ricb/service.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <iostream>

#include <httplib.h>

#include <json.hpp>

#include "ricb/error.hpp"
#include "ricb/search.hpp"

namespace ricb {

namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxUpload = 20u * 1024u * 1024u;

QueryService::Response error_response(int status, std::string_view code, const std::string& detail) {
  return {status, "application/json", json{{"error", code}, {"detail", detail}}.dump()};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return 404;
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::CorruptImage:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ZeroVector:
    case ErrorCode::NonFinite: return 400;
    case ErrorCode::ConfigInvalid: return 409;
    default: return 500;
  }
}

std::string url_encode_path(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw Error(ErrorCode::InvalidArgument, "use_oad must be true or false, got '" + v + "'");
}

std::size_t parse_k(const std::string& v) {
  std::size_t used = 0;
  long long k = 0;
  try {
    k = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || k < 1) {
    throw Error(ErrorCode::InvalidArgument, "k must be a positive integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(k);
}

}  // namespace

struct QueryService::Server {
  httplib::Server http;
};

QueryService::QueryService(FeatureBank bank, std::optional<std::filesystem::path> static_dir)
    : bank_(std::move(bank)),
      descriptor_(DescriptorConfig::from_id(bank_.descriptor_id())),
      label_count_(bank_.label_count()),
      server_(std::make_unique<Server>()) {
  auto& http = server_->http;
  http.set_payload_max_length(kMaxUpload + 1024 * 1024);

  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  http.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health());
  });
  http.Get("/bank/info", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, bank_info());
  });
  http.Post("/query", [this, reply](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_file("image")) {
      reply(res, error_response(400, "MissingImage", "multipart field 'image' is required"));
      return;
    }
    std::map<std::string, std::string> params;
    for (const auto& [key, value] : req.params) params[key] = value;
    reply(res, query(req.get_file_value("image").content, params));
  });
  http.Get(R"(/image/(.+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, image(req.matches[1]));
  });
  if (static_dir) {
    if (!http.set_mount_point("/", static_dir->string())) {
      throw Error(ErrorCode::FileNotFound, "static directory " + static_dir->string());
    }
  }
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    std::string code = res.status == 404 ? "NotFound" : "HttpError";
    res.set_content(json{{"error", code}, {"detail", httplib::status_message(res.status)}}.dump(),
                    "application/json");
  });
  http.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string detail = "unknown error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          detail = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", "InternalError"}, {"detail", detail}}.dump(),
                        "application/json");
      });
}

QueryService::~QueryService() { stop(); }

QueryService::Response QueryService::health() const {
  return {200, "application/json", json{{"status", "ok"}}.dump()};
}

QueryService::Response QueryService::bank_info() const {
  json body{{"records", bank_.size()},
            {"dim", bank_.dim()},
            {"labels", label_count_},
            {"descriptor_id", bank_.descriptor_id()},
            {"image_queries", descriptor_.has_value()},
            {"oad_estimator", "moments"}};
  return {200, "application/json", body.dump()};
}

QueryService::Response QueryService::query(const std::string& image_bytes,
                                           const std::map<std::string, std::string>& params) const {
  try {
    if (image_bytes.size() > kMaxUpload) {
      return error_response(413, "PayloadTooLarge", "images are limited to 20 MB");
    }
    std::size_t k = 20;
    Metric metric = Metric::euclidean;
    bool use_oad = true;
    for (const auto& [key, value] : params) {
      if (key == "k") {
        k = parse_k(value);
      } else if (key == "metric") {
        metric = parse_metric(value);
      } else if (key == "use_oad") {
        use_oad = parse_bool(value);
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown query parameter '" + key + "'");
      }
    }
    if (!descriptor_) {
      return error_response(409, "DescriptorUnavailable",
                            "bank descriptor '" + bank_.descriptor_id() +
                                "' cannot be computed from images");
    }

    auto t0 = std::chrono::steady_clock::now();
    RasterImage img = decode_image_bytes(std::span(
        reinterpret_cast<const std::uint8_t*>(image_bytes.data()), image_bytes.size()));
    double decode_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    EstimatorConfig est{use_oad ? EstimatorKind::moments : EstimatorKind::none};
    QueryOutcome out = query_image_timed(bank_, img, k, metric, est, *descriptor_);

    json hits = json::array();
    std::size_t rank = 1;
    for (const auto& h : out.result.hits) {
      hits.push_back({{"rank", rank++},
                      {"id", h.id},
                      {"label", h.label},
                      {"distance", h.distance},
                      {"thumbnail", "/image/" + url_encode_path(h.id)}});
    }
    const auto& t = out.timing;
    json body{{"predicted_angle_deg", out.predicted.value()},
              {"k", k},
              {"metric", to_string(metric)},
              {"use_oad", use_oad},
              {"hits", std::move(hits)},
              {"latency_ms",
               {{"decode", decode_ms},
                {"orientation", t.orientation_ms},
                {"extraction", t.extraction_ms},
                {"scan", t.scan_ms},
                {"total", decode_ms + t.orientation_ms + t.extraction_ms + t.scan_ms}}}};
    return {200, "application/json", body.dump()};
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.detail());
  }
}

QueryService::Response QueryService::image(const std::string& id) const {
  auto idx = bank_.find(id);
  if (!idx) return error_response(404, "UnknownId", "no record " + id);
  const std::string& path = bank_.meta(*idx).source_path;
  if (path.empty()) return error_response(404, "NoSourceImage", "record " + id + " has no source image");
  try {
    auto png = encode_png(decode_image(path));
    return {200, "image/png", std::string(png.begin(), png.end())};
  } catch (const Error& e) {
    return error_response(e.code() == ErrorCode::FileNotFound ? 404 : 500, to_string(e.code()),
                          e.detail());
  }
}

int QueryService::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = server_->http.bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::BindFailure, "cannot bind " + host);
    return bound;
  }
  if (!server_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void QueryService::run() { server_->http.listen_after_bind(); }

void QueryService::stop() {
  if (server_) server_->http.stop();
}

void QueryService::wait_until_ready() const { server_->http.wait_until_ready(); }

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "listen address must be host:port, got '" + address + "'");
  }
  std::string host = address.substr(0, colon);
  std::string port_text = address.substr(colon + 1);
  std::size_t used = 0;
  int port = -1;
  try {
    port = std::stoi(port_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::InvalidArgument, "bad port in '" + address + "'");
  }
  if (host.empty()) host = "0.0.0.0";
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  return {host, port};
}

void serve(const std::filesystem::path& bank_path, const std::string& listen_address,
           const std::optional<std::filesystem::path>& static_dir) {
  auto [host, port] = parse_listen_address(listen_address);
  FeatureBank bank;
  try {
    bank = load_bank(bank_path);
  } catch (const Error& e) {
    throw Error(ErrorCode::BankLoadFailure, bank_path.string() + ": " + e.what());
  }
  QueryService service(std::move(bank), static_dir);
  int bound = service.bind(host, port);
  std::cerr << "serving " << service.bank().size() << " records on " << host << ":" << bound
            << "\n";
  service.run();
}

}  // namespace ricb
