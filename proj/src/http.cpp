/*
 * Copyright 2026 The promptedit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "promptedit/http.hpp"

#include "httplib.h"
#include "promptedit/error.hpp"

namespace promptedit {

std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "URL lacks a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string Base64Encode(const std::string& bytes) {
  return httplib::detail::base64_encode(bytes);
}

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  HttpResponse Get(const std::string& url) override {
    const auto [base, path] = SplitUrl(url);
    httplib::Client client(base);
    Configure(client);
    return Convert(client.Get(path));
  }

  HttpResponse Post(const std::string& url, const std::string& body,
                    const std::string& content_type) override {
    const auto [base, path] = SplitUrl(url);
    httplib::Client client(base);
    Configure(client);
    return Convert(client.Post(path, body, content_type));
  }

 private:
  void Configure(httplib::Client& client) const {
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    client.set_follow_location(true);
  }

  static HttpResponse Convert(const httplib::Result& result) {
    if (!result) return {};
    return {result->status, result->body};
  }

  std::chrono::milliseconds timeout_;
};

}  // namespace

std::shared_ptr<HttpTransport> MakeHttpTransport(std::chrono::milliseconds timeout) {
  return std::make_shared<HttplibTransport>(timeout);
}

}  // namespace promptedit
