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

#ifndef PROMPTEDIT_HTTP_HPP_
#define PROMPTEDIT_HTTP_HPP_

#include <chrono>
#include <memory>
#include <string>

namespace promptedit {

struct HttpResponse {
  // 0 means the request never completed (connection refused, timeout).
  int status = 0;
  std::string body;
};

// Minimal transport seam so clients can be driven by fakes in tests.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Get(const std::string& url) = 0;
  virtual HttpResponse Post(const std::string& url, const std::string& body,
                            const std::string& content_type) = 0;
};

// cpp-httplib backed transport; http:// and https:// URLs.
std::shared_ptr<HttpTransport> MakeHttpTransport(
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

// Splits "http://host:port/a/b?q" into ("http://host:port", "/a/b?q").
std::pair<std::string, std::string> SplitUrl(const std::string& url);

std::string Base64Encode(const std::string& bytes);

}  // namespace promptedit

#endif  // PROMPTEDIT_HTTP_HPP_
