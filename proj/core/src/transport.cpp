// SPDX-License-Identifier: Apache-2.0
#include "wafersage/transport.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "wafersage/errors.hpp"

namespace wafersage::transport {

TransportProfile TransportProfile::from_json(const util::ordered_json& j) {
  TransportProfile p;
  if (j.contains("endpoint")) p.endpoint = j.at("endpoint").get<std::string>();
  if (j.contains("model")) p.model = j.at("model").get<std::string>();
  if (j.contains("auth_env")) p.auth_env = j.at("auth_env").get<std::string>();
  if (j.contains("timeout_sec")) p.timeout_sec = j.at("timeout_sec").get<int>();
  if (j.contains("max_retries")) p.max_retries = j.at("max_retries").get<int>();
  if (j.contains("backoff_base_sec")) p.backoff_base_sec = j.at("backoff_base_sec").get<double>();
  if (j.contains("max_in_flight")) p.max_in_flight = j.at("max_in_flight").get<int>();
  if (p.max_in_flight < 1) throw Error("max_in_flight must be at least 1");
  if (p.max_retries < 0) throw Error("max_retries must be nonnegative");
  return p;
}

util::ordered_json TransportProfile::to_json() const {
  return {{"endpoint", endpoint},       {"model", model},
          {"auth_env", auth_env},       {"timeout_sec", timeout_sec},
          {"max_retries", max_retries}, {"backoff_base_sec", backoff_base_sec},
          {"max_in_flight", max_in_flight}};
}

util::ordered_json request_to_wire_json(const ChatRequest& request) {
  util::ordered_json j = util::ordered_json::object();
  j["model"] = request.model;
  util::ordered_json messages = util::ordered_json::array();
  for (const auto& m : request.messages) {
    util::ordered_json msg = util::ordered_json::object();
    msg["role"] = m.role;
    if (m.image_ref) {
      msg["content"] = util::ordered_json::array(
          {{{"type", "text"}, {"text", m.content}},
           {{"type", "image_url"}, {"image_url", {{"url", *m.image_ref}}}}});
    } else {
      msg["content"] = m.content;
    }
    messages.push_back(std::move(msg));
  }
  j["messages"] = std::move(messages);
  if (request.temperature) j["temperature"] = *request.temperature;
  return j;
}

std::string request_fingerprint(const ChatRequest& request) {
  return util::sha256_hex(request_to_wire_json(request).dump());
}

namespace {

// scheme://host[:port]/path -> (scheme://host[:port], /path)
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error("endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpChatTransport::HttpChatTransport(TransportProfile profile) : profile_(std::move(profile)) {
  std::tie(host_base_, path_) = split_endpoint(profile_.endpoint);
}

ChatReply HttpChatTransport::complete(const ChatRequest& request) {
  const std::string body = request_to_wire_json(request).dump();

  httplib::Headers headers;
  if (!profile_.auth_env.empty()) {
    const char* token = std::getenv(profile_.auth_env.c_str());
    if (token != nullptr && *token != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  std::string last_error;
  for (int attempt = 0; attempt <= profile_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay = profile_.backoff_base_sec * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }

    httplib::Client client(host_base_);
    client.set_connection_timeout(profile_.timeout_sec, 0);
    client.set_read_timeout(profile_.timeout_sec, 0);
    client.set_write_timeout(profile_.timeout_sec, 0);

    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("authentication rejected (HTTP " + std::to_string(res->status) + ")");
    }
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
    }

    util::ordered_json j;
    try {
      j = util::ordered_json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("malformed response body: ") + e.what());
    }
    try {
      return ChatReply{j.at("choices").at(0).at("message").at("content").get<std::string>()};
    } catch (const nlohmann::json::exception&) {
      throw TransportError("response missing choices[0].message.content");
    }
  }
  throw TransportError("retries exhausted: " + last_error);
}

RecordingTransport::RecordingTransport(ChatTransport& inner, std::filesystem::path transcript_path)
    : inner_(inner), path_(std::move(transcript_path)) {}

RecordingTransport::~RecordingTransport() {
  try {
    util::write_file_atomic(path_, util::to_jsonl(rows_));
  } catch (...) {
    // destructor must not throw; an unwritable transcript surfaces on replay
  }
}

ChatReply RecordingTransport::complete(const ChatRequest& request) {
  const std::string fingerprint = request_fingerprint(request);
  ChatReply reply = inner_.complete(request);
  std::lock_guard<std::mutex> lock(mutex_);
  const int occurrence = occurrence_[fingerprint]++;
  rows_.push_back({{"key", fingerprint + "#" + std::to_string(occurrence)},
                   {"request", request_to_wire_json(request)},
                   {"reply", reply.content}});
  return reply;
}

ReplayTransport::ReplayTransport(const std::filesystem::path& transcript_path) {
  for (const auto& row : util::read_jsonl(transcript_path)) {
    replies_[row.at("key").get<std::string>()] = row.at("reply").get<std::string>();
  }
}

ChatReply ReplayTransport::complete(const ChatRequest& request) {
  const std::string fingerprint = request_fingerprint(request);
  std::lock_guard<std::mutex> lock(mutex_);
  const int occurrence = occurrence_[fingerprint]++;
  const std::string key = fingerprint + "#" + std::to_string(occurrence);
  auto it = replies_.find(key);
  if (it == replies_.end()) {
    throw TransportError("no recorded reply for request " + key);
  }
  return ChatReply{it->second};
}

}  // namespace wafersage::transport
