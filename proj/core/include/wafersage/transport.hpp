// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wafersage/util.hpp"

namespace wafersage::transport {

struct ChatMessage {
  std::string role;
  std::string content;
  std::optional<std::string> image_ref;  // attached as an image_url content part
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::optional<double> temperature;
};

struct ChatReply {
  std::string content;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatReply complete(const ChatRequest& request) = 0;
};

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
/// The API key is read from the environment variable named by auth_env;
/// tokens never appear in config files.
struct TransportProfile {
  std::string endpoint = "http://127.0.0.1:8080/v1/chat/completions";
  std::string model = "judge-model";
  std::string auth_env;  // empty: no Authorization header
  int timeout_sec = 60;
  int max_retries = 3;
  double backoff_base_sec = 0.5;
  int max_in_flight = 4;

  static TransportProfile from_json(const util::ordered_json& j);
  util::ordered_json to_json() const;
};

/// POSTs OpenAI-shape requests ({"model", "messages": [...]}) and reads
/// choices[0].message.content. Retries transient failures (connect errors,
/// 429, 5xx) with exponential backoff; 401/403 raise AuthError immediately.
class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(TransportProfile profile);
  ChatReply complete(const ChatRequest& request) override;
  const TransportProfile& profile() const { return profile_; }

 private:
  TransportProfile profile_;
  std::string host_base_;  // scheme://host[:port]
  std::string path_;
};

util::ordered_json request_to_wire_json(const ChatRequest& request);

/// Stable fingerprint of a request body; transcript keys append an occurrence
/// counter so repeated identical requests replay in order.
std::string request_fingerprint(const ChatRequest& request);

/// Wraps a transport and appends every (request, reply) pair to a transcript
/// JSONL file, so a recorded run can later be replayed offline.
class RecordingTransport : public ChatTransport {
 public:
  RecordingTransport(ChatTransport& inner, std::filesystem::path transcript_path);
  ~RecordingTransport() override;
  ChatReply complete(const ChatRequest& request) override;

 private:
  ChatTransport& inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
  std::map<std::string, int> occurrence_;
  std::vector<util::ordered_json> rows_;
};

/// Serves replies from a transcript; a request with no recorded reply raises
/// TransportError.
class ReplayTransport : public ChatTransport {
 public:
  explicit ReplayTransport(const std::filesystem::path& transcript_path);
  ChatReply complete(const ChatRequest& request) override;

 private:
  std::mutex mutex_;
  std::map<std::string, std::string> replies_;  // key#occurrence -> content
  std::map<std::string, int> occurrence_;
};

}  // namespace wafersage::transport
