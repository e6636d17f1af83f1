/*
 * Copyright 2026 The Artic Authors.
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

#include "artic/eval/asr.hpp"

#include <regex>
#include <utility>

#include <httplib.h>

#include "artic/errors.hpp"
#include "process.hpp"

namespace artic::eval {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

Waveform at_model_rate(const Waveform& wav) {
  return wav.sample_rate == kSampleRate ? wav : resample(wav, kSampleRate);
}

}  // namespace

StubAsrClient::StubAsrClient(std::map<std::string, std::string> responses, std::optional<std::string> default_text)
    : responses_(std::move(responses)), default_text_(std::move(default_text)) {}

std::string StubAsrClient::transcribe(const Waveform& /*wav*/, const std::string& utterance_id) {
  const auto it = responses_.find(utterance_id);
  if (it != responses_.end()) return it->second;
  if (default_text_) return *default_text_;
  throw TransportError(utterance_id + ": stub ASR has no response");
}

CommandAsrClient::CommandAsrClient(std::string command) : command_(std::move(command)) {
  if (command_.find("{wav}") == std::string::npos) throw ConfigError("ASR command must contain {wav}");
}

std::string CommandAsrClient::transcribe(const Waveform& wav, const std::string& utterance_id) {
  internal::ScratchDir scratch;
  const auto path = scratch.path() / "input.wav";
  write_wav(at_model_rate(wav), path);
  const auto result = internal::run_capture(internal::replace_all(command_, "{wav}", internal::shell_quote(path.string())));
  if (result.exit_code != 0) {
    throw TransportError(utterance_id + ": ASR command exited with status " + std::to_string(result.exit_code));
  }
  return trim(result.output);
}

HttpAsrClient::HttpAsrClient(std::string url, double timeout_s) : timeout_s_(timeout_s) {
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(url, match, pattern)) throw ConfigError("bad ASR url: " + url);
  base_ = match[1].str();
  path_ = match[2].matched ? match[2].str() : "/";
}

std::string HttpAsrClient::transcribe(const Waveform& wav, const std::string& utterance_id) {
  const auto bytes = encode_wav(at_model_rate(wav));
  httplib::Client client(base_);
  const auto seconds = static_cast<time_t>(timeout_s_);
  client.set_read_timeout(seconds, 0);
  client.set_connection_timeout(seconds, 0);
  const auto response = client.Post(path_, reinterpret_cast<const char*>(bytes.data()), bytes.size(), "audio/wav");
  if (!response) {
    throw TransportError(utterance_id + ": ASR request failed: " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw TransportError(utterance_id + ": ASR service returned HTTP " + std::to_string(response->status));
  }
  const std::string body = trim(response->body);
  if (!body.empty() && body.front() == '{') {
    try {
      return json::parse(body).at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw TransportError(utterance_id + ": bad ASR response: " + e.what());
    }
  }
  return body;
}

std::string transcribe(const Waveform& wav, AsrClient& client, const std::string& utterance_id) {
  try {
    return client.transcribe(wav, utterance_id);
  } catch (const TransportError&) {
    throw;
  } catch (const std::exception& e) {
    throw TransportError(utterance_id + ": ASR client '" + client.name() + "' failed: " + e.what());
  }
}

std::unique_ptr<AsrClient> make_asr_client(const json& spec) {
  try {
    const std::string type = spec.value("type", "stub");
    if (type == "stub") {
      std::map<std::string, std::string> responses;
      if (spec.contains("responses")) responses = spec.at("responses").get<std::map<std::string, std::string>>();
      std::optional<std::string> fallback;
      if (spec.contains("default") && !spec.at("default").is_null()) fallback = spec.at("default").get<std::string>();
      return std::make_unique<StubAsrClient>(std::move(responses), std::move(fallback));
    }
    if (type == "command") return std::make_unique<CommandAsrClient>(spec.at("command").get<std::string>());
    if (type == "http") {
      return std::make_unique<HttpAsrClient>(spec.at("url").get<std::string>(), spec.value("timeout_s", 60.0));
    }
    throw ConfigError("unknown ASR client type '" + type + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad ASR client spec: ") + e.what());
  }
}

}  // namespace artic::eval
