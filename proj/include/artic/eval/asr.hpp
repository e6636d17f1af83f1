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

#ifndef ARTIC_EVAL_ASR_HPP_
#define ARTIC_EVAL_ASR_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "artic/audio.hpp"

namespace artic::eval {

// WAV in, UTF-8 text out.
class AsrClient {
 public:
  virtual ~AsrClient() = default;
  virtual std::string name() const = 0;
  virtual std::string transcribe(const Waveform& wav, const std::string& utterance_id) = 0;
};

// Returns canned text per utterance id, falling back to `default_text`.
// An id with no entry and no default is a transport failure.
class StubAsrClient : public AsrClient {
 public:
  explicit StubAsrClient(std::map<std::string, std::string> responses = {},
                         std::optional<std::string> default_text = std::nullopt);
  std::string name() const override { return "stub"; }
  std::string transcribe(const Waveform& wav, const std::string& utterance_id) override;

 private:
  std::map<std::string, std::string> responses_;
  std::optional<std::string> default_text_;
};

// Runs `command` with {wav} replaced by a temporary PCM16 WAV path; stdout,
// trimmed, is the transcript. A nonzero exit status is a transport failure.
class CommandAsrClient : public AsrClient {
 public:
  explicit CommandAsrClient(std::string command);
  std::string name() const override { return "command"; }
  std::string transcribe(const Waveform& wav, const std::string& utterance_id) override;

 private:
  std::string command_;
};

// POSTs the WAV bytes (Content-Type audio/wav) to `url`. The response body is
// either plain text or a JSON object with a "text" field.
class HttpAsrClient : public AsrClient {
 public:
  explicit HttpAsrClient(std::string url, double timeout_s = 60.0);
  std::string name() const override { return "http"; }
  std::string transcribe(const Waveform& wav, const std::string& utterance_id) override;

 private:
  std::string base_;
  std::string path_;
  double timeout_s_;
};

// Calls the client and rewraps any failure as TransportError naming the
// utterance.
std::string transcribe(const Waveform& wav, AsrClient& client, const std::string& utterance_id);

// {"type": "stub", "responses": {...}, "default": "..."}
// {"type": "command", "command": "whisper-cli {wav}"}
// {"type": "http", "url": "http://host:port/transcribe", "timeout_s": 60}
std::unique_ptr<AsrClient> make_asr_client(const nlohmann::json& spec);

}  // namespace artic::eval

#endif  // ARTIC_EVAL_ASR_HPP_
