// Copyright 2026 The Unseen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unseen/ingest.h"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "unicode/locid.h"
#include "unicode/normalizer2.h"
#include "unicode/uchar.h"
#include "unicode/unistr.h"
#include "unicode/ustring.h"
#include "unseen/rng.h"

namespace unseen {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ValidUtf8(std::string_view s) {
  UErrorCode err = U_ZERO_ERROR;
  int32_t len = 0;
  u_strFromUTF8(nullptr, 0, &len, s.data(), static_cast<int32_t>(s.size()),
                &err);
  return err == U_BUFFER_OVERFLOW_ERROR || err == U_STRING_NOT_TERMINATED_WARNING ||
         U_SUCCESS(err);
}

icu::UnicodeString Nfc(const icu::UnicodeString& s) {
  UErrorCode err = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(err);
  if (U_FAILURE(err)) ThrowData("ICU NFC normalizer unavailable");
  icu::UnicodeString out = nfc->normalize(s, err);
  if (U_FAILURE(err)) ThrowData("NFC normalization failed");
  return out;
}

void PutU64(std::string* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU32(std::string* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  std::uint64_t U64() { return Uint(8); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Uint(4)); }
  std::string_view Bytes(std::uint64_t n) {
    if (n > bytes_.size() - pos_) ThrowData("truncated stream file");
    auto v = bytes_.substr(pos_, static_cast<std::size_t>(n));
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::uint64_t Uint(int width) {
    const auto b = Bytes(static_cast<std::uint64_t>(width));
    std::uint64_t v = 0;
    for (int i = width - 1; i >= 0; --i) {
      v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
    }
    return v;
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "USPS1";

}  // namespace

std::string NormalizeToken(std::string_view raw) {
  icu::UnicodeString s = Nfc(icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))));
  s.toLower(icu::Locale::getRoot());
  s = Nfc(s);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && !u_isalnum(s.char32At(begin))) {
    begin = s.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (u_isalnum(s.char32At(prev))) break;
    end = prev;
  }
  std::string out;
  s.tempSubStringBetween(begin, end).toUTF8String(out);
  return out;
}

ObservationStream tokens_from_text(std::string_view text, std::string label) {
  if (!ValidUtf8(text)) ThrowData("corpus is not valid UTF-8");
  const icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  ObservationStream stream(std::move(label));
  int32_t i = 0;
  const int32_t n = s.length();
  while (i < n) {
    while (i < n && u_isUWhiteSpace(s.char32At(i))) i = s.moveIndex32(i, 1);
    int32_t j = i;
    while (j < n && !u_isUWhiteSpace(s.char32At(j))) j = s.moveIndex32(j, 1);
    if (j > i) {
      std::string raw;
      s.tempSubStringBetween(i, j).toUTF8String(raw);
      const std::string tok = NormalizeToken(raw);
      if (!tok.empty()) {
        const SpeciesId id = stream.Intern(tok);
        stream.AddEvent({id});
      }
    }
    i = j;
  }
  if (stream.empty()) ThrowData("empty corpus: no tokens found");
  return stream;
}

ObservationStream load_tokens(const std::string& path) {
  return tokens_from_text(ReadFile(path), path);
}

ObservationStream incidence_from_text(std::string_view text,
                                      std::string label) {
  ObservationStream stream(std::move(label));
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<SpeciesId> ids;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find('\0') != std::string_view::npos || !ValidUtf8(line)) {
      ThrowData("malformed line " + std::to_string(line_no) +
                ": NUL byte or invalid UTF-8");
    }
    ids.clear();
    std::size_t k = 0;
    while (k < line.size()) {
      while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
      std::size_t e = k;
      while (e < line.size() && line[e] != ' ' && line[e] != '\t') ++e;
      if (e > k) ids.push_back(stream.Intern(line.substr(k, e - k)));
      k = e;
    }
    if (!ids.empty()) stream.AddEvent(ids);
    if (eol == text.size()) break;
  }
  if (stream.empty()) ThrowData("incidence file has no events");
  return stream;
}

ObservationStream load_incidence(const std::string& path) {
  return incidence_from_text(ReadFile(path), path);
}

ObservationStream Subsample(const ObservationStream& stream, int every) {
  if (every < 1) ThrowInvalid("subsample factor must be >= 1");
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < stream.size(); k += static_cast<std::size_t>(every)) {
    keep.push_back(k);
  }
  return stream.Select(keep);
}

ObservationStream RestrictLocations(const ObservationStream& stream,
                                    std::int64_t max_location) {
  const auto& names = stream.names();
  std::vector<char> keep(names.size(), 0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::int64_t v = 0;
    const auto* b = names[i].data();
    const auto* e = b + names[i].size();
    const auto res = std::from_chars(b, e, v);
    keep[i] = res.ec == std::errc() && res.ptr == e && v >= 0 && v < max_location;
  }
  ObservationStream out(stream.label());
  out.set_names(names);
  std::vector<SpeciesId> ids;
  for (std::size_t k = 0; k < stream.size(); ++k) {
    ids.clear();
    for (SpeciesId id : stream.event(k)) {
      if (static_cast<std::size_t>(id) < keep.size() &&
          keep[static_cast<std::size_t>(id)]) {
        ids.push_back(id);
      }
    }
    if (!ids.empty()) out.AddEvent(ids);
  }
  return out;
}

SplitResult apply_split(const ObservationStream& stream, const SplitPlan& plan) {
  if (!(plan.fraction_seen > 0.0 && plan.fraction_seen < 1.0)) {
    ThrowInvalid("fraction_seen must lie in (0, 1)");
  }
  const ObservationStream base = plan.subsample_every > 1
                                     ? Subsample(stream, plan.subsample_every)
                                     : stream;
  const std::size_t n = base.size();
  const auto n_past = static_cast<std::size_t>(
      std::floor(plan.fraction_seen * static_cast<double>(n)));
  if (n_past < 1) ThrowInvalid("split leaves an empty prefix");
  if (n_past >= n) ThrowInvalid("split leaves an empty suffix");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (plan.permutation_seed.has_value()) {
    Engine engine(*plan.permutation_seed);
    Shuffle(std::span<std::size_t>(order), engine);
  }
  std::span<const std::size_t> all(order);
  const double t = static_cast<double>(n_past);
  return {base.Select(all.first(n_past)), base.Select(all.subspan(n_past)),
          Horizon(t, static_cast<double>(n - n_past) / t)};
}

std::string EncodeStream(const ObservationStream& stream) {
  std::string out(kMagic);
  PutU64(&out, stream.label().size());
  out += stream.label();
  PutU64(&out, stream.names().size());
  for (const auto& name : stream.names()) {
    PutU64(&out, name.size());
    out += name;
  }
  PutU64(&out, stream.size());
  for (std::size_t k = 0; k < stream.size(); ++k) {
    const auto e = stream.event(k);
    PutU32(&out, static_cast<std::uint32_t>(e.size()));
    for (SpeciesId id : e) PutU32(&out, static_cast<std::uint32_t>(id));
  }
  return out;
}

ObservationStream DecodeStream(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    ThrowData("not a stream file (bad magic)");
  }
  Reader in(bytes.substr(kMagic.size()));
  ObservationStream out(std::string(in.Bytes(in.U64())));
  const std::uint64_t n_names = in.U64();
  std::vector<std::string> names;
  for (std::uint64_t i = 0; i < n_names; ++i) {
    names.emplace_back(in.Bytes(in.U64()));
  }
  out.set_names(std::move(names));
  const std::uint64_t n_events = in.U64();
  std::vector<SpeciesId> ids;
  for (std::uint64_t k = 0; k < n_events; ++k) {
    const std::uint32_t size = in.U32();
    if (size == 0) ThrowData("stream file has an empty event");
    ids.resize(size);
    for (auto& id : ids) {
      const std::uint32_t v = in.U32();
      if (v > 0x7fffffffu) ThrowData("species id out of range");
      id = static_cast<SpeciesId>(v);
    }
    out.AddEvent(ids);
  }
  if (!in.done()) ThrowData("trailing bytes in stream file");
  return out;
}

void WriteStreamBinary(const ObservationStream& stream, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write '" + path + "'");
  const std::string bytes = EncodeStream(stream);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) ThrowData("write failed for '" + path + "'");
}

ObservationStream ReadStreamBinary(const std::string& path) {
  return DecodeStream(ReadFile(path));
}

}  // namespace unseen
