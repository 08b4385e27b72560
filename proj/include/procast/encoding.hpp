#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "procast/event_log.hpp"
#include "procast/foe_eval.hpp"

namespace procast {

/// Fixed-width prefix encoders. oneHotLast and attributeLast look at the
/// current (k-th) event; oneHotCounts aggregates events 1..k; timeFeatures
/// derives three reals from time:timestamp: time since the previous event,
/// time since UTC midnight, time since Monday 00:00 UTC.
enum class EncoderKind { OneHotLast, OneHotCounts, AttributeLast, TimeFeatures };

const char* encoder_kind_name(EncoderKind k);
std::optional<EncoderKind> encoder_kind_from_name(const std::string& name);

struct EncoderSpec {
  std::string id;         // unique per run; prefixes the feature names
  EncoderKind kind;
  std::string attribute;  // empty for timeFeatures
};

/// Per encoder spec: the distinct attribute values observed over the
/// training log, in first-occurrence order. The 1-based position of a value
/// is its one-hot index and its attributeLast code. Undefined is never an
/// entry.
class Vocabulary {
public:
  const std::vector<AttrValue>& values(const std::string& spec_id) const;
  std::optional<std::size_t> index_of(const std::string& spec_id, const AttrValue& v) const;
  void add(const std::string& spec_id, const AttrValue& v);  // keeps first occurrence
  bool has_spec(const std::string& spec_id) const { return entries_.count(spec_id) > 0; }

  std::uint64_t content_hash() const;

private:
  struct PerSpec {
    std::vector<AttrValue> ordered;
    std::unordered_map<std::string, std::size_t> index;  // AttrValue::key() -> 0-based
  };
  std::map<std::string, PerSpec> entries_;
};

/// Ordered feature names; the hash guards models against being fed vectors
/// from a different encoding setup.
struct FeatureSchema {
  std::vector<std::string> names;
  std::uint64_t hash() const;
};

struct FeatureVector {
  std::vector<double> values;
  std::uint64_t schema_hash = 0;
};

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

Vocabulary fit_vocabulary(const EventLog& log, const std::vector<EncoderSpec>& specs);
FeatureSchema build_schema(const std::vector<EncoderSpec>& specs, const Vocabulary& vocab);

/// Specs + vocabulary + schema bound together; encode() is pure and safe to
/// call from several threads.
class FeatureEncoder {
public:
  FeatureEncoder(std::vector<EncoderSpec> specs, Vocabulary vocab);

  static FeatureEncoder fit(const EventLog& training_log, std::vector<EncoderSpec> specs);

  const std::vector<EncoderSpec>& specs() const { return specs_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const FeatureSchema& schema() const { return schema_; }
  std::uint64_t schema_hash() const { return schema_hash_; }

  FeatureVector encode(const TracePrefix& p, foe::EvalWarnings* warn = nullptr) const;

private:
  std::vector<EncoderSpec> specs_;
  Vocabulary vocab_;
  FeatureSchema schema_;
  std::uint64_t schema_hash_ = 0;
};

/// Free-function form: encodes one prefix against fitted specs+vocabulary.
FeatureVector encode_prefix(const TracePrefix& p, const std::vector<EncoderSpec>& specs,
                            const Vocabulary& vocab, foe::EvalWarnings* warn = nullptr);

}  // namespace procast
