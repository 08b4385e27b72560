#include "procast/encoding.hpp"

#include "procast/errors.hpp"
#include "procast/time_util.hpp"

namespace procast {

const char* encoder_kind_name(EncoderKind k) {
  switch (k) {
    case EncoderKind::OneHotLast: return "oneHotLast";
    case EncoderKind::OneHotCounts: return "oneHotCounts";
    case EncoderKind::AttributeLast: return "attributeLast";
    case EncoderKind::TimeFeatures: return "timeFeatures";
  }
  return "?";
}

std::optional<EncoderKind> encoder_kind_from_name(const std::string& name) {
  if (name == "oneHotLast") return EncoderKind::OneHotLast;
  if (name == "oneHotCounts") return EncoderKind::OneHotCounts;
  if (name == "attributeLast") return EncoderKind::AttributeLast;
  if (name == "timeFeatures") return EncoderKind::TimeFeatures;
  return std::nullopt;
}

// --- Vocabulary -----------------------------------------------------------------

namespace {
const std::vector<AttrValue> kNoValues;
}

const std::vector<AttrValue>& Vocabulary::values(const std::string& spec_id) const {
  auto it = entries_.find(spec_id);
  return it == entries_.end() ? kNoValues : it->second.ordered;
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& spec_id,
                                                const AttrValue& v) const {
  auto it = entries_.find(spec_id);
  if (it == entries_.end()) return std::nullopt;
  auto hit = it->second.index.find(v.key());
  if (hit == it->second.index.end()) return std::nullopt;
  return hit->second;
}

void Vocabulary::add(const std::string& spec_id, const AttrValue& v) {
  if (v.is_undefined()) return;
  PerSpec& per = entries_[spec_id];
  auto [it, inserted] = per.index.emplace(v.key(), per.ordered.size());
  (void)it;
  if (inserted) per.ordered.push_back(v);
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t Vocabulary::content_hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& [spec_id, per] : entries_) {
    h = fnv1a64(spec_id, h);
    h = fnv1a64("\x1f", h);
    for (const auto& v : per.ordered) {
      h = fnv1a64(v.key(), h);
      h = fnv1a64("\x1e", h);
    }
  }
  return h;
}

// --- schema ---------------------------------------------------------------------

std::uint64_t FeatureSchema::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& n : names) {
    h = fnv1a64(n, h);
    h = fnv1a64("\x1f", h);
  }
  return h;
}

Vocabulary fit_vocabulary(const EventLog& log, const std::vector<EncoderSpec>& specs) {
  Vocabulary vocab;
  for (const auto& spec : specs) {
    if (spec.kind == EncoderKind::TimeFeatures) continue;
    for (const auto& trace : log.traces) {
      for (const auto& event : trace.events()) {
        vocab.add(spec.id, event.attr(spec.attribute));
      }
    }
  }
  return vocab;
}

FeatureSchema build_schema(const std::vector<EncoderSpec>& specs, const Vocabulary& vocab) {
  FeatureSchema schema;
  for (const auto& spec : specs) {
    switch (spec.kind) {
      case EncoderKind::OneHotLast:
      case EncoderKind::OneHotCounts:
        for (const auto& v : vocab.values(spec.id)) {
          schema.names.push_back(spec.id + "[" + v.to_string() + "]");
        }
        break;
      case EncoderKind::AttributeLast:
        schema.names.push_back(spec.id);
        break;
      case EncoderKind::TimeFeatures:
        schema.names.push_back(spec.id + ".since_prev");
        schema.names.push_back(spec.id + ".since_midnight");
        schema.names.push_back(spec.id + ".since_week_start");
        break;
    }
  }
  return schema;
}

// --- encoding -------------------------------------------------------------------

FeatureEncoder::FeatureEncoder(std::vector<EncoderSpec> specs, Vocabulary vocab)
    : specs_(std::move(specs)), vocab_(std::move(vocab)),
      schema_(build_schema(specs_, vocab_)), schema_hash_(schema_.hash()) {}

FeatureEncoder FeatureEncoder::fit(const EventLog& training_log,
                                   std::vector<EncoderSpec> specs) {
  Vocabulary vocab = fit_vocabulary(training_log, specs);
  return FeatureEncoder(std::move(specs), std::move(vocab));
}

FeatureVector FeatureEncoder::encode(const TracePrefix& p, foe::EvalWarnings* warn) const {
  FeatureVector out;
  out.values.reserve(schema_.names.size());
  out.schema_hash = schema_hash_;

  const Event& current = p.at(p.curr());
  for (const auto& spec : specs_) {
    switch (spec.kind) {
      case EncoderKind::OneHotLast: {
        const auto& values = vocab_.values(spec.id);
        std::size_t base = out.values.size();
        out.values.resize(base + values.size(), 0.0);
        const AttrValue& v = current.attr(spec.attribute);
        if (!v.is_undefined()) {
          auto idx = vocab_.index_of(spec.id, v);
          if (idx) {
            out.values[base + *idx] = 1.0;
          } else if (warn) {
            ++warn->unseen_values;  // unseen at prediction time: all zeros
          }
        }
        break;
      }
      case EncoderKind::OneHotCounts: {
        const auto& values = vocab_.values(spec.id);
        std::size_t base = out.values.size();
        out.values.resize(base + values.size(), 0.0);
        for (std::size_t i = 1; i <= p.curr(); ++i) {
          const AttrValue& v = p.at(i).attr(spec.attribute);
          if (v.is_undefined()) continue;
          auto idx = vocab_.index_of(spec.id, v);
          if (idx) {
            out.values[base + *idx] += 1.0;
          } else if (warn) {
            ++warn->unseen_values;
          }
        }
        break;
      }
      case EncoderKind::AttributeLast: {
        const AttrValue& v = current.attr(spec.attribute);
        if (v.is_numeric()) {
          out.values.push_back(v.number());
        } else if (v.is_undefined()) {
          out.values.push_back(0.0);
        } else {
          auto idx = vocab_.index_of(spec.id, v);
          if (idx) {
            out.values.push_back(static_cast<double>(*idx + 1));  // 1-based code
          } else {
            out.values.push_back(0.0);
            if (warn) ++warn->unseen_values;
          }
        }
        break;
      }
      case EncoderKind::TimeFeatures: {
        const AttrValue& now = current.attr("time:timestamp");
        if (!now.is_numeric()) {
          out.values.insert(out.values.end(), {0.0, 0.0, 0.0});
          if (warn) ++warn->missing_timestamps;
          break;
        }
        double since_prev = 0.0;
        if (p.curr() > 1) {
          const AttrValue& prev = p.at(p.curr() - 1).attr("time:timestamp");
          if (prev.is_numeric()) {
            since_prev = now.number() - prev.number();
          } else if (warn) {
            ++warn->missing_timestamps;
          }
        }
        out.values.push_back(since_prev);
        out.values.push_back(ms_since_midnight(now.number()));
        out.values.push_back(ms_since_week_start(now.number()));
        break;
      }
    }
  }
  return out;
}

FeatureVector encode_prefix(const TracePrefix& p, const std::vector<EncoderSpec>& specs,
                            const Vocabulary& vocab, foe::EvalWarnings* warn) {
  FeatureEncoder enc(specs, vocab);
  return enc.encode(p, warn);
}

}  // namespace procast
