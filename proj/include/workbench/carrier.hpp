#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace workbench {

// A small finite set with a fixed element order. Element i is addressed by
// its canonical index 0..size-1; subsets are bitmasks over those indices.
class FiniteCarrier {
public:
  static constexpr std::size_t kMaxSize = 16;

  explicit FiniteCarrier(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty())
      throw std::invalid_argument("carrier must have at least one element");
    if (labels_.size() > kMaxSize)
      throw std::invalid_argument("carrier larger than " + std::to_string(kMaxSize) + " elements");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const std::string& l = labels_[i];
      if (l.empty())
        throw std::invalid_argument("empty carrier label");
      for (char c : l)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}')
          throw std::invalid_argument("carrier label '" + l + "' contains whitespace or braces");
      if (!index_.emplace(l, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate carrier label '" + l + "'");
    }
  }

  // convenience: elements "0", "1", ..., "n-1"
  static FiniteCarrier numbered(std::size_t n) {
    std::vector<std::string> ls;
    ls.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ls.push_back(std::to_string(i));
    return FiniteCarrier(std::move(ls));
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> find(std::string_view l) const {
    auto it = index_.find(std::string(l));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(std::string_view l) const {
    if (auto i = find(l)) return *i;
    throw std::invalid_argument("label '" + std::string(l) + "' is not in the carrier");
  }

  bool operator==(const FiniteCarrier& o) const { return labels_ == o.labels_; }

  // "{a,c}" for the mask over this carrier, elements in canonical order
  std::string subset_label(std::uint32_t mask) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (mask >> i & 1u) {
        if (!first) out += ',';
        out += labels_[i];
        first = false;
      }
    }
    out += '}';
    return out;
  }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

} // namespace workbench
