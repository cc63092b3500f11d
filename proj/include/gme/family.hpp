#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gme/states.hpp"

namespace gme {

/// One-parameter family of W-type states.
///
/// Grammar: comma-separated equality chains over {a,b,c,d} and numeric
/// literals, e.g. "a=b=c" or "b=c,d=0". One named coefficient is the sweep
/// parameter; every coefficient not pinned by a chain and not the parameter
/// must fall into a single equality class, which normalization determines.
/// Anything else is over- or under-determined and rejected.
class FamilySpec {
 public:
  static FamilySpec parse(std::string_view constraints, std::string_view param) {
    FamilySpec spec;
    spec.param_index_ = coeff_index(param);
    if (spec.param_index_ < 0)
      throw std::invalid_argument("family: sweep parameter must be one of a,b,c,d");

    // union-find over the four coefficients
    std::array<int, 4> root{0, 1, 2, 3};
    auto find = [&](int i) {
      while (root[i] != i) i = root[i];
      return i;
    };
    std::array<std::optional<double>, 4> pinned{};

    for (const auto& chain : split(constraints, ',')) {
      if (chain.empty()) continue;
      std::vector<int> members;
      std::optional<double> value;
      for (const auto& term : split(chain, '=')) {
        const int idx = coeff_index(term);
        if (idx >= 0) {
          members.push_back(idx);
          continue;
        }
        double v = 0.0;
        const char* first = term.data();
        const auto [ptr, ec] = std::from_chars(first, first + term.size(), v);
        if (ec != std::errc() || ptr != first + term.size())
          throw std::invalid_argument("family: bad term '" + std::string(term) + "'");
        if (v < 0.0) throw std::invalid_argument("family: pinned values must be nonnegative");
        if (value && *value != v)
          throw std::invalid_argument("family: conflicting pinned values in one chain");
        value = v;
      }
      if (members.empty())
        throw std::invalid_argument("family: a chain needs at least one coefficient name");
      for (std::size_t i = 1; i < members.size(); ++i)
        root[find(members[i])] = find(members[0]);
      if (value) {
        const int r = find(members[0]);
        if (pinned[r] && *pinned[r] != *value)
          throw std::invalid_argument("family: conflicting pinned values");
        pinned[r] = *value;
      }
    }

    // collapse to per-coefficient class ids, propagate pins to roots
    for (int i = 0; i < 4; ++i) spec.class_of_[i] = find(i);
    for (int i = 0; i < 4; ++i)
      if (pinned[i] && find(i) != i) {
        if (pinned[find(i)] && *pinned[find(i)] != *pinned[i])
          throw std::invalid_argument("family: conflicting pinned values");
        pinned[find(i)] = pinned[i];
      }
    for (int i = 0; i < 4; ++i) spec.pinned_[i] = pinned[i];

    const int param_class = spec.class_of_[spec.param_index_];
    if (spec.pinned_[param_class])
      throw std::invalid_argument("family: sweep parameter is pinned by a constraint");

    int free_classes = 0;
    for (int i = 0; i < 4; ++i) {
      if (spec.class_of_[i] != i) continue;  // not a root
      if (i == param_class || spec.pinned_[i]) continue;
      ++free_classes;
      spec.free_class_ = i;
    }
    if (free_classes == 0)
      throw std::invalid_argument(
          "family: over-determined (no coefficient left for normalization)");
    if (free_classes > 1)
      throw std::invalid_argument(
          "family: under-determined (more than one unconstrained coefficient group)");
    return spec;
  }

  /// Resolve the family at parameter value t. Throws when no valid
  /// normalized nonnegative state exists there.
  WStateParams at(double t) const {
    if (t < 0.0) throw std::invalid_argument("family: parameter value must be nonnegative");
    std::array<double, 4> coeff{};
    double used = 0.0;
    int free_count = 0;
    const int param_class = class_of_[param_index_];
    for (int i = 0; i < 4; ++i) {
      const int cls = class_of_[i];
      if (cls == param_class) {
        coeff[i] = t;
        used += t * t;
      } else if (pinned_[cls]) {
        coeff[i] = *pinned_[cls];
        used += coeff[i] * coeff[i];
      } else {
        ++free_count;
      }
    }
    const double rest = 1.0 - used;
    if (rest < -1e-12)
      throw std::invalid_argument("family: parameter value leaves no norm for free coefficients");
    const double v = std::sqrt(std::max(0.0, rest) / free_count);
    for (int i = 0; i < 4; ++i)
      if (class_of_[i] == free_class_) coeff[i] = v;
    return WStateParams::renormalized(coeff[0], coeff[1], coeff[2], coeff[3]);
  }

  int param_index() const { return param_index_; }
  static constexpr std::array<const char*, 4> names = {"a", "b", "c", "d"};

 private:
  FamilySpec() = default;

  static int coeff_index(std::string_view s) {
    if (s.size() != 1) return -1;
    switch (s[0]) {
      case 'a': return 0;
      case 'b': return 1;
      case 'c': return 2;
      case 'd': return 3;
      default: return -1;
    }
  }

  static std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t end = s.find(sep, start);
      if (end == std::string_view::npos) end = s.size();
      auto piece = s.substr(start, end - start);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front())))
        piece.remove_prefix(1);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back())))
        piece.remove_suffix(1);
      out.push_back(piece);
      if (end == s.size()) break;
      start = end + 1;
    }
    return out;
  }

  int param_index_ = -1;
  int free_class_ = -1;
  std::array<int, 4> class_of_{};
  std::array<std::optional<double>, 4> pinned_{};
};

}  // namespace gme
