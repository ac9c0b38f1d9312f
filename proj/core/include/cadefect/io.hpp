#pragma once

#include <map>
#include <optional>
#include <string>

#include "cadefect/ca.hpp"
#include "cadefect/subshift.hpp"
#include "cadefect/symbolic.hpp"

namespace cadefect::io {

struct LoadedSubshift {
  std::string name;
  std::optional<subshift::Subshift1D> one;
  std::optional<subshift::Shift2D> two;
  int box = 2;  // fundamental box for 2D periodic patterns

  const symbolic::Alphabet& alphabet() const { return one ? one->alphabet() : two->alphabet(); }
};

struct LoadedRule {
  std::string name;
  std::optional<ca::Ca1D> one;
  std::optional<ca::Ca2D> two;
};

struct LoadedConfig {
  enum class Kind { ep, cyclic, grid };
  Kind kind = Kind::ep;
  symbolic::EpConfig ep;
  symbolic::CyclicConfig cyclic;
  symbolic::Grid2D grid;
};

// All parsers throw Error(parse) on malformed input.
LoadedSubshift parse_subshift(const std::string& text);
LoadedRule parse_rule(const std::string& text);
LoadedConfig parse_config(const std::string& text, const symbolic::Alphabet& alphabet);

std::string read_file(const std::string& path);
LoadedSubshift load_subshift(const std::string& path);
LoadedRule load_rule(const std::string& path);
LoadedConfig load_config(const std::string& path, const symbolic::Alphabet& alphabet);

}  // namespace cadefect::io
