#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgrs/grid.hpp"

namespace kgrs::io {

// Minimal JSON emitter with deterministic output: fields in insertion order,
// floating point at 17 significant digits, no timestamps. Identical inputs
// produce byte-identical documents.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& complex_value(const Complex& v);  // emitted as [re, im]

  std::string take();

private:
  void separate();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool after_key_ = false;
};

std::string format_double(double v);

// Write-then-rename so readers never observe a partial report.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace kgrs::io
