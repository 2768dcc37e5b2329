#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace pltor {

/// Minimal ordered JSON emitter. Doubles are printed with 17 significant
/// digits so reports round-trip bit-exactly and runs are byte-identical.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object() { open("{"); return *this; }
  JsonWriter& end_object() { close("}"); return *this; }
  JsonWriter& begin_array() { open("["); return *this; }
  JsonWriter& end_array() { close("]"); return *this; }

  JsonWriter& key(const std::string& k) {
    comma();
    out_ += '"';
    escape(k);
    out_ += "\":";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    comma();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ += buf;
    return *this;
  }
  JsonWriter& value(long v) {
    comma();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<long>(v)); }
  JsonWriter& value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    comma();
    out_ += '"';
    escape(v);
    out_ += '"';
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }

  template <typename T>
  JsonWriter& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }
  JsonWriter& kv(const std::string& k, const std::vector<int>& v) {
    key(k);
    begin_array();
    for (int x : v) value(x);
    return end_array();
  }

 private:
  void open(const char* b) {
    comma();
    out_ += b;
    depth_first_.push_back(true);
  }
  void close(const char* b) {
    out_ += b;
    depth_first_.pop_back();
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!depth_first_.empty()) {
      if (!depth_first_.back())
        out_ += ',';
      else
        depth_first_.back() = false;
    }
  }
  void escape(const std::string& s) {
    for (char ch : s) {
      if (ch == '"' || ch == '\\') { out_ += '\\'; out_ += ch; }
      else if (ch == '\n') out_ += "\\n";
      else out_ += ch;
    }
  }

  std::string out_;
  std::vector<bool> depth_first_;
  bool pending_value_ = false;
};

}  // namespace pltor
