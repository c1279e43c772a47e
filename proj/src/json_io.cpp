#include "boxsearch/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace boxsearch {

namespace {

// SAX handler that builds a DOM but stores fractional number literals as
// their source strings, so no precision is lost before rational parsing.
class ExactSax {
 public:
  using number_integer_t = json::number_integer_t;
  using number_unsigned_t = json::number_unsigned_t;
  using number_float_t = json::number_float_t;
  using string_t = json::string_t;
  using binary_t = json::binary_t;

  json root;

  bool null() { return add(json(nullptr)); }
  bool boolean(bool v) { return add(json(v)); }
  bool number_integer(number_integer_t v) { return add(json(v)); }
  bool number_unsigned(number_unsigned_t v) { return add(json(v)); }
  bool number_float(number_float_t, const string_t& s) { return add(json(s)); }
  bool string(string_t& v) { return add(json(v)); }
  bool binary(binary_t&) {
    throw invalid_instance_error("binary values are not supported in instance JSON");
  }
  bool start_object(std::size_t) { return push(json::object()); }
  bool key(string_t& v) {
    pending_key_ = v;
    have_key_ = true;
    return true;
  }
  bool end_object() { return pop(); }
  bool start_array(std::size_t) { return push(json::array()); }
  bool end_array() { return pop(); }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    throw invalid_instance_error("JSON parse error at byte " + std::to_string(pos) + ": " +
                                 ex.what());
  }

 private:
  bool add(json v) {
    json* slot = place();
    *slot = std::move(v);
    return true;
  }

  bool push(json v) {
    json* slot = place();
    *slot = std::move(v);
    stack_.push_back(slot);
    return true;
  }

  bool pop() {
    stack_.pop_back();
    return true;
  }

  json* place() {
    if (stack_.empty()) return &root;
    json* top = stack_.back();
    if (top->is_array()) {
      top->push_back(json());
      return &top->back();
    }
    json* slot = &(*top)[pending_key_];
    have_key_ = false;
    return slot;
  }

  std::vector<json*> stack_;
  std::string pending_key_;
  bool have_key_ = false;
};

}  // namespace

json parse_json_exact(const std::string& text) {
  ExactSax sax;
  json::sax_parse(text, &sax);
  return std::move(sax.root);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_instance_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_exact(buf.str());
}

std::string format_signif(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace boxsearch
