#ifndef O2_CLI_IO_HPP
#define O2_CLI_IO_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace o2cli {

// Floats serialized with 17 significant digits; non-finite values map to
// null so the JSON stays parseable.
inline std::string fmt(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_csv(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

// Minimal streaming JSON writer with insertion-ordered fields.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    void begin_object() {
        sep();
        os_ << '{';
        fresh_ = true;
    }
    void end_object() {
        os_ << '}';
        fresh_ = false;
    }
    void begin_array() {
        sep();
        os_ << '[';
        fresh_ = true;
    }
    void end_array() {
        os_ << ']';
        fresh_ = false;
    }
    void key(const std::string& k) {
        sep();
        os_ << '"' << json_escape(k) << "\":";
        fresh_ = true;
    }
    void value(double v) {
        sep();
        os_ << fmt(v);
        fresh_ = false;
    }
    void value(long long v) {
        sep();
        os_ << v;
        fresh_ = false;
    }
    void value(bool v) {
        sep();
        os_ << (v ? "true" : "false");
        fresh_ = false;
    }
    void value(const std::string& v) {
        sep();
        os_ << '"' << json_escape(v) << '"';
        fresh_ = false;
    }
    void null() {
        sep();
        os_ << "null";
        fresh_ = false;
    }

private:
    void sep() {
        if (!fresh_) os_ << ',';
        fresh_ = true;
    }
    std::ostream& os_;
    bool fresh_ = true;
};

}  // namespace o2cli

#endif
