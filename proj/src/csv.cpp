#include "hoops/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hoops/errors.hpp"

namespace hoops::csv {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

Table Table::read_file(const std::string& path,
                       const std::vector<std::string>& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);

    Table t;
    std::string line;
    long lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (!header_seen) {
            if (fields != expected_header) {
                std::ostringstream os;
                os << path << ": unexpected header '" << line << "'";
                throw ParseError(os.str(), lineno);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != expected_header.size()) {
            std::ostringstream os;
            os << path << ": expected " << expected_header.size() << " fields, got "
               << fields.size();
            throw ParseError(os.str(), lineno);
        }
        t.rows_.push_back(Row{std::move(fields), lineno});
    }
    if (!header_seen) throw ParseError(path + ": missing header row");
    return t;
}

double parse_double_field(const Row& row, std::size_t idx, const char* name) {
    const std::string& s = row.fields[idx];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(std::string("bad numeric field '") + name + "': '" + s + "'",
                         row.line);
    return v;
}

std::int64_t parse_int_field(const Row& row, std::size_t idx, const char* name) {
    const std::string& s = row.fields[idx];
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(std::string("bad integer field '") + name + "': '" + s + "'",
                         row.line);
    return v;
}

bool parse_bool_field(const Row& row, std::size_t idx, const char* name) {
    const std::string& s = row.fields[idx];
    if (s == "0") return false;
    if (s == "1") return true;
    throw ParseError(std::string("bad boolean field '") + name + "': '" + s + "'",
                     row.line);
}

Writer::Writer(const std::string& path) : path_(path) {
    buf_.reserve(1 << 20);
    auto* out = new std::ofstream(path, std::ios::binary | std::ios::trunc);
    out_ = out;
    if (!*out) {
        delete out;
        out_ = nullptr;
        throw ParseError("cannot open file for writing: " + path);
    }
}

Writer::~Writer() {
    try {
        close();
    } catch (...) {
    }
    delete static_cast<std::ofstream*>(out_);
}

void Writer::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buf_.push_back(',');
        buf_ += fields[i];
    }
    buf_.push_back('\n');
    if (buf_.size() >= (1 << 20)) flush_buf();
}

void Writer::flush_buf() {
    auto* out = static_cast<std::ofstream*>(out_);
    out->write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
}

void Writer::close() {
    if (closed_ || out_ == nullptr) return;
    closed_ = true;
    auto* out = static_cast<std::ofstream*>(out_);
    flush_buf();
    out->flush();
    if (!*out) throw ParseError("write failed: " + path_);
    out->close();
}

}  // namespace hoops::csv
