#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hoops::csv {

// Shortest representation that round-trips through a double parse.
std::string format_double(double v);

struct Row {
    std::vector<std::string> fields;
    long line = 0;  // 1-based line number in the source file
};

// Reads a comma-separated file with a mandatory header row. The header must
// match `expected_header` exactly; every row must have the same number of
// fields. No quoting support: fields may not contain commas or newlines.
class Table {
public:
    static Table read_file(const std::string& path,
                           const std::vector<std::string>& expected_header);

    const std::vector<Row>& rows() const { return rows_; }

private:
    std::vector<Row> rows_;
};

// Field accessors with line-numbered errors.
double parse_double_field(const Row& row, std::size_t idx, const char* name);
std::int64_t parse_int_field(const Row& row, std::size_t idx, const char* name);
bool parse_bool_field(const Row& row, std::size_t idx, const char* name);  // "0"/"1"

// Buffered writer that joins fields with commas.
class Writer {
public:
    explicit Writer(const std::string& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void write_row(const std::vector<std::string>& fields);
    void close();

private:
    void flush_buf();

    std::string path_;
    std::string buf_;
    void* out_;  // std::ofstream, kept out of the header
    bool closed_ = false;
};

}  // namespace hoops::csv
