#include "icft/csv.hpp"

#include <istream>
#include <ostream>

namespace icft::csv {

std::vector<std::vector<std::string>> read(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    int c;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
    };
    while ((c = in.get()) != std::istream::traits_type::eof()) {
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                field_started = true;  // next field exists even if empty
                break;
            case '\r':
                break;
            case '\n':
                if (!row.empty() || !field.empty() || field_started) end_row();
                break;
            default:
                field.push_back(ch);
                field_started = true;
                break;
        }
    }
    if (!row.empty() || !field.empty() || field_started) end_row();
    return rows;
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << quote_if_needed(row[i]);
    }
    out << '\n';
}

}  // namespace icft::csv
