#include "icft/dataprep.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "icft/csv.hpp"
#include "icft/error.hpp"

namespace icft {

Schema parse_schema(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("attributes") || !doc.contains("class"))
        throw Error("BadSchemaDocument", "expected object with \"attributes\" and \"class\"");
    Schema schema;
    std::set<std::string> seen;
    for (const auto& a : doc.at("attributes")) {
        Attribute attr;
        attr.name = a.at("name").get<std::string>();
        std::string kind = a.at("kind").get<std::string>();
        if (kind == "numeric") attr.kind = AttrKind::Numeric;
        else if (kind == "categorical") attr.kind = AttrKind::Categorical;
        else throw Error("BadAttributeKind", attr.name + ": " + kind);
        if (!seen.insert(attr.name).second)
            throw Error("DuplicateAttribute", attr.name);
        schema.attributes.push_back(std::move(attr));
    }
    std::string cls = doc.at("class").get<std::string>();
    auto it = std::find_if(schema.attributes.begin(), schema.attributes.end(),
                           [&](const Attribute& a) { return a.name == cls; });
    if (it == schema.attributes.end())
        throw Error("MissingClassAttribute", cls);
    schema.class_index = static_cast<std::size_t>(it - schema.attributes.begin());
    if (it->kind != AttrKind::Categorical)
        throw Error("ClassMustBeCategorical", cls);
    if (schema.attributes.size() < 2)
        throw Error("NoFeatureAttributes", "schema needs at least one non-class attribute");
    if (doc.contains("missing_token"))
        schema.missing_token = doc.at("missing_token").get<std::string>();
    return schema;
}

nlohmann::json schema_json(const Schema& schema) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : schema.attributes)
        attrs.push_back({{"name", a.name},
                         {"kind", a.kind == AttrKind::Numeric ? "numeric" : "categorical"}});
    return {{"attributes", attrs},
            {"class", schema.attributes[schema.class_index].name},
            {"missing_token", schema.missing_token}};
}

double skewness(const std::vector<double>& column) {
    if (column.size() < 2)
        throw Error("TooFewValues", "skewness needs at least 2 values");
    double n = static_cast<double>(column.size());
    double mean = 0;
    for (double v : column) mean += v;
    mean /= n;
    double m2 = 0, m3 = 0;
    for (double v : column) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<Instance> impute_missing(const std::vector<Instance>& instances,
                                     const Schema& schema,
                                     const ImputationPolicy& policy) {
    std::vector<Instance> out = instances;
    std::size_t slots = schema.feature_count();
    for (std::size_t slot = 0; slot < slots; ++slot) {
        const Attribute& attr = schema.feature(slot);
        bool any_missing = false;
        for (const auto& x : out)
            if (x.values[slot].is_missing()) { any_missing = true; break; }
        if (!any_missing) continue;

        if (attr.kind == AttrKind::Numeric) {
            std::vector<double> present;
            for (const auto& x : out)
                if (!x.values[slot].is_missing()) present.push_back(x.values[slot].num);
            if (present.empty())
                throw Error("AllMissingColumn", attr.name);
            double fill;
            double g1 = present.size() < 2 ? 0.0 : skewness(present);
            if (std::fabs(g1) <= policy.skew_threshold) {
                double mean = 0;
                for (double v : present) mean += v;
                fill = mean / static_cast<double>(present.size());
            } else {
                fill = median_of(present);
            }
            for (auto& x : out)
                if (x.values[slot].is_missing()) x.values[slot] = Cell::number(fill);
        } else {
            std::map<int, long long> freq;
            for (const auto& x : out)
                if (!x.values[slot].is_missing()) ++freq[x.values[slot].cat];
            if (freq.empty())
                throw Error("AllMissingColumn", attr.name);
            // mode; std::map iteration gives the lowest id on ties
            int mode = freq.begin()->first;
            long long best = freq.begin()->second;
            for (const auto& [id, c] : freq)
                if (c > best) { mode = id; best = c; }
            for (auto& x : out)
                if (x.values[slot].is_missing()) x.values[slot] = Cell::category(mode);
        }
    }
    return out;
}

std::vector<double> normalize_column(const std::vector<double>& column,
                                     NormalizeMethod method) {
    if (column.empty())
        throw Error("DegenerateColumn", "empty column");
    std::vector<double> out(column.size());
    switch (method) {
        case NormalizeMethod::MinMax: {
            auto [lo, hi] = std::minmax_element(column.begin(), column.end());
            if (*lo == *hi)
                throw Error("DegenerateColumn", "minmax requires max > min");
            for (std::size_t i = 0; i < column.size(); ++i)
                out[i] = (column[i] - *lo) / (*hi - *lo);
            break;
        }
        case NormalizeMethod::ZScore: {
            double n = static_cast<double>(column.size());
            double mean = 0;
            for (double v : column) mean += v;
            mean /= n;
            double var = 0;
            for (double v : column) var += (v - mean) * (v - mean);
            var /= n;  // population variance
            if (var == 0)
                throw Error("DegenerateColumn", "zscore requires nonzero std");
            double sd = std::sqrt(var);
            for (std::size_t i = 0; i < column.size(); ++i)
                out[i] = (column[i] - mean) / sd;
            break;
        }
        case NormalizeMethod::Decimal: {
            double mx = 0;
            for (double v : column) mx = std::max(mx, std::fabs(v));
            int j = 0;
            double scale = 1.0;
            while (mx / scale >= 1.0) {
                ++j;
                scale = std::pow(10.0, j);
            }
            for (std::size_t i = 0; i < column.size(); ++i)
                out[i] = column[i] / scale;
            break;
        }
    }
    return out;
}

Dataset load_csv(std::istream& in, const Schema& schema) {
    Dataset data;
    data.schema = schema;
    data.feature_dicts.resize(schema.feature_count());
    auto rows = csv::read(in);
    if (rows.empty())
        throw Error("EmptyCsv", "no header row");
    const auto& header = rows[0];
    // column index of every schema attribute
    std::vector<std::size_t> col_of(schema.attributes.size());
    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
        auto it = std::find(header.begin(), header.end(), schema.attributes[a].name);
        if (it == header.end())
            throw Error("MissingColumn", schema.attributes[a].name);
        col_of[a] = static_cast<std::size_t>(it - header.begin());
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw Error("RaggedRow", "row " + std::to_string(r));
        Instance x;
        x.values.resize(schema.feature_count());
        for (std::size_t slot = 0; slot < schema.feature_count(); ++slot) {
            std::size_t a = schema.attr_of_slot(slot);
            const std::string& cell = row[col_of[a]];
            if (cell == schema.missing_token) {
                x.values[slot] = Cell::missing();
            } else if (schema.attributes[a].kind == AttrKind::Numeric) {
                try {
                    std::size_t pos = 0;
                    double v = std::stod(cell, &pos);
                    if (pos != cell.size()) throw std::invalid_argument(cell);
                    x.values[slot] = Cell::number(v);
                } catch (const std::exception&) {
                    throw Error("BadNumericCell",
                                schema.attributes[a].name + " row " + std::to_string(r) +
                                    ": '" + cell + "'");
                }
            } else {
                x.values[slot] = Cell::category(data.feature_dicts[slot].intern(cell));
            }
        }
        const std::string& lbl = row[col_of[schema.class_index]];
        if (lbl != schema.missing_token)
            x.label = data.class_dict.intern(lbl);
        data.instances.push_back(std::move(x));
    }
    return data;
}

void write_csv(std::ostream& out, const Dataset& data) {
    const Schema& schema = data.schema;
    std::vector<std::string> row;
    for (const auto& a : schema.attributes) row.push_back(a.name);
    csv::write_row(out, row);
    for (const auto& x : data.instances) {
        row.clear();
        for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
            if (a == schema.class_index) {
                row.push_back(x.label ? data.class_dict.names[*x.label]
                                      : schema.missing_token);
                continue;
            }
            std::size_t slot = a < schema.class_index ? a : a - 1;
            const Cell& cell = x.values[slot];
            if (cell.is_missing()) {
                row.push_back(schema.missing_token);
            } else if (cell.state == Cell::State::Num) {
                std::ostringstream os;
                os.precision(17);
                os << cell.num;
                row.push_back(os.str());
            } else {
                row.push_back(data.feature_dicts[slot].names[cell.cat]);
            }
        }
        csv::write_row(out, row);
    }
}

}  // namespace icft
