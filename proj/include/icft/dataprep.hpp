#ifndef ICFT_DATAPREP_HPP
#define ICFT_DATAPREP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace icft {

enum class AttrKind { Numeric, Categorical };

struct Attribute {
    std::string name;
    AttrKind kind;
};

// Attribute layout of a dataset. The class attribute is one of `attributes`;
// instances carry the remaining attributes ("feature slots") in document order.
struct Schema {
    std::vector<Attribute> attributes;
    std::size_t class_index = 0;
    std::string missing_token = "?";

    std::size_t feature_count() const { return attributes.size() - 1; }
    // Maps feature slot -> index into `attributes` (skips the class column).
    std::size_t attr_of_slot(std::size_t slot) const {
        return slot < class_index ? slot : slot + 1;
    }
    const Attribute& feature(std::size_t slot) const {
        return attributes[attr_of_slot(slot)];
    }
};

// {"attributes":[{"name":...,"kind":"numeric"|"categorical"},...],
//  "class":"<name>", "missing_token":"?"}
Schema parse_schema(const nlohmann::json& doc);
nlohmann::json schema_json(const Schema& schema);

struct Cell {
    enum class State { Missing, Num, Cat };
    State state = State::Missing;
    double num = 0.0;
    int cat = -1;

    static Cell missing() { return {}; }
    static Cell number(double v) { return {State::Num, v, -1}; }
    static Cell category(int id) { return {State::Cat, 0.0, id}; }
    bool is_missing() const { return state == State::Missing; }

    bool operator==(const Cell& o) const {
        if (state != o.state) return false;
        if (state == State::Num) return num == o.num;
        if (state == State::Cat) return cat == o.cat;
        return true;
    }
};

struct Instance {
    std::vector<Cell> values;   // one per feature slot
    std::optional<int> label;   // class id; empty while unlabeled
};

// Interned category names, one table per categorical column.
struct Dictionary {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> ids;

    int intern(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(names.size());
        names.push_back(name);
        ids.emplace(name, id);
        return id;
    }
    int lookup(const std::string& name) const {
        auto it = ids.find(name);
        return it == ids.end() ? -1 : it->second;
    }
    std::size_t size() const { return names.size(); }
};

struct Dataset {
    Schema schema;
    std::vector<Dictionary> feature_dicts;  // indexed by feature slot; unused for numeric
    Dictionary class_dict;
    std::vector<Instance> instances;
};

struct ImputationPolicy {
    double skew_threshold = 1.0;  // |g1| above this -> median instead of mean
};

// Sample skewness g1 = m3 / m2^{3/2} (central moments over the given values).
// Zero-variance columns score 0. Throws on fewer than 2 values.
double skewness(const std::vector<double>& column);

// Fills every missing feature cell: numeric by mean (or median when the
// column is skewed past the policy threshold), categorical by mode with ties
// to the lowest id. Labels are never imputed. Non-missing cells are untouched.
std::vector<Instance> impute_missing(const std::vector<Instance>& instances,
                                     const Schema& schema,
                                     const ImputationPolicy& policy = {});

enum class NormalizeMethod { MinMax, ZScore, Decimal };

std::vector<double> normalize_column(const std::vector<double>& column,
                                     NormalizeMethod method);

// CSV I/O against a schema; header row must carry the schema names.
Dataset load_csv(std::istream& in, const Schema& schema);
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace icft

#endif
